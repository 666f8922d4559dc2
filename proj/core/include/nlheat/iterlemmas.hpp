#pragma once

#include <cstddef>
#include <functional>
#include <random>
#include <vector>

namespace nlheat {

struct DecayReport {
  bool smallness_met = false;   // N0 <= d0^{-1/eps} e0^{-1/eps^2}
  bool conclusion_holds = true; // N_k <= e0^{-k/eps} N0 on the prefix (only asserted when smallness_met)
  double worst_conclusion_ratio = 0.0;
  std::size_t length = 0;
};

/// Checks N_{k+1} <= d0·e0^k·N_k^{1+eps} on the prefix (HypothesisViolation
/// naming the first bad k otherwise) and, under the smallness condition on N0,
/// the geometric decay bound.
DecayReport geometric_decay_check(const std::vector<double>& N, double d0, double e0, double eps);

struct DecayInstance {
  std::vector<double> N;
  double d0 = 1.0;
  double e0 = 2.0;
  double eps = 1.0;
};

/// Random d0 in [0.5, 2], e0 in [1.1, 3], eps in [0.2, 1.5], N0 below the
/// smallness threshold and N_{k+1} = d0·e0^k·N_k^{1+eps} exactly.
DecayInstance random_decay_instance(std::mt19937_64& rng, std::size_t length = 16);

/// Constant c such that f(t) <= c1 (tau-t)^{-theta} + c2 + eps f(tau) for all
/// t < tau in an interval gives f(rho) <= c [c1 (R-rho)^{-theta} + c2].
double interpolation_bound(double c1, double c2, double theta, double eps);

/// Ratio mu of the intermediate points t_i = rho + (1 - mu^i)(R - rho).
double interpolation_ratio(double theta, double eps);

struct InterpolationCheck {
  double constant = 0.0;
  bool hypothesis_holds = true;
  bool conclusion_holds = true;
  double worst_conclusion_ratio = 0.0;  // max f(rho) / (c [c1 (R-rho)^{-theta} + c2])
  std::size_t pairs = 0;
};

/// Verification mode on samples f(t_j): tests the hypothesis over all sample
/// pairs and, when it holds, the conclusion with the returned constant.
InterpolationCheck verify_interpolation(const std::vector<double>& t, const std::vector<double>& f,
                                        double c1, double c2, double theta, double eps);

InterpolationCheck verify_interpolation(const std::function<double(double)>& f, double t_lo,
                                        double t_hi, std::size_t samples, double c1, double c2,
                                        double theta, double eps);

}  // namespace nlheat
