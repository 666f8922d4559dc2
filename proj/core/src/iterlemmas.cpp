#include "nlheat/iterlemmas.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlheat/error.hpp"

namespace nlheat {

namespace {
constexpr double kRelTol = 1e-12;

bool leq(double a, double b) { return a <= b + kRelTol * std::max(std::abs(a), std::abs(b)); }
}  // namespace

DecayReport geometric_decay_check(const std::vector<double>& N, double d0, double e0, double eps) {
  require(d0 > 0.0 && eps > 0.0 && e0 > 1.0, ErrorCode::InvalidParameter,
          "decay check needs d0 > 0, eps > 0, e0 > 1");
  require(!N.empty(), ErrorCode::InvalidParameter, "empty sequence");
  for (double v : N)
    require(std::isfinite(v) && v >= 0.0, ErrorCode::InvalidParameter, "sequence entries must be finite and nonnegative");

  DecayReport rep;
  rep.length = N.size();
  for (std::size_t k = 0; k + 1 < N.size(); ++k) {
    const double bound = d0 * std::pow(e0, static_cast<double>(k)) * std::pow(N[k], 1.0 + eps);
    if (!leq(N[k + 1], bound))
      fail(ErrorCode::HypothesisViolation, "recursion hypothesis violated at k=" + std::to_string(k));
  }
  const double threshold = std::pow(d0, -1.0 / eps) * std::pow(e0, -1.0 / (eps * eps));
  rep.smallness_met = leq(N[0], threshold);
  if (!rep.smallness_met) return rep;
  for (std::size_t k = 0; k < N.size(); ++k) {
    const double bound = std::pow(e0, -static_cast<double>(k) / eps) * N[0];
    if (bound > 0.0) rep.worst_conclusion_ratio = std::max(rep.worst_conclusion_ratio, N[k] / bound);
    if (!leq(N[k], bound)) rep.conclusion_holds = false;
  }
  return rep;
}

DecayInstance random_decay_instance(std::mt19937_64& rng, std::size_t length) {
  require(length >= 1, ErrorCode::InvalidParameter, "sequence length must be positive");
  std::uniform_real_distribution<double> ud0(0.5, 2.0), ue0(1.1, 3.0), ueps(0.2, 1.5), ufrac(0.05, 1.0);
  DecayInstance inst;
  inst.d0 = ud0(rng);
  inst.e0 = ue0(rng);
  inst.eps = ueps(rng);
  const double threshold = std::pow(inst.d0, -1.0 / inst.eps) * std::pow(inst.e0, -1.0 / (inst.eps * inst.eps));
  inst.N.resize(length);
  inst.N[0] = threshold * ufrac(rng);
  for (std::size_t k = 0; k + 1 < length; ++k)
    inst.N[k + 1] = inst.d0 * std::pow(inst.e0, static_cast<double>(k)) * std::pow(inst.N[k], 1.0 + inst.eps);
  return inst;
}

double interpolation_ratio(double theta, double eps) {
  require(eps >= 0.0 && eps < 1.0, ErrorCode::InvalidParameter, "eps must lie in [0,1)");
  require(theta > 0.0, ErrorCode::InvalidParameter, "theta must be positive");
  // eps·mu^{-theta} = (1+eps)/2
  return std::pow(2.0 * eps / (1.0 + eps), 1.0 / theta);
}

double interpolation_bound(double c1, double c2, double theta, double eps) {
  require(std::isfinite(eps) && eps >= 0.0 && eps < 1.0, ErrorCode::InvalidParameter,
          "eps must lie in [0,1)");
  require(c1 >= 0.0 && c2 >= 0.0 && theta >= 0.0, ErrorCode::InvalidParameter,
          "c1, c2 and theta must be nonnegative");
  if (eps == 0.0) return 1.0;
  if (theta == 0.0) return 1.0 / (1.0 - eps);
  const double mu = interpolation_ratio(theta, eps);
  const double q = eps * std::pow(mu, -theta);
  return std::max(std::pow(1.0 - mu, -theta) / (1.0 - q), 1.0 / (1.0 - eps));
}

InterpolationCheck verify_interpolation(const std::vector<double>& t, const std::vector<double>& f,
                                        double c1, double c2, double theta, double eps) {
  require(t.size() == f.size() && t.size() >= 2, ErrorCode::InvalidParameter,
          "need at least two matching samples");
  require(std::is_sorted(t.begin(), t.end()), ErrorCode::InvalidParameter, "sample times must be sorted");
  InterpolationCheck out;
  out.constant = interpolation_bound(c1, c2, theta, eps);
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = i + 1; j < t.size(); ++j) {
      const double gap = t[j] - t[i];
      if (gap <= 0.0) continue;
      ++out.pairs;
      const double base = c1 * std::pow(gap, -theta) + c2;
      if (!leq(f[i], base + eps * f[j])) out.hypothesis_holds = false;
      const double rhs = out.constant * base;
      if (rhs > 0.0) out.worst_conclusion_ratio = std::max(out.worst_conclusion_ratio, f[i] / rhs);
      if (!leq(f[i], rhs)) out.conclusion_holds = false;
    }
  }
  return out;
}

InterpolationCheck verify_interpolation(const std::function<double(double)>& f, double t_lo,
                                        double t_hi, std::size_t samples, double c1, double c2,
                                        double theta, double eps) {
  require(samples >= 2 && t_hi > t_lo, ErrorCode::InvalidParameter, "bad sampling window");
  std::vector<double> t(samples), v(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    t[i] = t_lo + (t_hi - t_lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
    v[i] = f(t[i]);
  }
  return verify_interpolation(t, v, c1, c2, theta, eps);
}

}  // namespace nlheat
