#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "nlheat/lattice.hpp"

namespace nlheat {

/// dd((x,t),(y,tau)) = max(|x-y|, ((t-tau)/sigma)^{1/(2s)}) for tau < t, +inf otherwise.
double parabolic_distance(const Point& x, double t, const Point& y, double tau, int dim,
                          double sigma, double s);

/// Lattice points × time steps of a host cylinder.
class CoveringHost {
public:
  CoveringHost(int dim, double h, double dt, double r, double sigma, double s,
               std::vector<LatticeIndex> space_index, std::vector<Point> space,
               std::vector<std::int64_t> time_index, std::vector<double> times);

  int dim() const { return dim_; }
  double h() const { return h_; }
  double dt() const { return dt_; }
  double r() const { return r_; }
  double sigma() const { return sigma_; }
  double s() const { return s_; }
  double cell_measure() const { return cell_; }

  std::size_t num_space() const { return space_.size(); }
  std::size_t num_times() const { return times_.size(); }
  std::size_t size() const { return space_.size() * times_.size(); }

  /// Flat member number p + m·num_space().
  std::size_t flat(std::size_t p, std::size_t m) const { return p + m * space_.size(); }
  const Point& point(std::size_t p) const { return space_[p]; }
  const LatticeIndex& space_index(std::size_t p) const { return sidx_[p]; }
  double time(std::size_t m) const { return times_[m]; }
  std::int64_t time_index(std::size_t m) const { return tidx_[m]; }

  /// Spatial member at a lattice index, or -1.
  std::int64_t lookup_space(const LatticeIndex& idx) const;
  /// Time member at a time index, or -1.
  std::int64_t lookup_time(std::int64_t m) const;

private:
  int dim_;
  double h_, dt_, r_, sigma_, s_, cell_;
  std::vector<LatticeIndex> sidx_;
  std::vector<Point> space_;
  std::vector<std::int64_t> tidx_;
  std::vector<double> times_;
  LatticeIndex lo_{0, 0}, hi_{0, 0};
  std::vector<std::int64_t> table_;
  std::int64_t t_lo_ = 0;
  std::vector<std::int64_t> time_table_;
};

/// Host from the interior grid nodes and time steps of a cylinder.
std::shared_ptr<const CoveringHost> host_from_cylinder(const Grid& grid, const TimeGrid& time,
                                                       const Cylinder& cylinder);

/// Standalone host (Q_r)^+ centred at the origin with t0 = 0: cell-centred
/// nodes x_i = -r + (i + 1/2)h, h = 2r/nodes_across, kept when |x| < r, and
/// times t_j = -sigma r^{2s} + (j+1) dt, dt = sigma r^{2s}/steps.
std::shared_ptr<const CoveringHost> make_lattice_host(int dim, int nodes_across, int steps,
                                                      double r, double sigma, double s);

class ParabolicPointSet {
public:
  explicit ParabolicPointSet(std::shared_ptr<const CoveringHost> host);

  const CoveringHost& host() const { return *host_; }
  const std::shared_ptr<const CoveringHost>& host_ptr() const { return host_; }

  std::size_t size() const { return mask_.size(); }
  bool test(std::size_t i) const { return mask_[i] != 0; }
  void set(std::size_t i, bool on = true) { mask_[i] = on ? 1 : 0; }
  void fill(bool on);

  std::size_t count() const;
  double measure() const { return static_cast<double>(count()) * host_->cell_measure(); }
  bool empty() const { return count() == 0; }
  bool full() const { return count() == size(); }

  bool subset_of(const ParabolicPointSet& other) const;
  bool operator==(const ParabolicPointSet& other) const;

  const std::vector<std::uint8_t>& mask() const { return mask_; }

private:
  std::shared_ptr<const CoveringHost> host_;
  std::vector<std::uint8_t> mask_;
};

ParabolicPointSet random_set(std::shared_ptr<const CoveringHost> host, double density,
                             std::mt19937_64& rng);

/// rho_k = rho_max · 2^{-k/4}, k = 1..count.
std::vector<double> dilation_scales(double rho_max, std::size_t count = 16);

/// Union of Q+_{3rho}(X) ∩ host over member centres X and scales rho with
/// #(E ∩ Q+_{3rho}(X))·h^n·dt > gamma·|B_rho|·sigma·rho^{2s}. A member
/// (y, tau) stands for the cell with time span (tau - dt, tau] and lies in
/// Q+_{3rho}(X) when the cell midpoint does.
ParabolicPointSet dilate_set(const ParabolicPointSet& E, double gamma, double rho_max,
                             std::size_t scales = 16);

struct CoveringReport {
  double gamma = 0.0;
  double measure_set = 0.0;
  double measure_dilated = 0.0;
  double growth_threshold = 0.0;  // 2^{-(n+2s)}/gamma · |E|
  double tolerance = 0.0;         // (2n+2) cells
  bool growth_branch = false;
  bool full_branch = false;
  std::size_t scales = 0;
  std::string measure_convention;
  ParabolicPointSet dilated;
};

/// Evaluates both alternatives; DichotomyViolation if neither holds.
CoveringReport covering_dichotomy(const ParabolicPointSet& E, double gamma, double rho_max,
                                  std::size_t scales = 16);

/// Run-length text: "rle <length>" then whitespace separated count:bit tokens.
std::string write_mask_rle(const ParabolicPointSet& set);
ParabolicPointSet read_mask_rle(std::shared_ptr<const CoveringHost> host, const std::string& text);

}  // namespace nlheat
