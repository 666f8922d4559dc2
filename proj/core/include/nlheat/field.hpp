#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "nlheat/lattice.hpp"

namespace nlheat {

/// Values of a field beyond the collar: value + gradient·x. Zero is the
/// default; a nonzero gradient is allowed for the operator but makes the
/// far-field sup unbounded.
struct ExteriorRule {
  double value = 0.0;
  Point gradient{0.0, 0.0};

  static ExteriorRule zero() { return {}; }
  static ExteriorRule constant(double c) { return {c, {0.0, 0.0}}; }
  static ExteriorRule affine(double c, Point grad) { return {c, grad}; }

  double at(const Point& x, int dim) const;
  bool is_zero() const { return value == 0.0 && gradient[0] == 0.0 && gradient[1] == 0.0; }
  bool is_bounded() const { return gradient[0] == 0.0 && gradient[1] == 0.0; }
  /// sup |value| beyond the collar; throws for unbounded rules.
  double sup_abs() const;
};

using SpaceTimeFunction = std::function<double(const Point&, double)>;

/// Field sampled on Grid nodes (interior then collar) at every time node.
/// Column m of values() holds time step m.
class SpaceTimeField {
public:
  SpaceTimeField(std::shared_ptr<const Grid> grid, TimeGrid time);

  const Grid& grid() const { return *grid_; }
  const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }
  const TimeGrid& time() const { return time_; }

  Eigen::MatrixXd& values() { return values_; }
  const Eigen::MatrixXd& values() const { return values_; }

  double operator()(std::size_t node, std::size_t m) const { return values_(node, m); }
  double& operator()(std::size_t node, std::size_t m) { return values_(node, m); }

  auto interior(std::size_t m) { return values_.col(m).head(grid_->num_interior()); }
  auto interior(std::size_t m) const { return values_.col(m).head(grid_->num_interior()); }
  auto collar(std::size_t m) { return values_.col(m).tail(grid_->num_collar()); }
  auto collar(std::size_t m) const { return values_.col(m).tail(grid_->num_collar()); }

  const ExteriorRule& exterior(std::size_t m) const { return exterior_[m]; }
  void set_exterior(std::size_t m, ExteriorRule rule) { exterior_[m] = rule; }
  void set_exterior_all(ExteriorRule rule);

  /// Exact interior time derivative, when the producing scheme knows it.
  const std::optional<Eigen::MatrixXd>& derivative() const { return derivative_; }
  void set_derivative(Eigen::MatrixXd d) { derivative_ = std::move(d); }

  /// True if every collar value and every exterior rule vanish.
  bool vanishes_outside() const;
  bool all_finite() const;
  bool compatible(const SpaceTimeField& other) const;

private:
  std::shared_ptr<const Grid> grid_;
  TimeGrid time_;
  Eigen::MatrixXd values_;
  std::vector<ExteriorRule> exterior_;
  std::optional<Eigen::MatrixXd> derivative_;
};

/// Samples u at every node and time; the exterior rule at step m comes from
/// far(t_m) (zero if not given).
SpaceTimeField sample_field(std::shared_ptr<const Grid> grid, const TimeGrid& time,
                            const SpaceTimeFunction& u,
                            const std::function<ExteriorRule(double)>& far = {});

/// CSV with header "x[,y],t,value", one row per node and time step.
void write_field_csv(const SpaceTimeField& field, std::ostream& out, bool interior_only = false);

/// Binary dump, little-endian:
///   char[4] "NLHF", u32 version (1), u32 dim, u64 nodes, u64 times,
///   f64 times[times], f64 coords[nodes][dim], f64 values[times][nodes].
void write_field_binary(const SpaceTimeField& field, std::ostream& out);

struct FieldDump {
  int dim = 1;
  std::vector<double> times;
  std::vector<Point> coords;
  std::vector<double> values;  // row-major [time][node]
};
FieldDump read_field_binary(std::istream& in);

}  // namespace nlheat
