#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace nlheat {

using Point = std::array<double, 2>;
using LatticeIndex = std::array<int, 2>;

/// Open interval (n = 1) or open axis-aligned rectangle (n = 2).
struct Domain {
  int dim = 1;
  Point lo{0.0, 0.0};
  Point hi{1.0, 1.0};

  static Domain interval(double a, double b);
  static Domain rectangle(Point lo, Point hi);

  double diameter() const;
  bool contains(const Point& x) const;
  /// Euclidean distance from x to the closed domain (0 inside).
  double distance(const Point& x) const;
  /// Distance from an interior point to the boundary.
  double inner_distance(const Point& x) const;
};

double distance(const Point& a, const Point& b, int dim);

/// Uniform lattice x = lo + i·h restricted to Ω (interior) and to the
/// exterior shell within R_inf of Ω (collar). Interior nodes come first in
/// the node numbering, both blocks in lexicographic order with axis 0 fastest.
class Grid {
public:
  Grid(Domain domain, double h, double R_inf);

  int dim() const { return domain_.dim; }
  const Domain& domain() const { return domain_; }
  double h() const { return h_; }
  double R_inf() const { return R_inf_; }
  double cell_measure() const { return cell_; }

  std::size_t num_interior() const { return num_interior_; }
  std::size_t num_collar() const { return points_.size() - num_interior_; }
  std::size_t num_nodes() const { return points_.size(); }

  const Point& point(std::size_t j) const { return points_[j]; }
  const LatticeIndex& index(std::size_t j) const { return indices_[j]; }
  bool is_interior(std::size_t j) const { return j < num_interior_; }

  /// Node number at a lattice index, or -1 if the index is outside the grid.
  std::int64_t lookup(const LatticeIndex& idx) const;

  Point position(const LatticeIndex& idx) const;

  /// Bounding box of all nodes in lattice indices (inclusive).
  const LatticeIndex& box_lo() const { return box_lo_; }
  const LatticeIndex& box_hi() const { return box_hi_; }

  bool same_as(const Grid& other) const;

private:
  Domain domain_;
  double h_;
  double R_inf_;
  double cell_;
  std::size_t num_interior_ = 0;
  std::vector<Point> points_;
  std::vector<LatticeIndex> indices_;
  LatticeIndex box_lo_{0, 0};
  LatticeIndex box_hi_{0, 0};
  std::vector<std::int32_t> table_;
};

/// Requires h > 0, h below the domain extent and R_inf >= 2·diam(Ω).
Grid build_grid(const Domain& domain, double h, double R_inf);

/// Uniform time nodes t_m = -T + m·dt, m = 0..steps, so t_steps = 0.
class TimeGrid {
public:
  TimeGrid() = default;
  /// dt is shrunk so that T/dt is an integer.
  TimeGrid(double T, double dt);

  double T() const { return T_; }
  double dt() const { return dt_; }
  std::size_t steps() const { return steps_; }
  std::size_t size() const { return steps_ + 1; }
  double time(std::size_t m) const;

  bool same_as(const TimeGrid& other) const;

private:
  double T_ = 0.0;
  double dt_ = 0.0;
  std::size_t steps_ = 0;
};

enum class CylinderKind { Standard, Fat, Plus, Minus };

const char* to_string(CylinderKind kind);
CylinderKind cylinder_kind_from_string(const std::string& name);

inline constexpr double kDefaultSigma = 0.3;

/// Ball B_r(x0) times a backward time interval (lo, hi] selected by kind.
class Cylinder {
public:
  Cylinder(int dim, Point center, double t0, double r, CylinderKind kind, double sigma, double s);

  int dim() const { return dim_; }
  const Point& center() const { return center_; }
  double t0() const { return t0_; }
  double r() const { return r_; }
  CylinderKind kind() const { return kind_; }
  double sigma() const { return sigma_; }
  double s() const { return s_; }

  /// Open-closed time interval (first, second].
  std::pair<double, double> interval() const;
  double time_length() const;
  double analytic_measure() const;

  bool contains_space(const Point& x) const;
  bool contains_time(double t, double dt) const;

  /// Interior node numbers of grid inside the ball (strict |x - x0| < r).
  std::vector<std::size_t> member_nodes(const Grid& grid) const;
  std::vector<std::size_t> member_steps(const TimeGrid& time) const;
  double discrete_measure(const Grid& grid, const TimeGrid& time) const;

private:
  int dim_;
  Point center_;
  double t0_;
  double r_;
  CylinderKind kind_;
  double sigma_;
  double s_;
};

void validate_sigma(double sigma);

/// Checks B_r(x0) ⊂ Ω and the time interval ⊂ [-T, 0].
Cylinder make_cylinder(const Grid& grid, const TimeGrid& time, const Point& center, double t0,
                       double r, CylinderKind kind, double sigma, double s);

}  // namespace nlheat
