#include "nlheat/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nlheat/error.hpp"
#include "nlheat/kernel.hpp"

namespace nlheat {

namespace {
constexpr double kRoundTol = 1e-9;
}

Domain Domain::interval(double a, double b) {
  require(a < b, ErrorCode::InvalidParameter, "interval needs a < b");
  Domain d;
  d.dim = 1;
  d.lo = {a, 0.0};
  d.hi = {b, 0.0};
  return d;
}

Domain Domain::rectangle(Point lo, Point hi) {
  require(lo[0] < hi[0] && lo[1] < hi[1], ErrorCode::InvalidParameter,
          "rectangle needs lo < hi on both axes");
  Domain d;
  d.dim = 2;
  d.lo = lo;
  d.hi = hi;
  return d;
}

double Domain::diameter() const {
  double d2 = 0.0;
  for (int k = 0; k < dim; ++k) d2 += (hi[k] - lo[k]) * (hi[k] - lo[k]);
  return std::sqrt(d2);
}

bool Domain::contains(const Point& x) const {
  for (int k = 0; k < dim; ++k)
    if (!(x[k] > lo[k] && x[k] < hi[k])) return false;
  return true;
}

double Domain::distance(const Point& x) const {
  double d2 = 0.0;
  for (int k = 0; k < dim; ++k) {
    const double e = std::max({lo[k] - x[k], 0.0, x[k] - hi[k]});
    d2 += e * e;
  }
  return std::sqrt(d2);
}

double Domain::inner_distance(const Point& x) const {
  double d = std::numeric_limits<double>::infinity();
  for (int k = 0; k < dim; ++k) d = std::min({d, x[k] - lo[k], hi[k] - x[k]});
  return d;
}

double distance(const Point& a, const Point& b, int dim) {
  double d2 = 0.0;
  for (int k = 0; k < dim; ++k) d2 += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(d2);
}

Grid::Grid(Domain domain, double h, double R_inf) : domain_(domain), h_(h), R_inf_(R_inf) {
  const int n = domain_.dim;
  require(n == 1 || n == 2, ErrorCode::InvalidParameter, "dimension must be 1 or 2");
  require(h > 0.0 && std::isfinite(h), ErrorCode::InvalidParameter, "mesh width must be positive");
  cell_ = std::pow(h, n);

  std::array<int, 2> interior_count{1, 1};
  for (int k = 0; k < n; ++k) {
    const double extent = domain_.hi[k] - domain_.lo[k];
    interior_count[k] = static_cast<int>(std::ceil(extent / h - kRoundTol)) - 1;
    require(h < extent && interior_count[k] > 0, ErrorCode::DegenerateGrid,
            "mesh width " + std::to_string(h) + " exceeds the domain extent " +
                std::to_string(extent));
  }

  box_lo_ = {0, 0};
  box_hi_ = {0, 0};
  for (int k = 0; k < n; ++k) {
    const double extent = domain_.hi[k] - domain_.lo[k];
    box_lo_[k] = -static_cast<int>(std::floor(R_inf / h + kRoundTol));
    box_hi_[k] = static_cast<int>(std::floor((extent + R_inf) / h + kRoundTol));
  }

  const auto in_interior = [&](const LatticeIndex& idx) {
    for (int k = 0; k < n; ++k)
      if (idx[k] < 1 || idx[k] > interior_count[k]) return false;
    return true;
  };

  std::vector<LatticeIndex> collar;
  const int ny = (n == 2) ? box_hi_[1] - box_lo_[1] + 1 : 1;
  for (int jy = 0; jy < ny; ++jy) {
    for (int ix = box_lo_[0]; ix <= box_hi_[0]; ++ix) {
      LatticeIndex idx{ix, n == 2 ? box_lo_[1] + jy : 0};
      if (in_interior(idx)) {
        indices_.push_back(idx);
      } else if (domain_.distance(position(idx)) <= R_inf * (1.0 + 1e-12)) {
        collar.push_back(idx);
      }
    }
  }
  num_interior_ = indices_.size();
  indices_.insert(indices_.end(), collar.begin(), collar.end());
  points_.reserve(indices_.size());
  for (const auto& idx : indices_) points_.push_back(position(idx));

  const std::size_t wx = static_cast<std::size_t>(box_hi_[0] - box_lo_[0] + 1);
  table_.assign(wx * static_cast<std::size_t>(ny), -1);
  for (std::size_t j = 0; j < indices_.size(); ++j) {
    const auto& idx = indices_[j];
    const std::size_t slot = static_cast<std::size_t>(idx[0] - box_lo_[0]) +
                             wx * static_cast<std::size_t>(n == 2 ? idx[1] - box_lo_[1] : 0);
    table_[slot] = static_cast<std::int32_t>(j);
  }
}

std::int64_t Grid::lookup(const LatticeIndex& idx) const {
  const int n = domain_.dim;
  for (int k = 0; k < n; ++k)
    if (idx[k] < box_lo_[k] || idx[k] > box_hi_[k]) return -1;
  const std::size_t wx = static_cast<std::size_t>(box_hi_[0] - box_lo_[0] + 1);
  const std::size_t slot = static_cast<std::size_t>(idx[0] - box_lo_[0]) +
                           wx * static_cast<std::size_t>(n == 2 ? idx[1] - box_lo_[1] : 0);
  return table_[slot];
}

Point Grid::position(const LatticeIndex& idx) const {
  Point p{0.0, 0.0};
  for (int k = 0; k < domain_.dim; ++k) p[k] = domain_.lo[k] + idx[k] * h_;
  return p;
}

bool Grid::same_as(const Grid& other) const {
  return this == &other ||
         (domain_.dim == other.domain_.dim && domain_.lo == other.domain_.lo &&
          domain_.hi == other.domain_.hi && h_ == other.h_ && R_inf_ == other.R_inf_);
}

Grid build_grid(const Domain& domain, double h, double R_inf) {
  require(std::isfinite(R_inf) && R_inf >= 2.0 * domain.diameter() * (1.0 - 1e-12),
          ErrorCode::InvalidParameter,
          "truncation radius R_inf=" + std::to_string(R_inf) + " must be at least 2·diam(Ω)=" +
              std::to_string(2.0 * domain.diameter()));
  return Grid(domain, h, R_inf);
}

TimeGrid::TimeGrid(double T, double dt) : T_(T) {
  require(T > 0.0 && std::isfinite(T), ErrorCode::InvalidParameter, "horizon T must be positive");
  require(dt > 0.0 && std::isfinite(dt), ErrorCode::InvalidParameter, "time step must be positive");
  steps_ = static_cast<std::size_t>(std::ceil(T / dt - kRoundTol));
  steps_ = std::max<std::size_t>(steps_, 1);
  dt_ = T / static_cast<double>(steps_);
}

double TimeGrid::time(std::size_t m) const {
  if (m == steps_) return 0.0;
  return -T_ + static_cast<double>(m) * dt_;
}

bool TimeGrid::same_as(const TimeGrid& other) const {
  return T_ == other.T_ && steps_ == other.steps_;
}

const char* to_string(CylinderKind kind) {
  switch (kind) {
    case CylinderKind::Standard: return "standard";
    case CylinderKind::Fat: return "fat";
    case CylinderKind::Plus: return "plus";
    case CylinderKind::Minus: return "minus";
  }
  return "standard";
}

CylinderKind cylinder_kind_from_string(const std::string& name) {
  if (name == "standard") return CylinderKind::Standard;
  if (name == "fat") return CylinderKind::Fat;
  if (name == "plus") return CylinderKind::Plus;
  if (name == "minus") return CylinderKind::Minus;
  fail(ErrorCode::InvalidParameter, "unknown cylinder kind '" + name + "'");
}

void validate_sigma(double sigma) {
  require(sigma > 0.0 && sigma <= 0.4 && std::isfinite(sigma), ErrorCode::InvalidSigma,
          "sigma=" + std::to_string(sigma) + " violates the constraint 0 < sigma <= 2/5");
}

Cylinder::Cylinder(int dim, Point center, double t0, double r, CylinderKind kind, double sigma,
                   double s)
    : dim_(dim), center_(center), t0_(t0), r_(r), kind_(kind), sigma_(sigma), s_(s) {
  require(dim == 1 || dim == 2, ErrorCode::InvalidParameter, "dimension must be 1 or 2");
  require(r > 0.0 && std::isfinite(r), ErrorCode::InvalidRadius, "cylinder radius must be positive");
  require(s > 0.0 && s < 1.0, ErrorCode::InvalidParameter, "order s must lie in (0,1)");
  validate_sigma(sigma);
}

std::pair<double, double> Cylinder::interval() const {
  const double q = std::pow(r_, 2.0 * s_);
  switch (kind_) {
    case CylinderKind::Standard: return {t0_ - q, t0_};
    case CylinderKind::Fat: return {t0_ - (2.0 - sigma_) * q, t0_};
    case CylinderKind::Plus: return {t0_ - sigma_ * q, t0_};
    case CylinderKind::Minus: return {t0_ - (0.5 + sigma_) * q, t0_ - 0.5 * q};
  }
  return {t0_ - q, t0_};
}

double Cylinder::time_length() const {
  const auto [a, b] = interval();
  return b - a;
}

double Cylinder::analytic_measure() const { return ball_measure(dim_, r_) * time_length(); }

bool Cylinder::contains_space(const Point& x) const { return distance(x, center_, dim_) < r_; }

bool Cylinder::contains_time(double t, double dt) const {
  const auto [a, b] = interval();
  const double eps = 1e-9 * dt;
  return t > a + eps && t <= b + eps;
}

std::vector<std::size_t> Cylinder::member_nodes(const Grid& grid) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < grid.num_interior(); ++j)
    if (contains_space(grid.point(j))) out.push_back(j);
  return out;
}

std::vector<std::size_t> Cylinder::member_steps(const TimeGrid& time) const {
  std::vector<std::size_t> out;
  for (std::size_t m = 0; m < time.size(); ++m)
    if (contains_time(time.time(m), time.dt())) out.push_back(m);
  return out;
}

double Cylinder::discrete_measure(const Grid& grid, const TimeGrid& time) const {
  return static_cast<double>(member_nodes(grid).size() * member_steps(time).size()) *
         grid.cell_measure() * time.dt();
}

Cylinder make_cylinder(const Grid& grid, const TimeGrid& time, const Point& center, double t0,
                       double r, CylinderKind kind, double sigma, double s) {
  Cylinder cyl(grid.dim(), center, t0, r, kind, sigma, s);
  const Domain& dom = grid.domain();
  require(dom.contains(center) && dom.inner_distance(center) >= r * (1.0 - 1e-12),
          ErrorCode::OutOfDomain, "ball of radius " + std::to_string(r) + " leaves the domain");
  const auto [a, b] = cyl.interval();
  const double eps = 1e-9 * time.dt();
  require(a >= -time.T() - eps && b <= eps, ErrorCode::OutOfDomain,
          "time interval (" + std::to_string(a) + ", " + std::to_string(b) +
              "] leaves the horizon [" + std::to_string(-time.T()) + ", 0]");
  return cyl;
}

}  // namespace nlheat
