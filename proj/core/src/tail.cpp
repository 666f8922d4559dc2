#include "nlheat/tail.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "nlheat/error.hpp"
#include "nlheat/kernel.hpp"

namespace nlheat {

namespace {

// ∫_p^q z^{-1-2s} dz for 0 < p <= q.
double radial_1d(double p, double q, double s) {
  return (std::pow(p, -2.0 * s) - std::pow(q, -2.0 * s)) / (2.0 * s);
}

// ∫ over z in [a,b] with r < |z| < rho of |z|^{-1-2s}.
double cell_weight_1d(double a, double b, double r, double rho, double s) {
  double total = 0.0;
  // positive side
  const double p0 = std::max(a, r);
  const double q0 = std::min(b, rho);
  if (q0 > p0) total += radial_1d(p0, q0, s);
  // negative side, mirrored
  const double p1 = std::max(-b, r);
  const double q1 = std::min(-a, rho);
  if (q1 > p1) total += radial_1d(p1, q1, s);
  return total;
}

constexpr std::array<double, 4> kGaussNodes{-0.8611363115940526, -0.3399810435848563,
                                            0.3399810435848563, 0.8611363115940526};
constexpr std::array<double, 4> kGaussWeights{0.3478548451374538, 0.6521451548625461,
                                              0.6521451548625461, 0.3478548451374538};

double cell_weight_2d(double cx, double cy, double h, double r, double rho, double s) {
  const double p = -(2.0 + 2.0 * s);
  const double d = std::hypot(cx, cy);
  const double half_diag = h * std::sqrt(0.5);
  if (d + half_diag <= r || d - half_diag >= rho) return 0.0;
  const bool straddles = (d - half_diag < r) || (d + half_diag > rho);
  if (!straddles) {
    double sum = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const double x = cx + 0.5 * h * kGaussNodes[i];
        const double y = cy + 0.5 * h * kGaussNodes[j];
        sum += kGaussWeights[i] * kGaussWeights[j] * std::pow(x * x + y * y, p / 2.0);
      }
    return sum * h * h / 4.0;
  }
  constexpr int q = 32;
  const double sub = h / q;
  double sum = 0.0;
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      const double x = cx - 0.5 * h + (i + 0.5) * sub;
      const double y = cy - 0.5 * h + (j + 0.5) * sub;
      const double rr = std::hypot(x, y);
      if (rr > r && rr < rho) sum += std::pow(rr, p);
    }
  return sum * sub * sub;
}

double part_of(double v, TailPart part) {
  switch (part) {
    case TailPart::Absolute: return std::abs(v);
    case TailPart::Positive: return std::max(v, 0.0);
    case TailPart::Negative: return std::max(-v, 0.0);
  }
  return std::abs(v);
}

}  // namespace

TailResult tail(const TailQuery& q) {
  require(q.field != nullptr, ErrorCode::InvalidParameter, "tail query without a field");
  require(q.r > 0.0 && std::isfinite(q.r), ErrorCode::InvalidRadius, "tail radius must be positive");
  require(q.s > 0.0 && q.s < 1.0, ErrorCode::InvalidParameter, "order s must lie in (0,1)");
  const SpaceTimeField& f = *q.field;
  const Grid& g = f.grid();
  const TimeGrid& time = f.time();
  const int n = g.dim();
  const double h = g.h();
  const double rho = g.R_inf() - h;
  require(q.r < rho, ErrorCode::InvalidRadius, "tail radius reaches the truncation radius");

  const double window = std::pow(q.r, 2.0 * q.s);
  const double eps = 1e-9 * time.dt();
  require(q.t0 - window >= -time.T() - eps && q.t0 <= eps, ErrorCode::OutOfRange,
          "tail time window leaves the field's time extent");

  std::vector<std::size_t> nodes;
  std::vector<double> weights;
  for (std::size_t j = 0; j < g.num_nodes(); ++j) {
    const Point& p = g.point(j);
    double w = 0.0;
    if (n == 1) {
      const double z = p[0] - q.center[0];
      w = cell_weight_1d(z - 0.5 * h, z + 0.5 * h, q.r, rho, q.s);
    } else {
      w = cell_weight_2d(p[0] - q.center[0], p[1] - q.center[1], h, q.r, rho, q.s);
    }
    if (w > 0.0) {
      nodes.push_back(j);
      weights.push_back(w);
    }
  }
  const double far_kernel = sphere_measure(n) * std::pow(rho, -2.0 * q.s) / (2.0 * q.s);

  TailResult res;
  double best = -1.0;
  for (std::size_t m = 0; m < time.size(); ++m) {
    const double t = time.time(m);
    if (!(t > q.t0 - window + eps && t <= q.t0 + eps)) continue;
    ++res.samples;
    double sum = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) sum += weights[k] * part_of(f(nodes[k], m), q.part);
    const ExteriorRule& rule = f.exterior(m);
    if (!rule.is_zero()) sum += far_kernel * part_of(rule.value, q.part) * (rule.is_bounded() ? 1.0 : 0.0);
    require(rule.is_bounded(), ErrorCode::InvalidParameter,
            "tail of unbounded exterior data is not defined");
    if (sum > best) {
      best = sum;
      res.sup_time = t;
    }
  }
  require(res.samples > 0, ErrorCode::OutOfRange, "no time step inside the tail window");
  res.value = (2.0 * q.s / sphere_measure(n)) * window * best;
  return res;
}

double tail_value(const SpaceTimeField& field, const Point& center, double t0, double r, double s,
                  TailPart part) {
  TailQuery q;
  q.field = &field;
  q.center = center;
  q.t0 = t0;
  q.r = r;
  q.s = s;
  q.part = part;
  return tail(q).value;
}

}  // namespace nlheat
