#include "nlheat/nonlocal_op.hpp"

#include <cmath>
#include <string>

#include "nlheat/error.hpp"
#include "nlheat/parallel.hpp"
#include "nlheat/special.hpp"

namespace nlheat {

namespace {

LatticeIndex shifted(const LatticeIndex& a, const LatticeIndex& d, int sign) {
  return {a[0] + sign * d[0], a[1] + sign * d[1]};
}

}  // namespace

LatticeWeights::LatticeWeights(const Kernel& kernel, double h, double R_inf, bool moment_correction)
    : dim_(kernel.dim()), h_(h) {
  require(h > 0.0 && R_inf > h, ErrorCode::InvalidParameter, "weights need 0 < h < R_inf");
  const int n = dim_;
  const double s = kernel.s();
  const double cell = std::pow(h, n);
  reach_ = static_cast<int>(std::floor(R_inf / h + 1e-9));
  const int D = reach_;
  const int w = 2 * D + 1;
  table_.assign(static_cast<std::size_t>(n == 1 ? w : w * w), 0.0);
  const double cutoff2 = (R_inf / h) * (R_inf / h) * (1.0 + 1e-12);

  const double kappa = kernel.local_coefficient(h);
  const double delta =
      moment_correction ? -kappa * std::pow(h, -2.0 * s) * special::lattice_moment_zeta(n, s) / (2.0 * n)
                        : 0.0;

  double sum = 0.0;
  std::size_t count = 0;
  const int ylo = (n == 2) ? -D : 0;
  const int yhi = (n == 2) ? D : 0;
  for (int dy = ylo; dy <= yhi; ++dy) {
    for (int dx = -D; dx <= D; ++dx) {
      const double k2 = static_cast<double>(dx) * dx + static_cast<double>(dy) * dy;
      if (k2 == 0.0 || k2 > cutoff2) continue;
      double wt = cell * kernel(h * std::sqrt(k2));
      if (k2 == 1.0) wt += delta;
      require(std::isfinite(wt) && wt >= 0.0, ErrorCode::AssemblyFailure,
              "non-finite quadrature weight at offset (" + std::to_string(dx) + "," +
                  std::to_string(dy) + ")");
      table_[static_cast<std::size_t>((dx + D) + w * (dy + D) * (n == 2 ? 1 : 0))] = wt;
      sum += wt;
      ++count;
      if (dy > 0 || (dy == 0 && dx > 0)) half_.push_back({{dx, dy}, wt});
    }
  }
  record_.h_min = h;
  record_.R_inf = R_inf;
  record_.reach = D;
  record_.offsets = count;
  record_.far_mass = kernel.far_mass(R_inf);
  record_.local_coefficient = kappa;
  record_.moment_correction = delta;
  record_.sub_h_moment = kappa * sphere_measure(n) * std::pow(h, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
  total_ = sum + record_.far_mass;
}

double LatticeWeights::operator()(const LatticeIndex& d) const {
  const int D = reach_;
  if (std::abs(d[0]) > D) return 0.0;
  if (dim_ == 1) return table_[static_cast<std::size_t>(d[0] + D)];
  if (std::abs(d[1]) > D) return 0.0;
  return table_[static_cast<std::size_t>((d[0] + D) + (2 * D + 1) * (d[1] + D))];
}

NonlocalOperator::NonlocalOperator(std::shared_ptr<const Grid> grid, Kernel kernel,
                                   bool moment_correction)
    : grid_(std::move(grid)),
      kernel_(std::move(kernel)),
      weights_(kernel_, grid_->h(), grid_->R_inf(), moment_correction) {
  require(grid_->dim() == kernel_.dim(), ErrorCode::IncompatibleFields,
          "kernel and grid dimensions differ");
}

Eigen::VectorXd NonlocalOperator::apply(const Eigen::Ref<const Eigen::VectorXd>& nodal,
                                        const ExteriorRule& far) const {
  const Grid& g = *grid_;
  require(static_cast<std::size_t>(nodal.size()) == g.num_nodes(), ErrorCode::IncompleteField,
          "nodal vector does not cover interior and collar");
  const std::size_t N = g.num_interior();
  const double T = weights_.record().far_mass;
  Eigen::VectorXd out(static_cast<Eigen::Index>(N));
  parallel_for(N, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const LatticeIndex& xi = g.index(i);
      const double ui = nodal[static_cast<Eigen::Index>(i)];
      double acc = 0.0;
      for (const auto& o : weights_.half_offsets()) {
        const auto jp = g.lookup(shifted(xi, o.d, +1));
        const auto jm = g.lookup(shifted(xi, o.d, -1));
        if (jp < 0 || jm < 0)
          fail(ErrorCode::IncompleteField, "offset leaves the collar at interior node " +
                                               std::to_string(i));
        acc += o.w * (2.0 * ui - nodal[jp] - nodal[jm]);
      }
      // Both y and -y of every pair appear in the full-space sum.
      out[static_cast<Eigen::Index>(i)] = 2.0 * acc + 2.0 * T * (ui - far.at(g.point(i), g.dim()));
    }
  });
  return out;
}

Eigen::VectorXd NonlocalOperator::collar_coupling(const Eigen::Ref<const Eigen::VectorXd>& collar) const {
  const Grid& g = *grid_;
  require(static_cast<std::size_t>(collar.size()) == g.num_collar(), ErrorCode::IncompleteField,
          "collar vector has the wrong length");
  const std::size_t N = g.num_interior();
  const double cell = g.cell_measure();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(N));
  parallel_for(N, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const LatticeIndex& xi = g.index(i);
      double acc = 0.0;
      for (const auto& o : weights_.half_offsets()) {
        for (int sign : {+1, -1}) {
          const auto j = g.lookup(shifted(xi, o.d, sign));
          if (j < 0)
            fail(ErrorCode::IncompleteField, "offset leaves the collar at interior node " +
                                                 std::to_string(i));
          if (static_cast<std::size_t>(j) >= N) acc += o.w * collar[j - static_cast<std::int64_t>(N)];
        }
      }
      out[static_cast<Eigen::Index>(i)] = -2.0 * cell * acc;
    }
  });
  return out;
}

Eigen::VectorXd NonlocalOperator::far_term(const ExteriorRule& far) const {
  const Grid& g = *grid_;
  const std::size_t N = g.num_interior();
  const double c = -2.0 * weights_.record().far_mass * g.cell_measure();
  Eigen::VectorXd out(static_cast<Eigen::Index>(N));
  for (std::size_t i = 0; i < N; ++i) out[static_cast<Eigen::Index>(i)] = c * far.at(g.point(i), g.dim());
  return out;
}

Eigen::MatrixXd NonlocalOperator::stiffness() const {
  const Grid& g = *grid_;
  const auto N = static_cast<Eigen::Index>(g.num_interior());
  const double cell = g.cell_measure();
  Eigen::MatrixXd A(N, N);
  const double diag = 2.0 * cell * weights_.total_mass();
  parallel_for(static_cast<std::size_t>(N), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const LatticeIndex& xi = g.index(i);
      for (Eigen::Index j = 0; j < N; ++j) {
        const LatticeIndex& xj = g.index(static_cast<std::size_t>(j));
        const LatticeIndex d{xj[0] - xi[0], xj[1] - xi[1]};
        A(static_cast<Eigen::Index>(i), j) = -2.0 * cell * weights_(d);
      }
      A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = diag;
    }
  });
  return A;
}

double NonlocalOperator::quadrature_error_estimate(const Eigen::Ref<const Eigen::VectorXd>& nodal) const {
  const Grid& g = *grid_;
  const double h2 = g.h() * g.h();
  double d2max = 0.0;
  for (std::size_t i = 0; i < g.num_interior(); ++i) {
    for (int axis = 0; axis < g.dim(); ++axis) {
      LatticeIndex e{0, 0};
      e[axis] = 1;
      const auto jp = g.lookup(shifted(g.index(i), e, +1));
      const auto jm = g.lookup(shifted(g.index(i), e, -1));
      if (jp < 0 || jm < 0) continue;
      const double d2 = (nodal[jp] - 2.0 * nodal[static_cast<Eigen::Index>(i)] + nodal[jm]) / h2;
      d2max = std::max(d2max, std::abs(d2));
    }
  }
  return weights_.record().sub_h_moment * d2max;
}

Eigen::VectorXd OperatorMatrix::boundary_load(const Eigen::Ref<const Eigen::VectorXd>& collar,
                                              const ExteriorRule& far) const {
  return op->collar_coupling(collar) + op->far_term(far);
}

std::shared_ptr<const NonlocalOperator> make_operator(std::shared_ptr<const Grid> grid,
                                                      const Kernel& kernel, bool moment_correction) {
  return std::make_shared<const NonlocalOperator>(std::move(grid), kernel, moment_correction);
}

OperatorMatrix assemble(std::shared_ptr<const NonlocalOperator> op) {
  OperatorMatrix m;
  m.A = op->stiffness();
  m.mass = op->grid().cell_measure();
  m.op = std::move(op);
  return m;
}

OperatorMatrix assemble(std::shared_ptr<const Grid> grid, const Kernel& kernel) {
  return assemble(make_operator(std::move(grid), kernel));
}

Eigen::VectorXd apply_Lk(const NonlocalOperator& op, const SpaceTimeField& field, std::size_t m) {
  require(op.grid().same_as(field.grid()), ErrorCode::IncompatibleFields,
          "field and operator live on different grids");
  require(m < field.time().size(), ErrorCode::OutOfRange, "time index out of range");
  return op.apply(field.values().col(static_cast<Eigen::Index>(m)), field.exterior(m));
}

double bilinear_form(const NonlocalOperator& op, const Eigen::Ref<const Eigen::VectorXd>& u,
                     const ExteriorRule& u_far, const Eigen::Ref<const Eigen::VectorXd>& v,
                     const ExteriorRule& v_far) {
  const Grid& g = op.grid();
  require(static_cast<std::size_t>(u.size()) == g.num_nodes() &&
              static_cast<std::size_t>(v.size()) == g.num_nodes(),
          ErrorCode::IncompatibleFields, "nodal vectors do not match the grid");
  const std::size_t N = g.num_interior();
  const auto& W = op.weights();
  const double T = W.record().far_mass;
  std::vector<double> rows(N, 0.0);
  parallel_for(N, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const LatticeIndex& xi = g.index(i);
      const double ui = u[static_cast<Eigen::Index>(i)];
      const double vi = v[static_cast<Eigen::Index>(i)];
      double acc = 0.0;
      for (const auto& o : W.half_offsets()) {
        for (int sign : {+1, -1}) {
          const auto j = g.lookup(shifted(xi, o.d, sign));
          if (j < 0) fail(ErrorCode::IncompleteField, "offset leaves the collar");
          // Interior-interior pairs are reached from both ends; collar
          // partners only from the interior end, so they carry both orders.
          const double mult = static_cast<std::size_t>(j) < N ? 1.0 : 2.0;
          acc += mult * o.w * (ui - u[j]) * (vi - v[j]);
        }
      }
      const Point& p = g.point(i);
      acc += 2.0 * T * (ui - u_far.at(p, g.dim())) * (vi - v_far.at(p, g.dim()));
      rows[i] = acc;
    }
  });
  double total = 0.0;
  for (double r : rows) total += r;
  return g.cell_measure() * total;
}

double bilinear_form(const NonlocalOperator& op, const SpaceTimeField& u, const SpaceTimeField& v,
                     std::size_t m) {
  require(u.compatible(v) && op.grid().same_as(u.grid()), ErrorCode::IncompatibleFields,
          "bilinear form needs fields on the same grid and time grid");
  require(m < u.time().size(), ErrorCode::OutOfRange, "time index out of range");
  const auto col = static_cast<Eigen::Index>(m);
  return bilinear_form(op, u.values().col(col), u.exterior(m), v.values().col(col), v.exterior(m));
}

double x0_norm(const Grid& grid, double s, const SpaceTimeField& field, std::size_t m) {
  require(grid.same_as(field.grid()), ErrorCode::IncompatibleFields, "field lives on another grid");
  require(m < field.time().size(), ErrorCode::OutOfRange, "time index out of range");
  require(field.vanishes_outside(), ErrorCode::DomainViolation,
          "x0_norm needs a field that vanishes outside the domain");
  const int n = grid.dim();
  const double h = grid.h();
  const int D = static_cast<int>(std::floor(grid.R_inf() / h + 1e-9));
  const double cutoff2 = (grid.R_inf() / h) * (grid.R_inf() / h) * (1.0 + 1e-12);
  const double p = -(n + 2.0 * s);
  const double cell = grid.cell_measure();
  const std::size_t N = grid.num_interior();
  const auto v = field.values().col(static_cast<Eigen::Index>(m));
  double total = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const LatticeIndex& xi = grid.index(i);
    const double vi = v[static_cast<Eigen::Index>(i)];
    const int ylo = (n == 2) ? -D : 0;
    const int yhi = (n == 2) ? D : 0;
    for (int dy = ylo; dy <= yhi; ++dy) {
      for (int dx = -D; dx <= D; ++dx) {
        const double k2 = static_cast<double>(dx) * dx + static_cast<double>(dy) * dy;
        if (k2 == 0.0 || k2 > cutoff2) continue;
        const auto j = grid.lookup({xi[0] + dx, xi[1] + dy});
        if (j < 0) continue;
        const double mult = static_cast<std::size_t>(j) < N ? 1.0 : 2.0;
        const double d = vi - v[j];
        total += mult * cell * cell * std::pow(h * h * k2, p / 2.0) * d * d;
      }
    }
    total += 2.0 * cell * vi * vi * sphere_measure(n) * std::pow(grid.R_inf(), -2.0 * s) / (2.0 * s);
  }
  return std::sqrt(total);
}

double hs_seminorm(const Grid& grid, double s, const SpaceTimeField& field, std::size_t m,
                   const std::optional<Domain>& region) {
  require(grid.same_as(field.grid()), ErrorCode::IncompatibleFields, "field lives on another grid");
  require(m < field.time().size(), ErrorCode::OutOfRange, "time index out of range");
  const Domain dom = region.value_or(grid.domain());
  std::vector<std::size_t> nodes;
  for (std::size_t j = 0; j < grid.num_nodes(); ++j)
    if (dom.contains(grid.point(j))) nodes.push_back(j);
  const int n = grid.dim();
  const double cell = grid.cell_measure();
  const auto v = field.values().col(static_cast<Eigen::Index>(m));
  double total = 0.0;
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      const double r = distance(grid.point(nodes[a]), grid.point(nodes[b]), n);
      const double d = v[static_cast<Eigen::Index>(nodes[a])] - v[static_cast<Eigen::Index>(nodes[b])];
      total += 2.0 * cell * cell * std::pow(r, -(n + 2.0 * s)) * d * d;
    }
  }
  return std::sqrt(total);
}

Eigen::VectorXd apply_Lk_periodic(const Kernel& kernel, double h, int period,
                                  const Eigen::Ref<const Eigen::VectorXd>& values, double R_inf,
                                  bool moment_correction) {
  const int n = kernel.dim();
  require(period > 0, ErrorCode::InvalidParameter, "period must be positive");
  const std::size_t total = n == 1 ? static_cast<std::size_t>(period)
                                   : static_cast<std::size_t>(period) * static_cast<std::size_t>(period);
  require(static_cast<std::size_t>(values.size()) == total, ErrorCode::IncompleteField,
          "periodic values have the wrong length");
  const LatticeWeights W(kernel, h, R_inf, moment_correction);
  const double mean = values.mean();
  const double T = W.record().far_mass;
  const auto wrap = [period](int i) { return ((i % period) + period) % period; };
  Eigen::VectorXd out(static_cast<Eigen::Index>(total));
  parallel_for(total, [&](std::size_t b, std::size_t e) {
    for (std::size_t idx = b; idx < e; ++idx) {
      const int ix = static_cast<int>(idx % static_cast<std::size_t>(period));
      const int iy = static_cast<int>(idx / static_cast<std::size_t>(period));
      const double ui = values[static_cast<Eigen::Index>(idx)];
      double acc = 0.0;
      for (const auto& o : W.half_offsets()) {
        const auto at = [&](int sign) {
          const int jx = wrap(ix + sign * o.d[0]);
          const int jy = n == 2 ? wrap(iy + sign * o.d[1]) : 0;
          return values[jx + period * jy];
        };
        acc += o.w * (2.0 * ui - at(+1) - at(-1));
      }
      out[static_cast<Eigen::Index>(idx)] = 2.0 * acc + 2.0 * T * (ui - mean);
    }
  });
  return out;
}

}  // namespace nlheat
