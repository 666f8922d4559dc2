#include "nlheat/evolution.hpp"

#include <cmath>
#include <limits>

#include "nlheat/error.hpp"
#include "nlheat/parallel.hpp"

namespace nlheat {

namespace {

void check_source(const SpaceTimeField* f, const Grid& grid, const TimeGrid& time) {
  if (f == nullptr) return;
  require(f->grid().same_as(grid) && f->time().same_as(time), ErrorCode::IncompatibleFields,
          "source field lives on another grid or time grid");
}

}  // namespace

GalerkinCoefficients galerkin_coefficients(const SpectralBasis& basis, const SpaceTimeField* f,
                                           const Eigen::Ref<const Eigen::VectorXd>& h_init,
                                           const TimeGrid& time) {
  const Grid& grid = *basis.grid;
  require(static_cast<std::size_t>(h_init.size()) == grid.num_interior(),
          ErrorCode::IncompatibleFields, "initial data must be an interior vector of the basis grid");
  check_source(f, grid, time);
  const auto k = static_cast<Eigen::Index>(basis.size());
  const auto cols = static_cast<Eigen::Index>(time.size());
  GalerkinCoefficients out;
  out.time = time;
  out.c.resize(k, cols);
  out.forcing = Eigen::MatrixXd::Zero(k, cols);
  out.c.col(0) = basis.project(h_init);
  if (f != nullptr)
    for (Eigen::Index m = 1; m < cols; ++m)
      out.forcing.col(m) = basis.project(f->interior(static_cast<std::size_t>(m)));

  const double dt = time.dt();
  Eigen::VectorXd decay(k);
  Eigen::VectorXd gain(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double a = basis.alpha[i];
    decay[i] = std::exp(-a * dt);
    gain[i] = -std::expm1(-a * dt) / a;
  }
  parallel_for(static_cast<std::size_t>(k), [&](std::size_t b, std::size_t e) {
    for (std::size_t ii = b; ii < e; ++ii) {
      const auto i = static_cast<Eigen::Index>(ii);
      for (Eigen::Index m = 1; m < cols; ++m)
        out.c(i, m) = decay[i] * out.c(i, m - 1) + gain[i] * out.forcing(i, m);
    }
  });
  return out;
}

SpaceTimeField galerkin_solve(const SpectralBasis& basis, const SpaceTimeField* f,
                              const Eigen::Ref<const Eigen::VectorXd>& h_init, const TimeGrid& time) {
  const GalerkinCoefficients gc = galerkin_coefficients(basis, f, h_init, time);
  SpaceTimeField u(basis.grid, time);
  const auto cols = static_cast<Eigen::Index>(time.size());
  const auto N = static_cast<Eigen::Index>(basis.grid->num_interior());
  u.values().topRows(N) = basis.vectors * gc.c;
  // c' = -α c + F on the step ending at t_m; at t_0 the first step's F.
  Eigen::MatrixXd dc(gc.c.rows(), cols);
  for (Eigen::Index m = 0; m < cols; ++m) {
    const Eigen::Index fm = (m == 0) ? std::min<Eigen::Index>(1, cols - 1) : m;
    dc.col(m) = -basis.alpha.cwiseProduct(gc.c.col(m)) + gc.forcing.col(fm);
  }
  u.set_derivative(basis.vectors * dc);
  return u;
}

SpaceTimeField lift_and_solve(const NonlocalOperator& op, const SpectralBasis& basis,
                              const SpaceTimeField& g, const SpaceTimeField* f,
                              const Eigen::Ref<const Eigen::VectorXd>& h_init) {
  const Grid& grid = op.grid();
  require(grid.same_as(g.grid()) && grid.same_as(*basis.grid), ErrorCode::IncompatibleFields,
          "operator, basis and exterior data must share a grid");
  require(g.all_finite(), ErrorCode::IncompleteField, "exterior data missing on the collar");
  const TimeGrid& time = g.time();
  check_source(f, grid, time);
  const auto N = static_cast<Eigen::Index>(grid.num_interior());
  const double dt = time.dt();

  SpaceTimeField source(basis.grid, time);
  Eigen::MatrixXd dg = Eigen::MatrixXd::Zero(N, static_cast<Eigen::Index>(time.size()));
  for (std::size_t m = 1; m < time.size(); ++m) {
    const auto col = static_cast<Eigen::Index>(m);
    dg.col(col) = (g.interior(m) - g.interior(m - 1)) / dt;
    Eigen::VectorXd rhs = -apply_Lk(op, g, m) - dg.col(col);
    if (f != nullptr) rhs += f->interior(m);
    source.interior(m) = rhs;
  }
  const Eigen::VectorXd v0 = h_init - g.interior(0);
  SpaceTimeField v = galerkin_solve(basis, &source, v0, time);

  SpaceTimeField u(basis.grid, time);
  u.values() = v.values() + g.values();
  for (std::size_t m = 0; m < time.size(); ++m) u.set_exterior(m, g.exterior(m));
  Eigen::MatrixXd du = *v.derivative();
  if (time.size() > 1) dg.col(0) = dg.col(1);
  du += dg;
  u.set_derivative(std::move(du));
  return u;
}

SpaceTimeField monotone_solve(const OperatorMatrix& op, const SpaceTimeField& g,
                              const SpaceTimeField* f,
                              const Eigen::Ref<const Eigen::VectorXd>& h_init) {
  const Grid& grid = op.grid();
  require(grid.same_as(g.grid()), ErrorCode::IncompatibleFields, "exterior data on another grid");
  require(g.all_finite(), ErrorCode::IncompleteField, "exterior data missing on the collar");
  const TimeGrid& time = g.time();
  check_source(f, grid, time);
  require(static_cast<std::size_t>(h_init.size()) == grid.num_interior(),
          ErrorCode::IncompatibleFields, "initial data must be an interior vector");
  const auto N = static_cast<Eigen::Index>(grid.num_interior());
  const double dt = time.dt();
  const double M = op.mass;

  Eigen::MatrixXd system = op.A;
  system.diagonal().array() += M / dt;
  Eigen::LLT<Eigen::MatrixXd> llt(system);
  require(llt.info() == Eigen::Success, ErrorCode::SolverFailure,
          "implicit step matrix is not positive definite");

  SpaceTimeField u(g.grid_ptr(), time);
  u.values() = g.values();
  for (std::size_t m = 0; m < time.size(); ++m) u.set_exterior(m, g.exterior(m));
  u.interior(0) = h_init;

  Eigen::VectorXd load;
  std::size_t load_step = 0;
  for (std::size_t m = 1; m < time.size(); ++m) {
    const bool reuse = load.size() == N && g.exterior(m).value == g.exterior(load_step).value &&
                       g.exterior(m).gradient == g.exterior(load_step).gradient &&
                       g.collar(m) == g.collar(load_step);
    if (!reuse) {
      load = op.boundary_load(g.collar(m), g.exterior(m));
      load_step = m;
    }
    Eigen::VectorXd rhs = (M / dt) * u.interior(m - 1) - load;
    if (f != nullptr) rhs += M * f->interior(m);
    u.interior(m) = llt.solve(rhs);
    require(u.interior(m).allFinite(), ErrorCode::SolverFailure,
            "non-finite values at step " + std::to_string(m));
  }
  return u;
}

Eigen::MatrixXd nodal_tests(const Grid& grid) {
  const auto N = static_cast<Eigen::Index>(grid.num_interior());
  return Eigen::MatrixXd::Identity(N, N);
}

ResidualStats weak_residual(const NonlocalOperator& op, const SpaceTimeField& u,
                            const SpaceTimeField* f, const Eigen::Ref<const Eigen::MatrixXd>& tests) {
  const Grid& grid = op.grid();
  require(grid.same_as(u.grid()), ErrorCode::IncompatibleFields, "field on another grid");
  check_source(f, grid, u.time());
  const auto N = static_cast<Eigen::Index>(grid.num_interior());
  require(tests.rows() == N, ErrorCode::IncompatibleFields, "test vectors must be interior vectors");
  const TimeGrid& time = u.time();
  const double cell = grid.cell_measure();
  const double dt = time.dt();

  ResidualStats stats;
  stats.exact_derivative = u.derivative().has_value();
  double sq = 0.0;
  std::size_t first = 0;
  std::size_t last = time.size();
  if (!stats.exact_derivative) {
    first = 1;
    last = time.size() > 1 ? time.size() - 1 : 1;
  }
  for (std::size_t m = first; m < last; ++m) {
    Eigen::VectorXd integrand = apply_Lk(op, u, m);
    if (stats.exact_derivative) {
      integrand += u.derivative()->col(static_cast<Eigen::Index>(m));
    } else {
      integrand += (u.interior(m + 1) - u.interior(m - 1)) / (2.0 * dt);
    }
    if (f != nullptr) {
      // f is held at its right endpoint value on each step, so t_0 sees the first step's value
      const std::size_t fm = (stats.exact_derivative && m == 0 && time.size() > 1) ? 1 : m;
      integrand -= f->interior(fm);
    }
    const Eigen::VectorXd r = cell * (tests.transpose() * integrand);
    stats.max_abs = std::max(stats.max_abs, r.cwiseAbs().maxCoeff());
    sq += r.squaredNorm();
    stats.samples += static_cast<std::size_t>(r.size());
  }
  stats.rms = stats.samples > 0 ? std::sqrt(sq / static_cast<double>(stats.samples)) : 0.0;
  return stats;
}

EnergyReport energy_report(const OperatorMatrix& op, const SpaceTimeField& u, const SpaceTimeField* f,
                           const Eigen::Ref<const Eigen::VectorXd>& h_init) {
  const Grid& grid = op.grid();
  require(grid.same_as(u.grid()), ErrorCode::IncompatibleFields, "field on another grid");
  require(u.vanishes_outside(), ErrorCode::DomainViolation,
          "energy report needs zero exterior data");
  const TimeGrid& time = u.time();
  check_source(f, grid, time);
  const double cell = op.mass;
  const double dt = time.dt();

  Eigen::LLT<Eigen::MatrixXd> llt(op.A);
  require(llt.info() == Eigen::Success, ErrorCode::SolverFailure, "stiffness is not positive definite");

  EnergyReport rep;
  double x0_sq = 0.0;
  double dual_sq = 0.0;
  for (std::size_t m = 0; m < time.size(); ++m) {
    const Eigen::VectorXd um = u.interior(m);
    rep.linf_l2 = std::max(rep.linf_l2, std::sqrt(cell * um.squaredNorm()));
    if (m == 0) continue;
    x0_sq += dt * um.dot(op.A * um);
    const Eigen::VectorXd du = u.derivative() ? Eigen::VectorXd(u.derivative()->col(static_cast<Eigen::Index>(m)))
                                              : Eigen::VectorXd((um - u.interior(m - 1)) / dt);
    // sup over h^n duᵀv with vᵀAv ≤ 1 equals h^n sqrt(duᵀA⁻¹du).
    dual_sq += dt * cell * cell * du.dot(llt.solve(du));
  }
  rep.l2_x0 = std::sqrt(x0_sq);
  rep.derivative_dual = std::sqrt(dual_sq);
  rep.lhs = rep.linf_l2 + rep.l2_x0 + rep.derivative_dual;

  double f_sq = 0.0;
  if (f != nullptr)
    for (std::size_t m = 1; m < time.size(); ++m) f_sq += dt * cell * f->interior(m).squaredNorm();
  rep.data_norm = std::sqrt(f_sq) + std::sqrt(cell * h_init.squaredNorm());
  if (rep.data_norm > 0.0) {
    rep.ratio = rep.lhs / rep.data_norm;
  } else if (rep.lhs > 0.0) {
    rep.inconsistent = true;
    rep.ratio = std::numeric_limits<double>::infinity();
  }
  return rep;
}

}  // namespace nlheat
