#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nlheat/error.hpp"
#include "nlheat/kernel.hpp"
#include "nlheat/nonlocal_op.hpp"

using namespace nlheat;

namespace {

std::shared_ptr<const Grid> line(double h, double R_inf = 2.0) {
  return std::make_shared<const Grid>(build_grid(Domain::interval(0.0, 1.0), h, R_inf));
}

std::shared_ptr<const Grid> square(double h) {
  return std::make_shared<const Grid>(build_grid(Domain::rectangle({0.0, 0.0}, {1.0, 1.0}), h, 3.0));
}

SpaceTimeField single_time(std::shared_ptr<const Grid> g) { return SpaceTimeField(std::move(g), TimeGrid(1.0, 1.0)); }

// Independent O(N·offsets) evaluation of L u for interior-supported u: every
// lattice displacement within R_inf contributes 2 h^n K (u(x) - u(x+y)), plus
// 2 u(x) times the kernel mass beyond R_inf.
Eigen::VectorXd brute_apply(const Grid& g, const Kernel& k, const Eigen::VectorXd& u_int) {
  const int n = g.dim();
  const double h = g.h();
  const int D = static_cast<int>(std::floor(g.R_inf() / h + 1e-9));
  const std::size_t N = g.num_interior();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(N));
  for (std::size_t i = 0; i < N; ++i) {
    const Point xi = g.point(i);
    double acc = 0.0;
    for (int b = (n == 2 ? -D : 0); b <= (n == 2 ? D : 0); ++b) {
      for (int a = -D; a <= D; ++a) {
        if (a == 0 && b == 0) continue;
        const double r = h * std::sqrt(double(a) * a + double(b) * b);
        if (r > g.R_inf() * (1.0 + 1e-12)) continue;
        const Point y{xi[0] + a * h, xi[1] + b * h};
        double uy = 0.0;
        for (std::size_t j = 0; j < N; ++j)
          if (distance(g.point(j), y, n) < 1e-9 * h) uy = u_int[static_cast<Eigen::Index>(j)];
        acc += 2.0 * std::pow(h, n) * k(r) * (u_int[static_cast<Eigen::Index>(i)] - uy);
      }
    }
    acc += 2.0 * u_int[static_cast<Eigen::Index>(i)] * k.far_mass(g.R_inf());
    out[static_cast<Eigen::Index>(i)] = acc;
  }
  return out;
}

}  // namespace

TEST(NonlocalOp, ApplyMatchesBruteForceWithoutCorrection) {
  for (int n : {1, 2}) {
    auto g = n == 1 ? line(1.0 / 16) : square(0.25);
    const Kernel k = make_fractional_kernel(n, 0.4);
    const auto op = make_operator(g, k, false);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    SpaceTimeField u = single_time(g);
    for (std::size_t j = 0; j < g->num_interior(); ++j) u(j, 0) = U(rng);
    const Eigen::VectorXd got = apply_Lk(*op, u, 0);
    const Eigen::VectorXd want = brute_apply(*g, k, u.values().col(0).head(g->num_interior()));
    EXPECT_LT((got - want).cwiseAbs().maxCoeff(), 1e-10 * want.cwiseAbs().maxCoeff()) << "n=" << n;
  }
}

TEST(NonlocalOp, ConstantFieldIsAnnihilated) {
  for (int n : {1, 2}) {
    auto g = n == 1 ? line(1.0 / 32) : square(0.125);
    const auto op = make_operator(g, make_fractional_kernel(n, 0.6));
    SpaceTimeField u = single_time(g);
    u.values().setConstant(3.0);
    u.set_exterior_all(ExteriorRule::constant(3.0));
    EXPECT_LT(apply_Lk(*op, u, 0).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(NonlocalOp, StiffnessIsSymmetricMMatrix) {
  const auto mat = assemble(line(1.0 / 32), make_fractional_kernel(1, 0.3));
  const Eigen::MatrixXd& A = mat.A;
  EXPECT_LT((A - A.transpose()).cwiseAbs().maxCoeff(), 1e-14 * A.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    EXPECT_GT(A(i, i), 0.0);
    double off = 0.0;
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      if (j != i) {
        EXPECT_LE(A(i, j), 0.0);
        off += std::abs(A(i, j));
      }
    EXPECT_GT(A(i, i), off);  // strict diagonal dominance from the exterior coupling
  }
  EXPECT_DOUBLE_EQ(mat.mass, 1.0 / 32);
}

TEST(NonlocalOp, BilinearFormIsStiffnessQuadraticForm) {
  auto g = square(0.125);
  const auto op = make_operator(g, make_fractional_kernel(2, 0.5));
  const Eigen::MatrixXd A = op->stiffness();
  std::mt19937_64 rng(3);
  std::normal_distribution<double> N01;
  SpaceTimeField u = single_time(g), v = single_time(g);
  for (std::size_t j = 0; j < g->num_interior(); ++j) {
    u(j, 0) = N01(rng);
    v(j, 0) = N01(rng);
  }
  const Eigen::VectorXd ui = u.interior(0), vi = v.interior(0);
  const double uv = bilinear_form(*op, u, v, 0);
  EXPECT_NEAR(uv, ui.dot(A * vi), 1e-10 * std::abs(uv) + 1e-12);
  EXPECT_NEAR(uv, bilinear_form(*op, v, u, 0), 1e-12 * std::abs(uv));
  SpaceTimeField z = single_time(g);
  EXPECT_EQ(bilinear_form(*op, z, z, 0), 0.0);
}

TEST(NonlocalOp, X0NormHatMatchesDoubleSum) {
  const double h = 0.1, s = 0.5, R = 2.0;
  auto g = line(h, R);
  SpaceTimeField u = single_time(g);
  // hat centred at 0.5 with half-width 0.3
  for (std::size_t j = 0; j < g->num_interior(); ++j) u(j, 0) = std::max(0.0, 1.0 - std::abs(g->point(j)[0] - 0.5) / 0.3);

  auto v = [&](int k) {
    const double x = k * h;
    return (x > 0.0 && x < 1.0) ? std::max(0.0, 1.0 - std::abs(x - 0.5) / 0.3) : 0.0;
  };
  auto inside = [&](int k) { return k >= 1 && k <= 9; };
  const int span = static_cast<int>(std::round(R / h));
  double total = 0.0;
  for (int a = -span - 2; a <= 10 + span + 2; ++a)
    for (int b = -span - 2; b <= 10 + span + 2; ++b) {
      if (a == b || (!inside(a) && !inside(b)) || std::abs(a - b) > span) continue;
      const double d = v(a) - v(b);
      total += h * h * std::pow(std::abs(a - b) * h, -1.0 - 2.0 * s) * d * d;
    }
  for (int a = 1; a <= 9; ++a) total += 2.0 * h * v(a) * v(a) * 2.0 * std::pow(R, -2.0 * s) / (2.0 * s);
  EXPECT_NEAR(x0_norm(*g, s, u, 0), std::sqrt(total), 1e-12 * std::sqrt(total));
}

TEST(NonlocalOp, SeminormBelowX0Norm) {
  auto g = square(0.125);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    SpaceTimeField u = single_time(g);
    for (std::size_t j = 0; j < g->num_interior(); ++j) u(j, 0) = U(rng);
    EXPECT_LE(hs_seminorm(*g, 0.5, u, 0), x0_norm(*g, 0.5, u, 0));
  }
  SpaceTimeField z = single_time(g);
  EXPECT_EQ(hs_seminorm(*g, 0.5, z, 0), 0.0);
  EXPECT_EQ(x0_norm(*g, 0.5, z, 0), 0.0);
}

TEST(NonlocalOp, X0NormRejectsExteriorData) {
  auto g = line(0.125);
  SpaceTimeField u = single_time(g);
  u.values().setOnes();
  try {
    x0_norm(*g, 0.5, u, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DomainViolation);
  }
}

TEST(NonlocalOp, CoercivityAgainstGagliardoEnergy) {
  // K >= (1-s)·lambda·|y|^{-n-2s}, so the quadratic form dominates the
  // same multiple of the discrete Gagliardo energy.
  const double s = 0.5;
  auto g = line(1.0 / 32);
  const Kernel k = make_fractional_kernel(1, s);
  const auto op = make_operator(g, k);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> N01;
  for (int trial = 0; trial < 10; ++trial) {
    SpaceTimeField u = single_time(g);
    for (std::size_t j = 0; j < g->num_interior(); ++j) u(j, 0) = N01(rng);
    const double energy = std::pow(x0_norm(*g, s, u, 0), 2);
    EXPECT_GE(bilinear_form(*op, u, u, 0), (1.0 - s) * k.lambda() * energy * (1.0 - 1e-3));
  }
}

TEST(NonlocalOp, QuadratureRecordIsPopulated) {
  const auto op = make_operator(line(1.0 / 16), make_fractional_kernel(1, 0.5));
  const auto& q = op->quadrature();
  EXPECT_DOUBLE_EQ(q.h_min, 1.0 / 16);
  EXPECT_DOUBLE_EQ(q.R_inf, 2.0);
  EXPECT_EQ(q.reach, 32);
  EXPECT_EQ(q.offsets, 64u);
  EXPECT_GT(q.moment_correction, 0.0);
  EXPECT_GT(q.far_mass, 0.0);
}
