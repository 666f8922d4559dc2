#include <gtest/gtest.h>

#include <cmath>

#include "nlheat/error.hpp"
#include "nlheat/tail.hpp"

using namespace nlheat;

namespace {

SpaceTimeField field_on(const Domain& d, double h, double T, double dt, const SpaceTimeFunction& u, double far) {
  auto g = std::make_shared<const Grid>(build_grid(d, h, 2.0 * d.diameter()));
  return sample_field(g, TimeGrid(T, dt), u, [far](double) { return ExteriorRule::constant(far); });
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no nlheat::Error thrown";
  return ErrorCode::InvalidParameter;
}

}  // namespace

TEST(Tail, ConstantOneIsNormalized) {
  const auto one = [](const Point&, double) { return 1.0; };
  const SpaceTimeField u1 = field_on(Domain::interval(-1.0, 1.0), 1.0 / 64, 1.0, 1.0 / 64, one, 1.0);
  for (double r : {0.1, 0.5, 1.0}) EXPECT_NEAR(tail_value(u1, {0.0, 0.0}, 0.0, r, 0.5), 1.0, 1e-3) << "r=" << r;
  const SpaceTimeField u2 =
      field_on(Domain::rectangle({-1.0, -1.0}, {1.0, 1.0}), 1.0 / 32, 1.0, 1.0 / 32, one, 1.0);
  for (double r : {0.25, 0.5}) EXPECT_NEAR(tail_value(u2, {0.0, 0.0}, 0.0, r, 0.3), 1.0, 1e-3) << "r=" << r;
}

TEST(Tail, AnnulusHalf) {
  // centre on a cell face: the cells tile {r < |x - x0| < 2r} exactly
  const double r = 0.25;
  const double x0 = 0.5 / 128;
  const auto ring = [r, x0](const Point& x, double) {
    const double a = std::abs(x[0] - x0);
    return (a > r && a < 2.0 * r) ? 1.0 : 0.0;
  };
  const SpaceTimeField u = field_on(Domain::interval(-1.0, 1.0), 1.0 / 128, 1.0, 1.0 / 64, ring, 0.0);
  EXPECT_NEAR(tail_value(u, {x0, 0.0}, -0.5, r, 0.5), 0.5, 1e-3);
}

TEST(Tail, SupportInsideBallGivesZero) {
  const auto bump = [](const Point& x, double) { return std::abs(x[0]) < 0.3 ? 1.0 : 0.0; };
  const SpaceTimeField u = field_on(Domain::interval(-1.0, 1.0), 1.0 / 64, 1.0, 1.0 / 64, bump, 0.0);
  EXPECT_EQ(tail_value(u, {0.0, 0.0}, 0.0, 0.5, 0.5), 0.0);
}

TEST(Tail, PartsSplitSign) {
  const auto neg = [](const Point&, double) { return -2.0; };
  const SpaceTimeField u = field_on(Domain::interval(-1.0, 1.0), 1.0 / 64, 1.0, 1.0 / 64, neg, -2.0);
  EXPECT_EQ(tail_value(u, {0.0, 0.0}, 0.0, 0.5, 0.5, TailPart::Positive), 0.0);
  EXPECT_NEAR(tail_value(u, {0.0, 0.0}, 0.0, 0.5, 0.5, TailPart::Negative), 2.0, 2e-3);
  EXPECT_NEAR(tail_value(u, {0.0, 0.0}, 0.0, 0.5, 0.5, TailPart::Absolute), 2.0, 2e-3);
}

TEST(Tail, SupremumOverWindow) {
  const auto grow = [](const Point&, double t) { return 1.0 + t; };  // largest at t0
  const SpaceTimeField u = field_on(Domain::interval(-1.0, 1.0), 1.0 / 64, 1.0, 1.0 / 64, grow, 0.0);
  TailQuery q;
  q.field = &u;
  q.t0 = -0.25;
  q.r = 0.25;
  q.s = 0.5;
  const TailResult res = tail(q);
  EXPECT_NEAR(res.sup_time, -0.25, 1e-12);
  EXPECT_EQ(res.samples, 16u);  // r^{2s} = 0.25 at dt = 1/64
}

TEST(Tail, Errors) {
  const auto one = [](const Point&, double) { return 1.0; };
  const SpaceTimeField u = field_on(Domain::interval(-1.0, 1.0), 1.0 / 32, 1.0, 1.0 / 32, one, 1.0);
  EXPECT_EQ(code_of([&] { tail_value(u, {0.0, 0.0}, 0.0, 0.0, 0.5); }), ErrorCode::InvalidRadius);
  EXPECT_EQ(code_of([&] { tail_value(u, {0.0, 0.0}, 0.0, 10.0, 0.5); }), ErrorCode::InvalidRadius);
  EXPECT_EQ(code_of([&] { tail_value(u, {0.0, 0.0}, 0.5, 0.5, 0.5); }), ErrorCode::OutOfRange);
  EXPECT_EQ(code_of([&] { tail_value(u, {0.0, 0.0}, -0.8, 0.5, 0.5); }), ErrorCode::OutOfRange);
}
