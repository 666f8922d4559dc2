#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nlheat/covering.hpp"
#include "nlheat/error.hpp"
#include "nlheat/kernel.hpp"

using namespace nlheat;

namespace {

// Exhaustive oracle: every (centre, scale) pair, every host member.
ParabolicPointSet brute_dilate(const ParabolicPointSet& E, double gamma, double rho_max, std::size_t scales) {
  const CoveringHost& H = E.host();
  const int n = H.dim();
  ParabolicPointSet D(E.host_ptr());
  std::vector<double> rhos;
  for (std::size_t k = 1; k <= scales; ++k) rhos.push_back(rho_max * std::pow(2.0, -double(k) / 4.0));
  for (std::size_t X = 0; X < H.size(); ++X) {
    const std::size_t px = X % H.num_space(), mx = X / H.num_space();
    for (double rho : rhos) {
      std::vector<std::size_t> inside;
      std::size_t hits = 0;
      for (std::size_t Y = 0; Y < H.size(); ++Y) {
        const std::size_t py = Y % H.num_space(), my = Y / H.num_space();
        const double dd = parabolic_distance(H.point(px), H.time(mx), H.point(py), H.time(my) - 0.5 * H.dt(), n, H.sigma(), H.s());
        if (dd < 3.0 * rho) {
          inside.push_back(Y);
          hits += E.test(Y);
        }
      }
      const double vol = (n == 1 ? 2.0 * rho : M_PI * rho * rho) * H.sigma() * std::pow(rho, 2.0 * H.s());
      if (double(hits) * H.cell_measure() > gamma * vol)
        for (std::size_t Y : inside) D.set(Y);
    }
  }
  return D;
}

}  // namespace

TEST(ParabolicDistance, Examples) {
  EXPECT_TRUE(std::isinf(parabolic_distance({0.0, 0.0}, 1.0, {0.0, 0.0}, 2.0, 1, 0.3, 0.5)));
  EXPECT_NEAR(parabolic_distance({0.4, 0.0}, 1.0, {0.4, 0.0}, 1.0 - 0.3, 1, 0.3, 0.5), 1.0, 1e-12);
  EXPECT_NEAR(parabolic_distance({0.0, 0.0}, 0.0, {3.0, 0.0}, -0.3, 1, 0.3, 0.5), 3.0, 1e-12);
}

TEST(LatticeHost, SizeAndLayout) {
  const auto H = make_lattice_host(2, 8, 8, 1.0, 0.3, 0.5);
  EXPECT_EQ(H->num_times(), 8u);
  EXPECT_EQ(H->num_space(), 52u);  // cell centres of an 8×8 grid inside the unit disc
  EXPECT_DOUBLE_EQ(H->h(), 0.25);
  EXPECT_NEAR(H->time(H->num_times() - 1), 0.0, 1e-15);
  for (std::size_t p = 0; p < H->num_space(); ++p) {
    EXPECT_LT(std::hypot(H->point(p)[0], H->point(p)[1]), 1.0);
    EXPECT_EQ(H->lookup_space(H->space_index(p)), static_cast<std::int64_t>(p));
  }
}

TEST(Dilation, EmptyAndFull) {
  const auto H = make_lattice_host(1, 16, 8, 1.0, 0.3, 0.5);
  ParabolicPointSet E(H);
  EXPECT_TRUE(dilate_set(E, 0.1, 1.0).empty());
  E.fill(true);
  EXPECT_TRUE(dilate_set(E, 0.1, 1.0).full());
}

TEST(Dilation, MatchesExhaustiveOracle) {
  const auto H = make_lattice_host(2, 8, 8, 1.0, 0.3, 0.5);
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 5; ++trial) {
    const ParabolicPointSet E = random_set(H, 0.2, rng);
    for (double gamma : {0.05, 0.1, 0.3})
      EXPECT_TRUE(dilate_set(E, gamma, 1.0) == brute_dilate(E, gamma, 1.0, 16)) << "trial " << trial << " gamma " << gamma;
  }
  const auto H1 = make_lattice_host(1, 16, 16, 1.0, 0.3, 0.5);
  const ParabolicPointSet E1 = random_set(H1, 0.1, rng);
  EXPECT_TRUE(dilate_set(E1, 0.1, 1.0) == brute_dilate(E1, 0.1, 1.0, 16));
}

TEST(Dichotomy, Trivial) {
  const auto H = make_lattice_host(1, 16, 8, 1.0, 0.3, 0.5);
  ParabolicPointSet E(H);
  const CoveringReport empty = covering_dichotomy(E, 0.1, 1.0);
  EXPECT_TRUE(empty.growth_branch);
  E.fill(true);
  const CoveringReport full = covering_dichotomy(E, 0.1, 1.0);
  EXPECT_TRUE(full.full_branch);
  EXPECT_DOUBLE_EQ(full.tolerance, 4.0 * H->cell_measure());
}

TEST(Dichotomy, RandomOneDimensional) {
  const auto H = make_lattice_host(1, 16, 16, 1.0, 0.3, 0.5);
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const ParabolicPointSet E = random_set(H, 0.2, rng);
    for (double gamma : {0.05, 0.1, 0.3}) EXPECT_NO_THROW(covering_dichotomy(E, gamma, 1.0));
  }
}

TEST(Rle, RoundTrip) {
  const auto H = make_lattice_host(2, 8, 8, 1.0, 0.3, 0.5);
  std::mt19937_64 rng(5);
  const ParabolicPointSet E = random_set(H, 0.3, rng);
  const std::string text = write_mask_rle(E);
  EXPECT_EQ(text.rfind("rle 416", 0), 0u);
  EXPECT_TRUE(read_mask_rle(H, text) == E);
}

TEST(Rle, Malformed) {
  const auto H = make_lattice_host(1, 4, 2, 1.0, 0.3, 0.5);
  auto code = [&](const std::string& text) {
    try {
      read_mask_rle(H, text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidParameter;
  };
  EXPECT_EQ(code("rle 8\n8:0\n"), ErrorCode::InvalidParameter);  // valid: no throw
  EXPECT_EQ(code("mask 8\n8:0\n"), ErrorCode::IoError);
  EXPECT_EQ(code("rle 8\n4:0 3:1\n"), ErrorCode::IoError);
  EXPECT_EQ(code("rle 8\n4:2 4:1\n"), ErrorCode::IoError);
  EXPECT_EQ(code("rle 8\n9:0\n"), ErrorCode::IoError);
  EXPECT_EQ(code("rle 9\n9:0\n"), ErrorCode::IncompatibleFields);
}

TEST(Scales, Geometric) {
  const auto r = dilation_scales(2.0);
  ASSERT_EQ(r.size(), 16u);
  EXPECT_NEAR(r[0], 2.0 * std::pow(2.0, -0.25), 1e-15);
  EXPECT_NEAR(r[15], 2.0 / 16.0, 1e-15);
}
