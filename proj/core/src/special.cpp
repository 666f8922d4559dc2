#include "nlheat/special.hpp"

#include <boost/math/special_functions/zeta.hpp>
#include <cmath>

#include "nlheat/error.hpp"

namespace nlheat::special {

double riemann_zeta(double x) { return boost::math::zeta(x); }

// Cohen-Villegas-Zagier acceleration of the alternating series; the terms
// (2k+1)^{-x} form a totally monotone sequence, so the error is ~5.8^{-m}.
double dirichlet_beta(double x) {
  require(x > 0.0, ErrorCode::InvalidParameter, "dirichlet_beta needs x > 0");
  constexpr int m = 40;
  double d = std::pow(3.0 + std::sqrt(8.0), m);
  d = (d + 1.0 / d) / 2.0;
  double b = -1.0;
  double c = -d;
  double sum = 0.0;
  for (int k = 0; k < m; ++k) {
    c = b - c;
    sum += c * std::pow(2.0 * k + 1.0, -x);
    b = (k + m) * (k - m) * b / ((k + 0.5) * (k + 1.0));
  }
  return sum / d;
}

double lattice_moment_zeta(int n, double s) {
  if (n == 1) return 2.0 * riemann_zeta(2.0 * s - 1.0);
  if (n == 2) return 4.0 * riemann_zeta(s) * dirichlet_beta(s);
  fail(ErrorCode::InvalidParameter, "dimension must be 1 or 2");
}

}  // namespace nlheat::special
