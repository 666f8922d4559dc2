#include "nlheat/kernel.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <string>

#include "nlheat/error.hpp"

namespace nlheat {

namespace {

void check_order(int n, double s) {
  require(n == 1 || n == 2, ErrorCode::InvalidParameter,
          "dimension must be 1 or 2, got " + std::to_string(n));
  require(s > 0.0 && s < 1.0 && std::isfinite(s), ErrorCode::InvalidParameter,
          "order s must lie in (0,1), got " + std::to_string(s));
}

// ∫_0^1 (1 - cos ξ) ξ^{-1-2s} dξ from the cosine series, term by term.
double near_part(double s) {
  double sum = 0.0;
  double fact = 1.0;  // (2k)!
  for (int k = 1; k < 30; ++k) {
    fact *= (2.0 * k - 1.0) * (2.0 * k);
    const double term = 1.0 / (fact * (2.0 * k - 2.0 * s));
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-18) break;
  }
  return sum;
}

// ∫_X^∞ cos(ξ) ξ^{-a} dξ by the asymptotic integration-by-parts series
// Re[i e^{iX} Σ_k (-i)^k (a)_k X^{-a-k}], truncated at its smallest term.
double oscillatory_tail(double a, double X) {
  double re = 0.0;
  double im = 0.0;
  double mag = std::pow(X, -a);  // (a)_k X^{-a-k}
  double prev = mag * 2.0;
  for (int k = 0; k < 40; ++k) {
    if (mag > prev || mag < 1e-20) break;
    // (-i)^k cycles 1, -i, -1, i.
    switch (k % 4) {
      case 0: re += mag; break;
      case 1: im -= mag; break;
      case 2: re -= mag; break;
      case 3: im += mag; break;
    }
    prev = mag;
    mag *= (a + k) / X;
  }
  // i·e^{iX}·(re + i·im) = i(cosX + i sinX)(re + i im)
  const double c = std::cos(X);
  const double sn = std::sin(X);
  return -(sn * re + c * im);
}

// ∫_1^∞ cos(ξ) ξ^{-a} dξ: Gauss-Kronrod on half-period panels up to X, then
// the asymptotic series.
double oscillatory_integral(double a) {
  using boost::math::quadrature::gauss_kronrod;
  const double X = 1.0 + 128.0 * std::numbers::pi;
  const int panels = 256;
  const double width = (X - 1.0) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = 1.0 + p * width;
    sum += gauss_kronrod<double, 31>::integrate(
        [a](double x) { return std::cos(x) * std::pow(x, -a); }, lo, lo + width, 5, 1e-14);
  }
  return sum + oscillatory_tail(a, X);
}

// ∫_R (1+τ²)^{-1-s} dτ = 2∫_0^{π/2} cos^{2s}θ dθ.
double transverse_factor(double s) {
  using boost::math::quadrature::gauss_kronrod;
  return 2.0 * gauss_kronrod<double, 61>::integrate(
                   [s](double th) { return std::pow(std::cos(th), 2.0 * s); }, 0.0,
                   std::numbers::pi / 2.0, 10, 1e-15);
}

double compute_full_integral(int n, double s) {
  // 1D: ∫_R (1-cos ξ)|ξ|^{-1-2s} = 2[∫_0^1 + ∫_1^∞ ξ^{-1-2s} - ∫_1^∞ cos ξ ξ^{-1-2s}].
  const double one_d = 2.0 * (near_part(s) + 1.0 / (2.0 * s) - oscillatory_integral(1.0 + 2.0 * s));
  if (n == 1) return one_d;
  // 2D: integrate out ξ_2 at fixed ξ_1 by the substitution ξ_2 = |ξ_1|τ.
  return one_d * transverse_factor(s);
}

}  // namespace

Kernel::Kernel(int dim, double s, double lambda, double Lambda, RadialProfile profile,
               std::optional<double> power_coefficient)
    : dim_(dim),
      s_(s),
      lambda_(lambda),
      Lambda_(Lambda),
      profile_(std::move(profile)),
      power_coefficient_(power_coefficient) {
  check_order(dim, s);
  require(lambda > 0.0 && Lambda >= lambda, ErrorCode::InvalidParameter,
          "ellipticity bounds must satisfy 0 < lambda <= Lambda");
  require(static_cast<bool>(profile_), ErrorCode::InvalidParameter, "kernel profile is empty");
}

double Kernel::at(const double* y) const {
  double r2 = 0.0;
  for (int d = 0; d < dim_; ++d) r2 += y[d] * y[d];
  return profile_(std::sqrt(r2));
}

double Kernel::local_coefficient(double r) const {
  if (power_coefficient_) return *power_coefficient_;
  return profile_(r) * std::pow(r, dim_ + 2.0 * s_);
}

double Kernel::far_mass(double R) const {
  require(R > 0.0, ErrorCode::InvalidParameter, "far_mass needs R > 0");
  const double S = sphere_measure(dim_);
  if (power_coefficient_) return *power_coefficient_ * S * std::pow(R, -2.0 * s_) / (2.0 * s_);
  boost::math::quadrature::exp_sinh<double> integrator;
  const double v = integrator.integrate(
      [this, R](double t) {
        const double r = R + t;
        return profile_(r) * std::pow(r, dim_ - 1.0);
      },
      0.0, std::numeric_limits<double>::infinity());
  return S * v;
}

Kernel Kernel::scaled(double factor) const {
  require(factor > 0.0, ErrorCode::InvalidParameter, "kernel scale factor must be positive");
  RadialProfile p = [inner = profile_, factor](double r) { return factor * inner(r); };
  std::optional<double> pc;
  if (power_coefficient_) pc = *power_coefficient_ * factor;
  return Kernel(dim_, s_, lambda_ * factor, Lambda_ * factor, std::move(p), pc);
}

double sphere_measure(int n) {
  if (n == 1) return 2.0;
  if (n == 2) return 2.0 * std::numbers::pi;
  fail(ErrorCode::InvalidParameter, "dimension must be 1 or 2");
}

double ball_measure(int n, double r) {
  if (n == 1) return 2.0 * r;
  if (n == 2) return std::numbers::pi * r * r;
  fail(ErrorCode::InvalidParameter, "dimension must be 1 or 2");
}

double cosine_integral(int n, double s) {
  check_order(n, s);
  static std::mutex mutex;
  static std::map<std::pair<int, double>, double> cache;
  std::lock_guard<std::mutex> lock(mutex);
  const auto key = std::make_pair(n, s);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  const double v = 0.5 * compute_full_integral(n, s);
  cache.emplace(key, v);
  return v;
}

double normalization_constant(int n, double s) { return 0.25 / cosine_integral(n, s); }

Kernel make_fractional_kernel(int n, double s) {
  check_order(n, s);
  const double c = normalization_constant(n, s);
  const double p = -(n + 2.0 * s);
  RadialProfile profile = [c, p](double r) { return c * std::pow(r, p); };
  const double bound = c / (1.0 - s);
  return Kernel(n, s, bound, bound, std::move(profile), c);
}

std::vector<double> validation_radii(double h_min, double R_inf) {
  require(h_min > 0.0 && R_inf > h_min, ErrorCode::InvalidParameter,
          "validation range needs 0 < h_min < R_inf");
  std::vector<double> r(64);
  const double ratio = std::log(R_inf / h_min) / 63.0;
  for (int i = 0; i < 64; ++i) r[i] = h_min * std::exp(ratio * i);
  r.back() = R_inf;
  return r;
}

Kernel make_custom_kernel(int n, double s, double lambda, double Lambda, RadialProfile profile,
                          double h_min, double R_inf) {
  check_order(n, s);
  require(lambda > 0.0 && Lambda >= lambda, ErrorCode::InvalidParameter,
          "ellipticity bounds must satisfy 0 < lambda <= Lambda");
  require(static_cast<bool>(profile), ErrorCode::InvalidParameter, "kernel profile is empty");
  for (double r : validation_radii(h_min, R_inf)) {
    const double k = profile(r);
    const double env = (1.0 - s) * std::pow(r, -(n + 2.0 * s));
    // Relative slack of a few ulps keeps exact multiples of the envelope admissible.
    const double slack = 1e-12;
    if (!(std::isfinite(k) && k > 0.0 && k >= lambda * env * (1.0 - slack) &&
          k <= Lambda * env * (1.0 + slack))) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "ellipticity violated at radius " << r << " (K=" << k << ", bounds ["
          << lambda * env << ", " << Lambda * env << "])";
      fail(ErrorCode::KernelRejected, msg.str());
    }
  }
  return Kernel(n, s, lambda, Lambda, std::move(profile), std::nullopt);
}

std::vector<std::pair<double, double>> read_radial_table(std::istream& in) {
  std::vector<std::pair<double, double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double r = 0.0;
    double v = 0.0;
    if (!(ls >> r >> v)) {
      if (rows.empty() && lineno == 1) continue;  // header
      fail(ErrorCode::IoError, "radial table line " + std::to_string(lineno) + " is malformed");
    }
    require(r > 0.0 && v > 0.0, ErrorCode::IoError,
            "radial table line " + std::to_string(lineno) + " needs positive radius and value");
    rows.emplace_back(r, v);
  }
  require(rows.size() >= 2, ErrorCode::IoError, "radial table needs at least two rows");
  std::sort(rows.begin(), rows.end());
  return rows;
}

RadialProfile tabulated_profile(std::vector<std::pair<double, double>> table, int n, double s) {
  check_order(n, s);
  require(table.size() >= 2, ErrorCode::InvalidParameter, "radial table needs at least two rows");
  std::sort(table.begin(), table.end());
  std::vector<double> lr;
  std::vector<double> lv;
  for (auto [r, v] : table) {
    lr.push_back(std::log(r));
    lv.push_back(std::log(v));
  }
  const double p = -(n + 2.0 * s);
  return [lr = std::move(lr), lv = std::move(lv), p](double r) {
    const double x = std::log(r);
    if (x <= lr.front()) return std::exp(lv.front() + p * (x - lr.front()));
    if (x >= lr.back()) return std::exp(lv.back() + p * (x - lr.back()));
    const auto it = std::upper_bound(lr.begin(), lr.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - lr.begin());
    const double w = (x - lr[j - 1]) / (lr[j] - lr[j - 1]);
    return std::exp(lv[j - 1] + w * (lv[j] - lv[j - 1]));
  };
}

}  // namespace nlheat
