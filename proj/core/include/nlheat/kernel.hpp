#pragma once

#include <functional>
#include <istream>
#include <optional>
#include <utility>
#include <vector>

namespace nlheat {

using RadialProfile = std::function<double(double)>;

/// Radially symmetric jump kernel of order s with ellipticity bounds
/// (1-s)·lambda·|y|^{-n-2s} <= K(y) <= (1-s)·Lambda·|y|^{-n-2s}.
class Kernel {
public:
  Kernel(int dim, double s, double lambda, double Lambda, RadialProfile profile,
         std::optional<double> power_coefficient);

  int dim() const { return dim_; }
  double s() const { return s_; }
  double lambda() const { return lambda_; }
  double Lambda() const { return Lambda_; }

  /// K at radius r > 0.
  double operator()(double r) const { return profile_(r); }
  /// K at a displacement vector (first dim() entries used).
  double at(const double* y) const;

  /// Set when K(y) = kappa·|y|^{-n-2s} exactly.
  const std::optional<double>& power_coefficient() const { return power_coefficient_; }

  /// Power-law coefficient seen at radius r: K(r)·r^{n+2s}.
  double local_coefficient(double r) const;

  /// Integral of K over {|y| > R}.
  double far_mass(double R) const;

  /// Same kernel multiplied by factor > 0 (bounds scale accordingly).
  Kernel scaled(double factor) const;

private:
  int dim_;
  double s_;
  double lambda_;
  double Lambda_;
  RadialProfile profile_;
  std::optional<double> power_coefficient_;
};

/// |S^{n-1}|: 2 for n = 1, 2π for n = 2.
double sphere_measure(int n);
/// Lebesgue measure of the ball of radius r in R^n.
double ball_measure(int n, double r);

/// (1/2)∫_{R^n} (1 - cos ξ_1)/|ξ|^{n+2s} dξ, evaluated by quadrature and cached.
double cosine_integral(int n, double s);

/// Coefficient c with K = c|y|^{-n-2s} having Fourier symbol exactly |ξ|^{2s}.
/// Equals 1/(4·cosine_integral(n, s)).
double normalization_constant(int n, double s);

Kernel make_fractional_kernel(int n, double s);

/// Validates the ellipticity sandwich on 64 geometric radii spanning
/// [h_min, R_inf]; throws kernel-rejected naming the first failing radius.
Kernel make_custom_kernel(int n, double s, double lambda, double Lambda, RadialProfile profile,
                          double h_min, double R_inf);

/// Radii used by make_custom_kernel.
std::vector<double> validation_radii(double h_min, double R_inf);

/// Reads "radius,value" rows (an optional header line is skipped).
std::vector<std::pair<double, double>> read_radial_table(std::istream& in);

/// Log-log interpolation of a radial table; power-law extension with
/// exponent -n-2s outside the tabulated range.
RadialProfile tabulated_profile(std::vector<std::pair<double, double>> table, int n, double s);

}  // namespace nlheat
