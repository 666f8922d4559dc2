#pragma once

namespace nlheat::special {

/// Riemann zeta, analytically continued (x != 1).
double riemann_zeta(double x);

/// Dirichlet beta Σ_{k>=0} (-1)^k (2k+1)^{-x} for x > 0.
double dirichlet_beta(double x);

/// Regularized value of Σ_{k ∈ Z^n \ 0} |k|^{2-n-2s}: 2ζ(2s-1) for n = 1,
/// 4ζ(s)β(s) for n = 2.
double lattice_moment_zeta(int n, double s);

}  // namespace nlheat::special
