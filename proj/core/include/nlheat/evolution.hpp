#pragma once

#include <Eigen/Dense>
#include <optional>

#include "nlheat/field.hpp"
#include "nlheat/nonlocal_op.hpp"
#include "nlheat/spectral.hpp"

namespace nlheat {

/// Modal trajectories c_i(t_m), one row per mode and one column per time node.
struct GalerkinCoefficients {
  TimeGrid time;
  Eigen::MatrixXd c;
  Eigen::MatrixXd forcing;  // projected source per step; column 0 unused

  std::size_t modes() const { return static_cast<std::size_t>(c.rows()); }
};

/// Exact exponential integrator for c_i' + α_i c_i = ⟨f, e_i⟩ with f held
/// constant on each step (t_{m-1}, t_m] at its value at t_m. A missing f means
/// zero source.
GalerkinCoefficients galerkin_coefficients(const SpectralBasis& basis, const SpaceTimeField* f,
                                           const Eigen::Ref<const Eigen::VectorXd>& h_init,
                                           const TimeGrid& time);

/// Σ c_i(t) e_i with zero exterior values; the exact time derivative is stored
/// on the field.
SpaceTimeField galerkin_solve(const SpectralBasis& basis, const SpaceTimeField* f,
                              const Eigen::Ref<const Eigen::VectorXd>& h_init, const TimeGrid& time);

/// u = v + g where v solves the zero-exterior problem with source
/// f - L_K g - ∂_t g (backward differences) and initial value h - g(-T).
SpaceTimeField lift_and_solve(const NonlocalOperator& op, const SpectralBasis& basis,
                              const SpaceTimeField& g, const SpaceTimeField* f,
                              const Eigen::Ref<const Eigen::VectorXd>& h_init);

/// Implicit Euler (M/Δt + A) u^{m+1} = M u^m/Δt - B g^{m+1} + M f^{m+1}; the
/// exterior data come from g (collar values and exterior rules).
SpaceTimeField monotone_solve(const OperatorMatrix& op, const SpaceTimeField& g,
                              const SpaceTimeField* f,
                              const Eigen::Ref<const Eigen::VectorXd>& h_init);

struct ResidualStats {
  double max_abs = 0.0;
  double rms = 0.0;
  std::size_t samples = 0;
  bool exact_derivative = false;
};

/// ⟨u(t),φ⟩_K + ⟨u'(t) - f(t), φ⟩ over the test vectors (columns, interior
/// nodes). Uses the field's exact derivative when present, otherwise centred
/// differences at interior time nodes.
ResidualStats weak_residual(const NonlocalOperator& op, const SpaceTimeField& u,
                            const SpaceTimeField* f, const Eigen::Ref<const Eigen::MatrixXd>& tests);

/// Unit vectors at the interior nodes.
Eigen::MatrixXd nodal_tests(const Grid& grid);

struct EnergyReport {
  double linf_l2 = 0.0;         // ‖u‖_{L∞(I;L²)}
  double l2_x0 = 0.0;           // ‖u‖_{L²(I;X₀)}
  double derivative_dual = 0.0; // ‖u'‖_{L²(I;X₀*)}
  double lhs = 0.0;
  double data_norm = 0.0;       // ‖f‖_{L²(I;L²)} + ‖h‖_{L²}
  double ratio = 0.0;
  bool inconsistent = false;    // zero data but nonzero field
};

EnergyReport energy_report(const OperatorMatrix& op, const SpaceTimeField& u, const SpaceTimeField* f,
                           const Eigen::Ref<const Eigen::VectorXd>& h_init);

}  // namespace nlheat
