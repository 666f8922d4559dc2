#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <memory>

#include "nlheat/field.hpp"
#include "nlheat/nonlocal_op.hpp"

namespace nlheat {

/// Eigenpairs of A e = α M e, ascending, with h^n Σ e_i e_j = δ_ij.
struct SpectralBasis {
  std::shared_ptr<const Grid> grid;
  Eigen::VectorXd alpha;    // length k
  Eigen::MatrixXd vectors;  // interior nodes × k, L²-orthonormal columns

  std::size_t size() const { return static_cast<std::size_t>(alpha.size()); }
  double mass() const { return grid->cell_measure(); }

  /// ⟨v, e_i⟩_{L²} for all i ≤ k.
  Eigen::VectorXd project(const Eigen::Ref<const Eigen::VectorXd>& interior) const;
  /// Σ c_i e_i at interior nodes.
  Eigen::VectorXd synthesize(const Eigen::Ref<const Eigen::VectorXd>& coeffs) const;
  /// e_i as a single-time field vanishing outside Ω.
  SpaceTimeField mode_field(std::size_t i, const TimeGrid& time) const;
};

/// Solves the generalized eigenproblem for the k lowest modes and verifies
/// positivity, ordering, orthonormality and X₀-orthogonality before returning.
SpectralBasis solve_eigenproblem(const OperatorMatrix& op, std::size_t k);

/// First row: "eigenvalue" (plus an empty cell per extra axis) then α_i;
/// each following row: node coordinates then e_i at that node.
void write_basis_csv(const SpectralBasis& basis, std::ostream& out);

}  // namespace nlheat
