#include "nlheat/spectral.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "nlheat/error.hpp"

namespace nlheat {

Eigen::VectorXd SpectralBasis::project(const Eigen::Ref<const Eigen::VectorXd>& interior) const {
  require(interior.size() == vectors.rows(), ErrorCode::IncompatibleFields,
          "projection needs an interior vector");
  return mass() * (vectors.transpose() * interior);
}

Eigen::VectorXd SpectralBasis::synthesize(const Eigen::Ref<const Eigen::VectorXd>& coeffs) const {
  require(coeffs.size() == vectors.cols(), ErrorCode::IncompatibleFields,
          "coefficient count differs from basis size");
  return vectors * coeffs;
}

SpaceTimeField SpectralBasis::mode_field(std::size_t i, const TimeGrid& time) const {
  require(i < size(), ErrorCode::OutOfRange, "mode index out of range");
  SpaceTimeField f(grid, time);
  for (std::size_t m = 0; m < time.size(); ++m) f.interior(m) = vectors.col(static_cast<Eigen::Index>(i));
  return f;
}

namespace {

// Modified Gram-Schmidt inside clusters of numerically equal eigenvalues.
void reorthogonalize_clusters(const Eigen::VectorXd& alpha, Eigen::MatrixXd& V) {
  const Eigen::Index k = alpha.size();
  const double scale = alpha.cwiseAbs().maxCoeff();
  Eigen::Index start = 0;
  while (start < k) {
    Eigen::Index end = start + 1;
    while (end < k && alpha[end] - alpha[end - 1] <= 1e-10 * scale) ++end;
    if (end - start > 1) {
      for (Eigen::Index a = start; a < end; ++a) {
        for (Eigen::Index b = start; b < a; ++b) V.col(a) -= V.col(b).dot(V.col(a)) * V.col(b);
        V.col(a).normalize();
      }
    }
    start = end;
  }
}

// Deterministic sign: positive coordinate sum, or positive first entry of
// largest magnitude when the sum is negligible.
void fix_signs(Eigen::MatrixXd& V) {
  for (Eigen::Index c = 0; c < V.cols(); ++c) {
    auto col = V.col(c);
    const double sum = col.sum();
    double sign = 1.0;
    if (std::abs(sum) > 1e-8 * col.cwiseAbs().sum()) {
      sign = sum > 0.0 ? 1.0 : -1.0;
    } else {
      Eigen::Index arg = 0;
      col.cwiseAbs().maxCoeff(&arg);
      sign = col[arg] > 0.0 ? 1.0 : -1.0;
    }
    col *= sign;
  }
}

}  // namespace

SpectralBasis solve_eigenproblem(const OperatorMatrix& op, std::size_t k) {
  const auto N = op.A.rows();
  require(k >= 1 && static_cast<Eigen::Index>(k) <= N, ErrorCode::InvalidParameter,
          "mode count must lie in [1, " + std::to_string(N) + "]");
  // M = mass·I turns the generalized problem into a scaled standard one.
  const Eigen::MatrixXd S = op.A / op.mass;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S);
  require(solver.info() == Eigen::Success, ErrorCode::SpectralFailure, "eigen-solver did not converge");

  const Eigen::VectorXd& evals = solver.eigenvalues();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(N));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return evals[a] < evals[b]; });

  SpectralBasis basis;
  basis.grid = op.op->grid_ptr();
  basis.alpha.resize(static_cast<Eigen::Index>(k));
  Eigen::MatrixXd V(N, static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i) {
    basis.alpha[static_cast<Eigen::Index>(i)] = evals[order[i]];
    V.col(static_cast<Eigen::Index>(i)) = solver.eigenvectors().col(order[i]);
  }
  reorthogonalize_clusters(basis.alpha, V);
  fix_signs(V);
  basis.vectors = V / std::sqrt(op.mass);

  require(basis.alpha[0] > 0.0, ErrorCode::SpectralFailure,
          "first eigenvalue is not positive; assembly is broken");
  for (Eigen::Index i = 1; i < basis.alpha.size(); ++i)
    require(basis.alpha[i] >= basis.alpha[i - 1], ErrorCode::SpectralFailure, "eigenvalues not sorted");

  const Eigen::MatrixXd gram = op.mass * basis.vectors.transpose() * basis.vectors;
  const double ortho = (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  require(ortho < 1e-9, ErrorCode::SpectralFailure,
          "basis not L2-orthonormal (defect " + std::to_string(ortho) + ")");
  const Eigen::MatrixXd energy = basis.vectors.transpose() * op.A * basis.vectors;
  const double amax = basis.alpha.cwiseAbs().maxCoeff();
  Eigen::MatrixXd defect = energy;
  defect.diagonal() -= basis.alpha;
  require(defect.cwiseAbs().maxCoeff() < 1e-9 * amax, ErrorCode::SpectralFailure,
          "basis not X0-orthogonal or energies differ from eigenvalues");
  return basis;
}

void write_basis_csv(const SpectralBasis& basis, std::ostream& out) {
  const Grid& g = *basis.grid;
  out.precision(17);
  out << "eigenvalue";
  if (g.dim() == 2) out << ',';
  for (Eigen::Index i = 0; i < basis.alpha.size(); ++i) out << ',' << basis.alpha[i];
  out << '\n';
  for (std::size_t j = 0; j < g.num_interior(); ++j) {
    const Point& p = g.point(j);
    out << p[0];
    if (g.dim() == 2) out << ',' << p[1];
    for (Eigen::Index i = 0; i < basis.alpha.size(); ++i)
      out << ',' << basis.vectors(static_cast<Eigen::Index>(j), i);
    out << '\n';
  }
}

}  // namespace nlheat
