#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <vector>

#include "nlheat/field.hpp"
#include "nlheat/kernel.hpp"
#include "nlheat/lattice.hpp"

namespace nlheat {

/// How the lattice sum approximates the kernel integral.
struct QuadratureRecord {
  double h_min = 0.0;              // radius of the dropped singular ball
  double R_inf = 0.0;              // direct-summation cutoff
  int reach = 0;                   // offsets up to reach·h per axis
  std::size_t offsets = 0;         // nonzero offsets with |y| <= R_inf
  double far_mass = 0.0;           // ∫_{|y|>R_inf} K
  double local_coefficient = 0.0;  // K(h)·h^{n+2s}
  double moment_correction = 0.0;  // weight added to each nearest neighbour
  double sub_h_moment = 0.0;       // ∫_{|y|<h} |y|² K
};

/// Translation-invariant lattice weights w(y) = h^n K(y) for 0 < |y| <= R_inf,
/// with a second-moment correction on the 2n nearest neighbours that stands
/// in for the singular ball |y| < h.
class LatticeWeights {
public:
  struct Offset {
    LatticeIndex d;
    double w;
  };

  LatticeWeights(const Kernel& kernel, double h, double R_inf, bool moment_correction = true);

  int dim() const { return dim_; }
  double h() const { return h_; }
  int reach() const { return reach_; }
  /// Offsets in one half-space (y and -y are paired by the caller).
  const std::vector<Offset>& half_offsets() const { return half_; }
  /// Weight at a lattice offset, 0 beyond the cutoff or at the origin.
  double operator()(const LatticeIndex& d) const;
  const QuadratureRecord& record() const { return record_; }
  /// Σ_{y≠0} w(y) + far_mass: the diagonal of L before the factor 2.
  double total_mass() const { return total_; }

private:
  int dim_;
  double h_;
  int reach_;
  std::vector<double> table_;
  std::vector<Offset> half_;
  QuadratureRecord record_;
  double total_ = 0.0;
};

struct OperatorMatrix;

/// Discrete L_K on a grid with collar. All "stiffness" quantities are scaled by
/// the cell measure h^n so that uᵀAv = ⟨u, v⟩_K for interior-supported fields.
class NonlocalOperator {
public:
  NonlocalOperator(std::shared_ptr<const Grid> grid, Kernel kernel, bool moment_correction = true);

  const Grid& grid() const { return *grid_; }
  const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }
  const Kernel& kernel() const { return kernel_; }
  const LatticeWeights& weights() const { return weights_; }
  const QuadratureRecord& quadrature() const { return weights_.record(); }

  /// L u at interior nodes from nodal values (interior then collar) and the
  /// rule beyond the collar, pairing y with -y into the second difference.
  Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& nodal, const ExteriorRule& far) const;

  /// B·g: stiffness-scaled coupling of collar values into interior rows.
  Eigen::VectorXd collar_coupling(const Eigen::Ref<const Eigen::VectorXd>& collar) const;
  /// Stiffness-scaled contribution of the exterior rule beyond R_inf.
  Eigen::VectorXd far_term(const ExteriorRule& far) const;

  /// Dense stiffness A over interior unknowns.
  Eigen::MatrixXd stiffness() const;

  /// ∫_{|y|<h}|y|²K · max second difference of u over interior nodes.
  double quadrature_error_estimate(const Eigen::Ref<const Eigen::VectorXd>& nodal) const;

private:
  std::shared_ptr<const Grid> grid_;
  Kernel kernel_;
  LatticeWeights weights_;
};

struct OperatorMatrix {
  std::shared_ptr<const NonlocalOperator> op;
  Eigen::MatrixXd A;  // stiffness
  double mass = 0.0;  // M = mass·I

  const Grid& grid() const { return op->grid(); }
  /// B g + far term, both stiffness-scaled.
  Eigen::VectorXd boundary_load(const Eigen::Ref<const Eigen::VectorXd>& collar,
                                const ExteriorRule& far) const;
};

std::shared_ptr<const NonlocalOperator> make_operator(std::shared_ptr<const Grid> grid,
                                                      const Kernel& kernel,
                                                      bool moment_correction = true);

OperatorMatrix assemble(std::shared_ptr<const NonlocalOperator> op);
OperatorMatrix assemble(std::shared_ptr<const Grid> grid, const Kernel& kernel);

/// L_K u at the interior nodes for time step m of the field.
Eigen::VectorXd apply_Lk(const NonlocalOperator& op, const SpaceTimeField& field, std::size_t m);

/// ⟨u, v⟩_K over pairs with at least one point in Ω, truncated at R_inf, plus
/// the far-field pairs evaluated with the exterior rules.
double bilinear_form(const NonlocalOperator& op, const SpaceTimeField& u, const SpaceTimeField& v,
                     std::size_t m);
/// Same for nodal vectors (interior then collar) with given exterior rules.
double bilinear_form(const NonlocalOperator& op, const Eigen::Ref<const Eigen::VectorXd>& u,
                     const ExteriorRule& u_far, const Eigen::Ref<const Eigen::VectorXd>& v,
                     const ExteriorRule& v_far);

/// Gagliardo double sum with kernel |x-y|^{-n-2s} over pairs with at least
/// one point in Ω; requires the field to vanish outside Ω.
double x0_norm(const Grid& grid, double s, const SpaceTimeField& field, std::size_t m);

/// [v]_{H^s(region)} by the full double sum over lattice nodes in region.
/// Defaults to Ω.
double hs_seminorm(const Grid& grid, double s, const SpaceTimeField& field, std::size_t m,
                   const std::optional<Domain>& region = std::nullopt);

/// L_K on a periodic lattice of `period` nodes per axis and spacing h; values
/// are ordered with axis 0 fastest. Offsets beyond R_inf use the mean value.
Eigen::VectorXd apply_Lk_periodic(const Kernel& kernel, double h, int period,
                                  const Eigen::Ref<const Eigen::VectorXd>& values, double R_inf,
                                  bool moment_correction = true);

}  // namespace nlheat
