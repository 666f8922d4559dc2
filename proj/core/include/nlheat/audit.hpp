#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "nlheat/evolution.hpp"
#include "nlheat/field.hpp"
#include "nlheat/lattice.hpp"
#include "nlheat/nonlocal_op.hpp"

namespace nlheat {

struct RhsTerm {
  std::string name;
  double value = 0.0;
};

struct CylinderRecord {
  std::string kind;
  Point center{0.0, 0.0};
  double t0 = 0.0;
  double r = 0.0;
  std::size_t nodes = 0;
  std::size_t steps = 0;
};

struct Provenance {
  std::string scheme;
  int dim = 0;
  double s = 0.0;
  double h = 0.0;
  double dt = 0.0;
};

/// One inequality evaluated on a computed field. For inequalities with a
/// stated constant, pass ⇔ lhs <= rhs·(1 + tolerance); for existential
/// constants the result passes when the empirical constant is finite and does
/// not exceed `bound`.
struct AuditResult {
  std::string check_id;
  std::vector<std::pair<std::string, double>> params;
  std::vector<CylinderRecord> cylinders;
  double lhs = 0.0;
  std::vector<RhsTerm> rhs_terms;
  double rhs = 0.0;
  double empirical_constant = 0.0;
  double bound = std::numeric_limits<double>::infinity();
  double tolerance = 0.0;
  bool pass = false;
  bool skipped = false;    // hypotheses not met
  bool degenerate = false; // infimum floored at machine epsilon
  std::string note;
  Provenance provenance;
};

/// Boundary data g (collar values and exterior rules; interior values unused),
/// optional source f and initial interior values h.
struct ProblemData {
  SpaceTimeField g;
  std::optional<SpaceTimeField> f;
  Eigen::VectorXd h;
};

/// Sign (g, h, f <= 0 ⇒ u <= 0), comparison (ordered data ⇒ ordered
/// solutions, needs `other`) and sup|u| <= 2·sup|g| (f ≡ 0), all on
/// monotone_solve with zero tolerance except the last (2%).
std::vector<AuditResult> audit_order_principles(const OperatorMatrix& op, const ProblemData& data,
                                                const ProblemData* other = nullptr);

struct Cutoffs {
  std::function<double(const Point&)> zeta;
  std::function<double(double)> eta;
  std::function<double(double)> eta_prime;
};

/// Smooth step: 0 for x <= 0, 1 for x >= 1, C∞ in between.
double smooth_step(double x);
double smooth_step_derivative(double x);

/// ζ = 1 on B_{r/2}, 0 outside B_{3r/4}; η rises from 0 at t0 - r^{2s} to 1
/// at t0 - r^{2s}/2.
Cutoffs standard_cutoffs(const Point& center, double t0, double r, double s, int dim);

enum class LevelSide { Above, Below };  // w = (u - M)_+ or (u - M)_-

/// Energy inequality on Q_r(x0,t0) with coefficients (2, 1, 2) on the time
/// derivative, cutoff and tail terms. Requires Q_{2r}(x0,t0) ⊂ Ω × [-T, 0].
AuditResult audit_caccioppoli(const NonlocalOperator& op, const SpaceTimeField& u, const Point& center,
                              double t0, double r, double level, LevelSide side,
                              const std::optional<Cutoffs>& cutoffs = std::nullopt,
                              double tolerance = 0.1);

/// sup_{Q_r} u <= δ·T_r(u⁺) + C0·δ^{-αn/(4s)}·(|𝒬_{2r}|⁻¹∬_{Q_{2r}}(u⁺)²)^{1/2},
/// α = 1 + 2s/n; reports the smallest admissible C0. For globally
/// nonnegative u a second result reports C in sup_{Q_r} u <= C·(mean u²)^{1/2}.
std::vector<AuditResult> audit_boundedness(const SpaceTimeField& u, double s, const Point& center,
                                           double t0, double r, double delta,
                                           double sigma = kDefaultSigma);

struct HarnackOptions {
  double sigma = kDefaultSigma;
  double tolerance = 0.1;
  std::vector<double> exponents{0.25, 0.5, 0.75};
  double constant_bound = std::numeric_limits<double>::infinity();
};

/// Tail relation, weak Harnack with constants (1, 4/3) per exponent p, full
/// Harnack and the tail-free form. Results are sorted by check id.
std::vector<AuditResult> audit_harnack_suite(const SpaceTimeField& u, double s, const Point& center,
                                             double t0, double r, double R,
                                             const HarnackOptions& options = {});

/// Ids of every check the suite can emit.
const std::vector<std::string>& audit_check_ids();

std::string audits_to_json(const std::vector<AuditResult>& results, int indent = 2);
void write_audits_csv(std::ostream& os, const std::vector<AuditResult>& results);

}  // namespace nlheat
