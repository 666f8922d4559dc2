#include "nlheat/audit.hpp"

#include <algorithm>
#include <array>
#include <cfloat>
#include <charconv>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nlheat/error.hpp"
#include "nlheat/kernel.hpp"
#include "nlheat/tail.hpp"

namespace nlheat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Provenance provenance_of(const SpaceTimeField& u, double s) {
  Provenance p;
  p.dim = u.grid().dim();
  p.s = s;
  p.h = u.grid().h();
  p.dt = u.time().dt();
  return p;
}

CylinderRecord record_of(const Cylinder& c, const Grid& grid, const TimeGrid& time) {
  CylinderRecord rec;
  rec.kind = to_string(c.kind());
  rec.center = c.center();
  rec.t0 = c.t0();
  rec.r = c.r();
  rec.nodes = c.member_nodes(grid).size();
  rec.steps = c.member_steps(time).size();
  return rec;
}

struct Members {
  std::vector<std::size_t> nodes;
  std::vector<std::size_t> steps;
};

Members members_of(const Cylinder& c, const Grid& grid, const TimeGrid& time) {
  Members m{c.member_nodes(grid), c.member_steps(time)};
  if (m.nodes.empty() || m.steps.empty())
    fail(ErrorCode::EmptyCylinder, std::string(to_string(c.kind())) + " cylinder of radius " +
                                       std::to_string(c.r()) + " has no lattice members");
  return m;
}

double sup_over(const SpaceTimeField& u, const Members& q) {
  double v = -kInf;
  for (std::size_t m : q.steps)
    for (std::size_t j : q.nodes) v = std::max(v, u(j, m));
  return v;
}

double inf_over(const SpaceTimeField& u, const Members& q) {
  double v = kInf;
  for (std::size_t m : q.steps)
    for (std::size_t j : q.nodes) v = std::min(v, u(j, m));
  return v;
}

bool globally_nonnegative(const SpaceTimeField& u) {
  if (u.values().size() > 0 && u.values().minCoeff() < 0.0) return false;
  for (std::size_t m = 0; m < u.time().size(); ++m) {
    const ExteriorRule& rule = u.exterior(m);
    if (!rule.is_bounded() || rule.value < 0.0) return false;
  }
  return true;
}

double ratio_or_inf(double num, double den) {
  if (num <= 0.0) return 0.0;
  if (den <= 0.0) return kInf;
  return num / den;
}

void finish_existential(AuditResult& r) {
  r.pass = std::isfinite(r.empirical_constant) && r.empirical_constant <= r.bound;
}

void finish_explicit(AuditResult& r) {
  r.rhs = 0.0;
  for (const auto& t : r.rhs_terms) r.rhs += t.value;
  r.pass = r.lhs <= r.rhs * (1.0 + r.tolerance);
  r.empirical_constant = ratio_or_inf(r.lhs, r.rhs);
}

// Order checks use the extreme pointwise gap instead of a constant.
void finish_exact(AuditResult& r) {
  r.rhs = 0.0;
  for (const auto& t : r.rhs_terms) r.rhs += t.value;
  r.pass = r.lhs <= r.rhs;
  r.empirical_constant = r.lhs - r.rhs;
}

AuditResult skipped(std::string id, std::string why, Provenance prov) {
  AuditResult r;
  r.check_id = std::move(id);
  r.skipped = true;
  r.note = std::move(why);
  r.provenance = std::move(prov);
  return r;
}

// ---- order principles -----------------------------------------------------

bool exterior_le(const ExteriorRule& a, const ExteriorRule& b) {
  return a.is_bounded() && b.is_bounded() && a.value <= b.value;
}

bool data_le(const ProblemData& a, const ProblemData& b) {
  const std::size_t steps = a.g.time().size();
  for (std::size_t m = 0; m < steps; ++m) {
    if (((a.g.collar(m) - b.g.collar(m)).array() > 0.0).any()) return false;
    if (!exterior_le(a.g.exterior(m), b.g.exterior(m))) return false;
  }
  if (((a.h - b.h).array() > 0.0).any()) return false;
  for (std::size_t m = 0; m < steps; ++m) {
    Eigen::VectorXd fa = a.f ? Eigen::VectorXd(a.f->interior(m)) : Eigen::VectorXd::Zero(a.h.size());
    Eigen::VectorXd fb = b.f ? Eigen::VectorXd(b.f->interior(m)) : Eigen::VectorXd::Zero(b.h.size());
    if (((fa - fb).array() > 0.0).any()) return false;
  }
  return true;
}

bool data_nonpositive(const ProblemData& d) {
  for (std::size_t m = 0; m < d.g.time().size(); ++m) {
    if ((d.g.collar(m).array() > 0.0).any()) return false;
    const ExteriorRule& rule = d.g.exterior(m);
    if (!rule.is_bounded() || rule.value > 0.0) return false;
    if (d.f && (d.f->interior(m).array() > 0.0).any()) return false;
  }
  return !(d.h.array() > 0.0).any();
}

bool source_vanishes(const ProblemData& d) {
  if (!d.f) return true;
  return d.f->values().cwiseAbs().maxCoeff() == 0.0;
}

double boundary_sup(const ProblemData& d) {
  double v = d.h.size() > 0 ? d.h.cwiseAbs().maxCoeff() : 0.0;
  for (std::size_t m = 0; m < d.g.time().size(); ++m) {
    if (d.g.collar(m).size() > 0) v = std::max(v, d.g.collar(m).cwiseAbs().maxCoeff());
    v = std::max(v, d.g.exterior(m).sup_abs());
  }
  return v;
}

SpaceTimeField solve(const OperatorMatrix& op, const ProblemData& d) {
  return monotone_solve(op, d.g, d.f ? &*d.f : nullptr, d.h);
}

}  // namespace

std::vector<AuditResult> audit_order_principles(const OperatorMatrix& op, const ProblemData& data,
                                                const ProblemData* other) {
  const double s = op.op->kernel().s();
  std::vector<AuditResult> out;
  const SpaceTimeField u = solve(op, data);
  Provenance prov = provenance_of(u, s);
  prov.scheme = "monotone";

  if (data_nonpositive(data)) {
    AuditResult r;
    r.check_id = "order.sign";
    r.lhs = u.values().maxCoeff();
    r.rhs_terms = {{"zero", 0.0}};
    r.provenance = prov;
    finish_exact(r);
    out.push_back(r);
  } else {
    out.push_back(skipped("order.sign", "data not nonpositive", prov));
  }

  if (other != nullptr && data_le(data, *other)) {
    const SpaceTimeField v = solve(op, *other);
    AuditResult r;
    r.check_id = "order.comparison";
    r.lhs = (u.values() - v.values()).maxCoeff();
    r.rhs_terms = {{"zero", 0.0}};
    r.provenance = prov;
    finish_exact(r);
    out.push_back(r);
  } else {
    out.push_back(skipped("order.comparison",
                          other == nullptr ? "no second data set" : "data sets are not ordered", prov));
  }

  if (source_vanishes(data)) {
    AuditResult r;
    r.check_id = "order.linf_bound";
    r.tolerance = 0.02;
    r.lhs = u.values().cwiseAbs().maxCoeff();
    r.rhs_terms = {{"twice_sup_g", 2.0 * boundary_sup(data)}};
    r.provenance = prov;
    finish_explicit(r);
    out.push_back(r);
  } else {
    out.push_back(skipped("order.linf_bound", "nonzero source", prov));
  }
  return out;
}

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

double smooth_step_derivative(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  const double q = a + b;
  return a * b * (1.0 / (x * x) + 1.0 / ((1.0 - x) * (1.0 - x))) / (q * q);
}

Cutoffs standard_cutoffs(const Point& center, double t0, double r, double s, int dim) {
  const double start = t0 - std::pow(r, 2.0 * s);
  const double rise = 0.5 * std::pow(r, 2.0 * s);
  Cutoffs c;
  c.zeta = [=](const Point& x) { return smooth_step((0.75 * r - distance(x, center, dim)) / (0.25 * r)); };
  c.eta = [=](double t) { return smooth_step((t - start) / rise); };
  c.eta_prime = [=](double t) { return smooth_step_derivative((t - start) / rise) / rise; };
  return c;
}

AuditResult audit_caccioppoli(const NonlocalOperator& op, const SpaceTimeField& u, const Point& center,
                              double t0, double r, double level, LevelSide side,
                              const std::optional<Cutoffs>& cutoffs, double tolerance) {
  const Grid& grid = op.grid();
  require(grid.same_as(u.grid()), ErrorCode::IncompatibleFields, "field and operator grids differ");
  const TimeGrid& time = u.time();
  const double s = op.kernel().s();
  const int n = grid.dim();
  const double hn = grid.cell_measure();
  const double dt = time.dt();

  const Cylinder outer = make_cylinder(grid, time, center, t0, 2.0 * r, CylinderKind::Standard, kDefaultSigma, s);
  const Cylinder q = make_cylinder(grid, time, center, t0, r, CylinderKind::Standard, kDefaultSigma, s);
  const Members mem = members_of(q, grid, time);
  const Cutoffs cut = cutoffs ? *cutoffs : standard_cutoffs(center, t0, r, s, n);

  auto w_of = [&](double v) { return side == LevelSide::Above ? std::max(v - level, 0.0) : std::max(level - v, 0.0); };

  const std::size_t P = mem.nodes.size();
  std::vector<double> zeta(P);
  for (std::size_t a = 0; a < P; ++a) zeta[a] = cut.zeta(grid.point(mem.nodes[a]));
  std::vector<std::size_t> support;
  for (std::size_t a = 0; a < P; ++a)
    if (zeta[a] > 0.0) support.push_back(a);

  // pair weights between ball members
  const LatticeWeights& W = op.weights();
  Eigen::MatrixXd pw = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(P), static_cast<Eigen::Index>(P));
  for (std::size_t a = 0; a < P; ++a)
    for (std::size_t b = 0; b < P; ++b) {
      if (a == b) continue;
      const auto& ia = grid.index(mem.nodes[a]);
      const auto& ib = grid.index(mem.nodes[b]);
      pw(a, b) = W({ib[0] - ia[0], ib[1] - ia[1]}) * hn;
    }

  std::vector<std::size_t> outside;
  for (std::size_t j = 0; j < grid.num_nodes(); ++j)
    if (distance(grid.point(j), center, n) >= r) outside.push_back(j);
  const double far_mass = op.kernel().far_mass(grid.R_inf());

  double sup_term = 0.0, energy = 0.0, time_term = 0.0, cutoff_term = 0.0, l1 = 0.0, tail_sup = 0.0;
  std::vector<double> w(P), wz(P);
  for (std::size_t m : mem.steps) {
    const double t = time.time(m);
    const double eta = cut.eta(t);
    const double deta = cut.eta_prime(t);
    double l2 = 0.0, l1m = 0.0;
    for (std::size_t a = 0; a < P; ++a) {
      w[a] = w_of(u(mem.nodes[a], m));
      wz[a] = w[a] * zeta[a];
      l2 += wz[a] * wz[a];
      l1m += w[a] * zeta[a] * zeta[a];
    }
    l2 *= hn;
    l1m *= hn;
    double pair_energy = 0.0, pair_cut = 0.0;
    for (std::size_t a = 0; a < P; ++a)
      for (std::size_t b = 0; b < P; ++b) {
        if (a == b) continue;
        const double d = wz[a] - wz[b];
        const double mx = std::max(w[a], w[b]);
        const double dz = zeta[a] - zeta[b];
        pair_energy += d * d * pw(a, b);
        pair_cut += mx * mx * dz * dz * pw(a, b);
      }
    sup_term = std::max(sup_term, eta * eta * l2);
    energy += dt * eta * eta * pair_energy;
    cutoff_term += dt * eta * eta * pair_cut;
    time_term += dt * 2.0 * eta * deta * l2;
    l1 += dt * l1m;

    const ExteriorRule& rule = u.exterior(m);
    require(rule.is_bounded(), ErrorCode::InvalidParameter, "tail term needs bounded exterior data");
    const double w_far = w_of(rule.value);
    for (std::size_t a : support) {
      const auto& ix = grid.index(mem.nodes[a]);
      double acc = w_far * far_mass;
      for (std::size_t j : outside) {
        const double wy = w_of(u(j, m));
        if (wy == 0.0) continue;
        const auto& iy = grid.index(j);
        acc += wy * W({iy[0] - ix[0], iy[1] - ix[1]});
      }
      tail_sup = std::max(tail_sup, acc);
    }
  }

  AuditResult res;
  res.check_id = "caccioppoli";
  res.params = {{"level", level}, {"side", side == LevelSide::Above ? 1.0 : -1.0}, {"r", r}, {"t0", t0}};
  res.cylinders = {record_of(q, grid, time), record_of(outer, grid, time)};
  res.lhs = sup_term + energy;
  res.rhs_terms = {{"time_derivative", 2.0 * time_term},
                   {"cutoff", cutoff_term},
                   {"tail", 2.0 * tail_sup * l1}};
  res.tolerance = tolerance;
  res.provenance = provenance_of(u, s);
  finish_explicit(res);
  std::ostringstream note;
  note << "sup_term=" << sup_term << " energy=" << energy;
  res.note = note.str();
  return res;
}

std::vector<AuditResult> audit_boundedness(const SpaceTimeField& u, double s, const Point& center,
                                           double t0, double r, double delta, double sigma) {
  require(delta > 0.0 && delta <= 1.0, ErrorCode::InvalidParameter, "delta must lie in (0,1]");
  validate_sigma(sigma);
  const Grid& grid = u.grid();
  const TimeGrid& time = u.time();
  const int n = grid.dim();
  const Cylinder q1 = make_cylinder(grid, time, center, t0, r, CylinderKind::Standard, sigma, s);
  const Cylinder q2 = make_cylinder(grid, time, center, t0, 2.0 * r, CylinderKind::Standard, sigma, s);
  const Members m1 = members_of(q1, grid, time);
  const Members m2 = members_of(q2, grid, time);

  const double sup = sup_over(u, m1);
  const double tail_plus = tail_value(u, center, t0, r, s, TailPart::Positive);
  double sq = 0.0;
  for (std::size_t m : m2.steps)
    for (std::size_t j : m2.nodes) {
      const double v = std::max(u(j, m), 0.0);
      sq += v * v;
    }
  const double fat_measure = (2.0 - sigma) * q2.discrete_measure(grid, time);
  const double mean = sq * grid.cell_measure() * time.dt() / fat_measure;
  const double alpha = 1.0 + 2.0 * s / n;
  const double factor = std::pow(delta, -alpha * n / (4.0 * s));

  Provenance prov = provenance_of(u, s);
  std::vector<AuditResult> out;
  AuditResult r0;
  r0.check_id = "boundedness";
  r0.params = {{"delta", delta}, {"r", r}, {"t0", t0}, {"sigma", sigma}};
  r0.cylinders = {record_of(q1, grid, time), record_of(q2, grid, time)};
  r0.lhs = sup;
  r0.empirical_constant = ratio_or_inf(sup - delta * tail_plus, factor * std::sqrt(mean));
  const double c0 = std::isfinite(r0.empirical_constant) ? r0.empirical_constant : 0.0;
  r0.rhs_terms = {{"delta_tail", delta * tail_plus}, {"mean_term", c0 * factor * std::sqrt(mean)}};
  r0.rhs = r0.rhs_terms[0].value + r0.rhs_terms[1].value;
  r0.provenance = prov;
  std::ostringstream note;
  note << "unscaled mean term " << factor * std::sqrt(mean);
  r0.note = note.str();
  finish_existential(r0);
  out.push_back(r0);

  if (globally_nonnegative(u)) {
    AuditResult r1;
    r1.check_id = "boundedness.nonnegative";
    r1.params = {{"r", r}, {"t0", t0}, {"sigma", sigma}};
    r1.cylinders = r0.cylinders;
    r1.lhs = sup;
    r1.empirical_constant = ratio_or_inf(sup, std::sqrt(mean));
    const double c = std::isfinite(r1.empirical_constant) ? r1.empirical_constant : 0.0;
    r1.rhs_terms = {{"mean_term", c * std::sqrt(mean)}};
    r1.rhs = r1.rhs_terms[0].value;
    r1.provenance = prov;
    finish_existential(r1);
    out.push_back(r1);
  } else {
    out.push_back(skipped("boundedness.nonnegative", "field takes negative values", prov));
  }
  return out;
}

std::vector<AuditResult> audit_harnack_suite(const SpaceTimeField& u, double s, const Point& center,
                                             double t0, double r, double R,
                                             const HarnackOptions& opt) {
  validate_sigma(opt.sigma);
  require(r > 0.0 && r < R, ErrorCode::InvalidRadius, "Harnack radii need 0 < r < R");
  const Grid& grid = u.grid();
  const TimeGrid& time = u.time();
  const Provenance prov = provenance_of(u, s);

  const Cylinder qR = make_cylinder(grid, time, center, t0, R, CylinderKind::Standard, opt.sigma, s);
  const Cylinder qr = make_cylinder(grid, time, center, t0, r, CylinderKind::Standard, opt.sigma, s);
  const Cylinder qp = make_cylinder(grid, time, center, t0, r, CylinderKind::Plus, opt.sigma, s);
  const Cylinder qm = make_cylinder(grid, time, center, t0, r, CylinderKind::Minus, opt.sigma, s);
  const Members mR = members_of(qR, grid, time);

  std::vector<AuditResult> out;
  auto all_skipped = [&](const std::string& why) {
    out.push_back(skipped("harnack.tail_relation", why, prov));
    for (double p : opt.exponents) {
      AuditResult r0 = skipped("harnack.weak", why, prov);
      r0.params = {{"p", p}};
      out.push_back(r0);
    }
    out.push_back(skipped("harnack.full", why, prov));
    out.push_back(skipped("harnack.tail_free", why, prov));
    return out;
  };
  if (inf_over(u, mR) < 0.0) return all_skipped("u is negative inside Q_R");

  const Members mr = members_of(qr, grid, time);
  const Members mp = members_of(qp, grid, time);
  const Members mm = members_of(qm, grid, time);
  const double ratio = std::pow(r / R, 2.0 * s);
  const double tail_r_minus = tail_value(u, center, t0, r, s, TailPart::Negative);
  const double tail_r_plus = tail_value(u, center, t0, r, s, TailPart::Positive);
  const double tail_R_minus = tail_value(u, center, t0, R, s, TailPart::Negative);
  const double sup_minus = sup_over(u, mm);
  const double inf_plus_raw = inf_over(u, mp);
  const std::vector<std::pair<std::string, double>> radii{{"r", r}, {"R", R}, {"t0", t0}, {"sigma", opt.sigma}};
  const std::vector<CylinderRecord> cyls{record_of(qR, grid, time), record_of(qr, grid, time),
                                         record_of(qp, grid, time), record_of(qm, grid, time)};

  // inf + machine-epsilon floor (relative to the sup so the quotients stay scale free)
  bool degenerate = false;
  double inf_plus = inf_plus_raw;
  if (inf_plus == 0.0 && sup_minus > 0.0) {
    inf_plus = DBL_EPSILON * sup_minus;
    degenerate = true;
  }

  {
    AuditResult a;
    a.check_id = "harnack.tail_relation";
    a.params = radii;
    a.cylinders = cyls;
    a.lhs = tail_r_plus;
    a.rhs_terms = {{"sup_Qr", sup_over(u, mr)}, {"scaled_tail_R_minus", ratio * tail_R_minus}};
    a.rhs = a.rhs_terms[0].value + a.rhs_terms[1].value;
    a.empirical_constant = ratio_or_inf(a.lhs, a.rhs);
    a.bound = opt.constant_bound;
    a.provenance = prov;
    finish_existential(a);
    out.push_back(a);
  }

  for (double p : opt.exponents) {
    require(p > 0.0 && p < 1.0, ErrorCode::InvalidParameter, "weak Harnack exponent must lie in (0,1)");
    double acc = 0.0;
    for (std::size_t m : mp.steps)
      for (std::size_t j : mp.nodes) acc += std::pow(std::max(u(j, m), 0.0), p);
    const double mean = acc / static_cast<double>(mp.steps.size() * mp.nodes.size());
    AuditResult a;
    a.check_id = "harnack.weak";
    a.params = radii;
    a.params.insert(a.params.begin(), {"p", p});
    a.cylinders = cyls;
    a.lhs = std::pow(0.5 * mean, 1.0 / p);
    a.rhs_terms = {{"inf_Qplus", inf_plus}, {"scaled_tail_r_minus", (4.0 / 3.0) * ratio * tail_r_minus}};
    a.tolerance = opt.tolerance;
    a.degenerate = degenerate;
    a.provenance = prov;
    finish_explicit(a);
    out.push_back(a);
  }

  if (5.0 * r < R) {
    AuditResult a;
    a.check_id = "harnack.full";
    a.params = radii;
    a.cylinders = cyls;
    a.lhs = sup_minus;
    double den = inf_plus_raw + ratio * tail_r_minus;
    if (den == 0.0 && sup_minus > 0.0) {
      den = DBL_EPSILON * sup_minus;
      a.degenerate = true;
    }
    a.empirical_constant = ratio_or_inf(sup_minus, den);
    a.rhs_terms = {{"c_inf_Qplus", a.empirical_constant * inf_plus_raw},
                   {"c_scaled_tail_r_minus", a.empirical_constant * ratio * tail_r_minus}};
    a.rhs = a.rhs_terms[0].value + a.rhs_terms[1].value;
    a.bound = opt.constant_bound;
    a.provenance = prov;
    finish_existential(a);
    out.push_back(a);
  } else {
    out.push_back(skipped("harnack.full", "needs 5r < R", prov));
  }

  if (!(5.0 * r < R)) {
    out.push_back(skipped("harnack.tail_free", "needs 5r < R", prov));
  } else if (!globally_nonnegative(u)) {
    out.push_back(skipped("harnack.tail_free", "field is not globally nonnegative", prov));
  } else {
    AuditResult a;
    a.check_id = "harnack.tail_free";
    a.params = radii;
    a.cylinders = cyls;
    a.lhs = sup_minus;
    a.empirical_constant = ratio_or_inf(sup_minus, inf_plus_raw);
    a.degenerate = degenerate;
    a.rhs_terms = {{"c_inf_Qplus", std::isfinite(a.empirical_constant) ? a.empirical_constant * inf_plus_raw : 0.0}};
    a.rhs = a.rhs_terms[0].value;
    a.bound = opt.constant_bound;
    a.provenance = prov;
    finish_existential(a);
    out.push_back(a);
  }

  std::stable_sort(out.begin(), out.end(),
                   [](const AuditResult& x, const AuditResult& y) { return x.check_id < y.check_id; });
  return out;
}

const std::vector<std::string>& audit_check_ids() {
  static const std::vector<std::string> ids{
      "order.sign",         "order.comparison",     "order.linf_bound",      "caccioppoli",
      "boundedness",        "boundedness.nonnegative", "harnack.tail_relation", "harnack.weak",
      "harnack.full",       "harnack.tail_free"};
  return ids;
}

namespace {

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

nlohmann::json to_json(const AuditResult& r) {
  nlohmann::json j;
  j["check_id"] = r.check_id;
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : r.params) params[k] = number(v);
  j["params"] = params;
  nlohmann::json cyls = nlohmann::json::array();
  for (const auto& c : r.cylinders)
    cyls.push_back({{"kind", c.kind},
                    {"center", {c.center[0], c.center[1]}},
                    {"t0", c.t0},
                    {"r", c.r},
                    {"nodes", c.nodes},
                    {"steps", c.steps}});
  j["cylinders"] = cyls;
  j["lhs"] = number(r.lhs);
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : r.rhs_terms) terms.push_back({{"name", t.name}, {"value", number(t.value)}});
  j["rhs_terms"] = terms;
  j["rhs"] = number(r.rhs);
  j["empirical_constant"] = number(r.empirical_constant);
  j["bound"] = number(r.bound);
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  j["skipped"] = r.skipped;
  j["degenerate"] = r.degenerate;
  j["note"] = r.note;
  j["provenance"] = {{"scheme", r.provenance.scheme},
                     {"dim", r.provenance.dim},
                     {"s", r.provenance.s},
                     {"h", r.provenance.h},
                     {"dt", r.provenance.dt}};
  return j;
}

}  // namespace

std::string audits_to_json(const std::vector<AuditResult>& results, int indent) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : results) arr.push_back(to_json(r));
  return arr.dump(indent);
}

void write_audits_csv(std::ostream& os, const std::vector<AuditResult>& results) {
  // shortest round-trip form keeps the file stable and readable
  const auto num = [](double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
  };
  os << "check_id,params,scheme,h,dt,lhs,rhs,empirical_constant,pass,skipped,degenerate\n";
  for (const auto& r : results) {
    std::string params;
    for (const auto& [k, v] : r.params) {
      if (!params.empty()) params += ';';
      params += k + '=' + num(v);
    }
    os << r.check_id << ',' << params << ',' << r.provenance.scheme << ',' << num(r.provenance.h) << ','
       << num(r.provenance.dt) << ',' << num(r.lhs) << ',' << num(r.rhs) << ','
       << num(r.empirical_constant) << ',' << (r.pass ? 1 : 0) << ',' << (r.skipped ? 1 : 0) << ','
       << (r.degenerate ? 1 : 0) << '\n';
  }
}

}  // namespace nlheat
