#include "nlheat/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "json_locator.hpp"
#include "nlheat/audit.hpp"
#include "nlheat/covering.hpp"
#include "nlheat/error.hpp"
#include "nlheat/evolution.hpp"
#include "nlheat/iterlemmas.hpp"
#include "nlheat/kernel.hpp"
#include "nlheat/lattice.hpp"
#include "nlheat/nonlocal_op.hpp"
#include "nlheat/parallel.hpp"
#include "nlheat/presets.hpp"
#include "nlheat/spectral.hpp"
#include "nlheat/tail.hpp"

namespace nlheat {

using nlohmann::json;

namespace {

// ---- configuration model ---------------------------------------------------

struct DataSpec {
  PresetSpec g;
  std::optional<PresetSpec> f;
  std::optional<PresetSpec> h;
  std::string pointer;
};

struct AuditSpec {
  std::string check;
  std::string pointer;
  Point center{0.0, 0.0};
  double t0 = 0.0;
  double r = 0.0;
  double R = 0.0;
  double level = 0.0;
  LevelSide side = LevelSide::Above;
  double tolerance = 0.1;
  std::vector<double> deltas{0.25, 0.5, 1.0};
  std::vector<double> exponents{0.25, 0.5, 0.75};
  double bound = std::numeric_limits<double>::infinity();
  TailPart part = TailPart::Absolute;
  std::optional<double> expected;
  std::optional<DataSpec> upper;
  // covering
  int cov_dim = 2;
  int nodes_across = 8;
  int steps = 8;
  double cov_s = 0.5;
  int trials = 200;
  double density = 0.2;
  std::vector<double> gammas{0.05, 0.1, 0.3};
  double rho_max = 1.0;
  std::size_t scales = 16;
  // iteration lemmas
  int draws = 100;
  std::size_t length = 16;
};

struct KernelSpec {
  std::string type = "fractional";
  double s = 0.5;
  double lambda = 1.0;
  double Lambda = 1.0;
  std::string table;
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 0;
  KernelSpec kernel;
  Domain domain;
  double h = 0.0;
  double R_inf = 0.0;
  double dt = 0.0;
  int levels = 1;
  double T = 0.0;
  std::string scheme = "monotone";
  std::optional<std::size_t> modes;
  double sigma = kDefaultSigma;
  DataSpec data;
  std::vector<AuditSpec> audits;
  bool write_fields = true;
  json resolved;
};

[[noreturn]] void config_error(const std::string& msg) { fail(ErrorCode::ConfigError, msg); }

class Reader {
public:
  Reader(std::string label, const std::string& text, std::filesystem::path base)
      : label_(std::move(label)), locator_(text), base_(std::move(base)) {}

  [[noreturn]] void error(const std::string& pointer, const std::string& msg) const {
    config_error(label_ + ": " + locator_.where(pointer) + ": " + (pointer.empty() ? "/" : pointer) + ": " + msg);
  }

  void allow(const json& obj, const std::string& ptr, std::initializer_list<const char*> keys) const {
    if (!obj.is_object()) error(ptr, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      const bool known = std::any_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; });
      if (!known) error(ptr + "/" + detail::escape_pointer_token(it.key()), "unknown key '" + it.key() + "'");
    }
  }

  double number(const json& obj, const std::string& ptr, const char* key, std::optional<double> def) const {
    const std::string p = ptr + "/" + key;
    if (!obj.contains(key)) {
      if (!def) error(ptr, std::string("missing required number '") + key + "'");
      return *def;
    }
    const json& v = obj.at(key);
    if (!v.is_number()) error(p, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) error(p, "expected a finite number");
    return x;
  }

  double positive(const json& obj, const std::string& ptr, const char* key, std::optional<double> def) const {
    const double x = number(obj, ptr, key, def);
    if (!(x > 0.0)) error(ptr + "/" + key, std::string(key) + " must be positive");
    return x;
  }

  long integer(const json& obj, const std::string& ptr, const char* key, long def, long lo, long hi) const {
    if (!obj.contains(key)) return def;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) error(ptr + "/" + key, "expected an integer");
    const long x = v.get<long>();
    if (x < lo || x > hi)
      error(ptr + "/" + key, std::string(key) + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return x;
  }

  std::string string(const json& obj, const std::string& ptr, const char* key, std::optional<std::string> def) const {
    if (!obj.contains(key)) {
      if (!def) error(ptr, std::string("missing required string '") + key + "'");
      return *def;
    }
    if (!obj.at(key).is_string()) error(ptr + "/" + key, "expected a string");
    return obj.at(key).get<std::string>();
  }

  std::vector<double> numbers(const json& obj, const std::string& ptr, const char* key,
                              std::optional<std::vector<double>> def) const {
    const std::string p = ptr + "/" + key;
    if (!obj.contains(key)) {
      if (!def) error(ptr, std::string("missing required array '") + key + "'");
      return *def;
    }
    const json& v = obj.at(key);
    if (!v.is_array()) error(p, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) error(p + "/" + std::to_string(i), "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  Point point(const json& obj, const std::string& ptr, const char* key, int dim) const {
    const auto v = numbers(obj, ptr, key, std::nullopt);
    if (static_cast<int>(v.size()) != dim)
      error(ptr + "/" + key, "expected " + std::to_string(dim) + " coordinate(s)");
    Point p{0.0, 0.0};
    for (int k = 0; k < dim; ++k) p[k] = v[k];
    return p;
  }

  std::filesystem::path resolve_path(const std::string& p) const {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base_ / path;
  }

  const detail::JsonLocator& locator() const { return locator_; }

private:
  std::string label_;
  detail::JsonLocator locator_;
  std::filesystem::path base_;
};

PresetSpec read_preset(const Reader& rd, const json& obj, const std::string& ptr, int dim, json& resolved) {
  if (!obj.is_object()) rd.error(ptr, "expected a data preset object");
  PresetSpec spec;
  spec.name = rd.string(obj, ptr, "preset", std::nullopt);
  resolved = json::object();
  resolved["preset"] = spec.name;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const std::string key = it.key();
    const std::string p = ptr + "/" + detail::escape_pointer_token(key);
    if (key == "preset") continue;
    if (key == "center") {
      spec.center = rd.point(obj, ptr, "center", dim);
      resolved["center"] = it.value();
    } else if (key == "path") {
      spec.path = rd.resolve_path(rd.string(obj, ptr, "path", std::nullopt)).string();
      resolved["path"] = spec.path;
    } else {
      if (!it.value().is_number()) rd.error(p, "expected a number");
      spec.params[key] = it.value().get<double>();
      resolved[key] = it.value();
    }
  }
  try {
    validate_preset(spec, dim);
  } catch (const Error& e) {
    rd.error(ptr, e.what());
  }
  return spec;
}

DataSpec read_data(const Reader& rd, const json& obj, const std::string& ptr, int dim, json& resolved) {
  rd.allow(obj, ptr, {"g", "f", "h"});
  DataSpec d;
  d.pointer = ptr;
  resolved = json::object();
  if (!obj.contains("g")) rd.error(ptr, "missing required data 'g'");
  d.g = read_preset(rd, obj.at("g"), ptr + "/g", dim, resolved["g"]);
  if (obj.contains("f") && !obj.at("f").is_null()) d.f = read_preset(rd, obj.at("f"), ptr + "/f", dim, resolved["f"]);
  else resolved["f"] = nullptr;
  if (obj.contains("h") && !obj.at("h").is_null()) d.h = read_preset(rd, obj.at("h"), ptr + "/h", dim, resolved["h"]);
  else resolved["h"] = nullptr;
  return d;
}

void check_sigma(const Reader& rd, const std::string& ptr, double sigma) {
  try {
    validate_sigma(sigma);
  } catch (const Error& e) {
    rd.error(ptr, e.what());
  }
}

AuditSpec read_audit(const Reader& rd, const json& obj, const std::string& ptr, const Scenario& sc, json& res) {
  const int dim = sc.domain.dim;
  AuditSpec a;
  a.pointer = ptr;
  a.check = rd.string(obj, ptr, "check", std::nullopt);
  res = json::object();
  res["check"] = a.check;
  auto cylinder_keys = [&](bool needs_R) {
    a.center = rd.point(obj, ptr, "center", dim);
    a.t0 = rd.number(obj, ptr, "t0", 0.0);
    a.r = rd.positive(obj, ptr, "r", std::nullopt);
    res["center"] = obj.at("center");
    res["t0"] = a.t0;
    res["r"] = a.r;
    if (needs_R) {
      a.R = rd.positive(obj, ptr, "R", std::nullopt);
      if (!(a.r < a.R)) rd.error(ptr + "/R", "R must exceed r");
      res["R"] = a.R;
    }
  };

  if (a.check == "order") {
    rd.allow(obj, ptr, {"check", "upper"});
    if (obj.contains("upper")) {
      json u;
      a.upper = read_data(rd, obj.at("upper"), ptr + "/upper", dim, u);
      res["upper"] = u;
    }
  } else if (a.check == "caccioppoli") {
    rd.allow(obj, ptr, {"check", "center", "t0", "r", "level", "side", "tolerance"});
    cylinder_keys(false);
    a.level = rd.number(obj, ptr, "level", 0.0);
    const std::string side = rd.string(obj, ptr, "side", "+");
    if (side != "+" && side != "-") rd.error(ptr + "/side", "side must be \"+\" or \"-\"");
    a.side = side == "+" ? LevelSide::Above : LevelSide::Below;
    a.tolerance = rd.number(obj, ptr, "tolerance", 0.1);
    res["level"] = a.level;
    res["side"] = side;
    res["tolerance"] = a.tolerance;
  } else if (a.check == "boundedness") {
    rd.allow(obj, ptr, {"check", "center", "t0", "r", "deltas"});
    cylinder_keys(false);
    a.deltas = rd.numbers(obj, ptr, "deltas", std::vector<double>{0.25, 0.5, 1.0});
    for (std::size_t i = 0; i < a.deltas.size(); ++i)
      if (!(a.deltas[i] > 0.0 && a.deltas[i] <= 1.0)) rd.error(ptr + "/deltas/" + std::to_string(i), "delta must lie in (0,1]");
    res["deltas"] = a.deltas;
  } else if (a.check == "harnack") {
    rd.allow(obj, ptr, {"check", "center", "t0", "r", "R", "exponents", "tolerance", "bound"});
    cylinder_keys(true);
    a.exponents = rd.numbers(obj, ptr, "exponents", std::vector<double>{0.25, 0.5, 0.75});
    for (std::size_t i = 0; i < a.exponents.size(); ++i)
      if (!(a.exponents[i] > 0.0 && a.exponents[i] < 1.0))
        rd.error(ptr + "/exponents/" + std::to_string(i), "exponent must lie in (0,1)");
    a.tolerance = rd.number(obj, ptr, "tolerance", 0.1);
    if (obj.contains("bound")) a.bound = rd.positive(obj, ptr, "bound", std::nullopt);
    res["exponents"] = a.exponents;
    res["tolerance"] = a.tolerance;
    res["bound"] = std::isfinite(a.bound) ? json(a.bound) : json(nullptr);
  } else if (a.check == "tail") {
    rd.allow(obj, ptr, {"check", "center", "t0", "r", "part", "expected", "tolerance"});
    cylinder_keys(false);
    const std::string part = rd.string(obj, ptr, "part", "absolute");
    if (part == "absolute") a.part = TailPart::Absolute;
    else if (part == "positive") a.part = TailPart::Positive;
    else if (part == "negative") a.part = TailPart::Negative;
    else rd.error(ptr + "/part", "part must be absolute, positive or negative");
    if (obj.contains("expected")) a.expected = rd.number(obj, ptr, "expected", std::nullopt);
    a.tolerance = rd.number(obj, ptr, "tolerance", 1e-3);
    res["part"] = part;
    res["expected"] = a.expected ? json(*a.expected) : json(nullptr);
    res["tolerance"] = a.tolerance;
  } else if (a.check == "covering") {
    rd.allow(obj, ptr, {"check", "dim", "nodes_across", "steps", "r", "s", "sigma", "trials", "density", "gammas",
                        "rho_max", "scales"});
    a.cov_dim = static_cast<int>(rd.integer(obj, ptr, "dim", 2, 1, 2));
    a.nodes_across = static_cast<int>(rd.integer(obj, ptr, "nodes_across", 8, 1, 256));
    a.steps = static_cast<int>(rd.integer(obj, ptr, "steps", 8, 1, 256));
    a.r = rd.positive(obj, ptr, "r", 1.0);
    a.cov_s = rd.number(obj, ptr, "s", sc.kernel.s);
    if (!(a.cov_s > 0.0 && a.cov_s < 1.0)) rd.error(ptr + "/s", "s must lie in (0,1)");
    a.R = rd.number(obj, ptr, "sigma", sc.sigma);  // sigma stored in R slot
    check_sigma(rd, ptr + "/sigma", a.R);
    a.trials = static_cast<int>(rd.integer(obj, ptr, "trials", 200, 1, 100000));
    a.density = rd.number(obj, ptr, "density", 0.2);
    if (!(a.density >= 0.0 && a.density <= 1.0)) rd.error(ptr + "/density", "density must lie in [0,1]");
    a.gammas = rd.numbers(obj, ptr, "gammas", std::vector<double>{0.05, 0.1, 0.3});
    for (std::size_t i = 0; i < a.gammas.size(); ++i)
      if (!(a.gammas[i] > 0.0 && a.gammas[i] < 1.0)) rd.error(ptr + "/gammas/" + std::to_string(i), "gamma must lie in (0,1)");
    a.rho_max = rd.positive(obj, ptr, "rho_max", a.r);
    a.scales = static_cast<std::size_t>(rd.integer(obj, ptr, "scales", 16, 16, 256));
    res["dim"] = a.cov_dim;
    res["nodes_across"] = a.nodes_across;
    res["steps"] = a.steps;
    res["r"] = a.r;
    res["s"] = a.cov_s;
    res["sigma"] = a.R;
    res["trials"] = a.trials;
    res["density"] = a.density;
    res["gammas"] = a.gammas;
    res["rho_max"] = a.rho_max;
    res["scales"] = a.scales;
  } else if (a.check == "iterlemmas") {
    rd.allow(obj, ptr, {"check", "draws", "length"});
    a.draws = static_cast<int>(rd.integer(obj, ptr, "draws", 100, 1, 100000));
    a.length = static_cast<std::size_t>(rd.integer(obj, ptr, "length", 16, 2, 4096));
    res["draws"] = a.draws;
    res["length"] = a.length;
  } else {
    rd.error(ptr + "/check", "unknown check '" + a.check + "' (see list-checks)");
  }
  return a;
}

Scenario read_scenario(const Reader& rd, const json& root) {
  rd.allow(root, "", {"name", "seed", "kernel", "domain", "mesh", "T", "data", "scheme", "modes", "sigma", "audits", "output"});
  Scenario sc;
  json& res = sc.resolved;
  res = json::object();
  sc.name = rd.string(root, "", "name", "scenario");
  res["name"] = sc.name;
  if (root.contains("seed")) {
    if (!root.at("seed").is_number_unsigned()) rd.error("/seed", "seed must be a nonnegative integer");
    sc.seed = root.at("seed").get<std::uint64_t>();
  }

  if (!root.contains("domain")) rd.error("", "missing required object 'domain'");
  const json& dom = root.at("domain");
  rd.allow(dom, "/domain", {"lo", "hi"});
  const auto lo = rd.numbers(dom, "/domain", "lo", std::nullopt);
  const auto hi = rd.numbers(dom, "/domain", "hi", std::nullopt);
  if (lo.empty() || lo.size() > 2) rd.error("/domain/lo", "domain must have 1 or 2 axes");
  if (hi.size() != lo.size()) rd.error("/domain/hi", "lo and hi must have the same length");
  for (std::size_t k = 0; k < lo.size(); ++k)
    if (!(hi[k] > lo[k])) rd.error("/domain/hi/" + std::to_string(k), "hi must exceed lo on every axis");
  sc.domain = lo.size() == 1 ? Domain::interval(lo[0], hi[0]) : Domain::rectangle({lo[0], lo[1]}, {hi[0], hi[1]});
  res["domain"] = {{"lo", lo}, {"hi", hi}};
  const int dim = sc.domain.dim;

  const json kern = root.contains("kernel") ? root.at("kernel") : json::object();
  rd.allow(kern, "/kernel", {"type", "s", "lambda", "Lambda", "table"});
  sc.kernel.type = rd.string(kern, "/kernel", "type", "fractional");
  sc.kernel.s = rd.number(kern, "/kernel", "s", 0.5);
  if (!(sc.kernel.s > 0.0 && sc.kernel.s < 1.0)) rd.error("/kernel/s", "s must lie in (0,1)");
  res["kernel"] = {{"type", sc.kernel.type}, {"s", sc.kernel.s}};
  if (sc.kernel.type == "custom") {
    sc.kernel.lambda = rd.positive(kern, "/kernel", "lambda", std::nullopt);
    sc.kernel.Lambda = rd.positive(kern, "/kernel", "Lambda", std::nullopt);
    if (sc.kernel.Lambda < sc.kernel.lambda) rd.error("/kernel/Lambda", "Lambda must be at least lambda");
    sc.kernel.table = rd.resolve_path(rd.string(kern, "/kernel", "table", std::nullopt)).string();
    res["kernel"]["lambda"] = sc.kernel.lambda;
    res["kernel"]["Lambda"] = sc.kernel.Lambda;
    res["kernel"]["table"] = sc.kernel.table;
  } else if (sc.kernel.type != "fractional") {
    rd.error("/kernel/type", "kernel type must be fractional or custom");
  }

  if (!root.contains("mesh")) rd.error("", "missing required object 'mesh'");
  const json& mesh = root.at("mesh");
  rd.allow(mesh, "/mesh", {"h", "R_inf", "dt", "levels"});
  sc.h = rd.positive(mesh, "/mesh", "h", std::nullopt);
  sc.R_inf = rd.positive(mesh, "/mesh", "R_inf", 2.0 * sc.domain.diameter());
  if (sc.R_inf < 2.0 * sc.domain.diameter())
    rd.error("/mesh/R_inf", "R_inf must be at least twice the domain diameter");
  sc.dt = rd.positive(mesh, "/mesh", "dt", std::pow(sc.h, 2.0 * sc.kernel.s));
  sc.levels = static_cast<int>(rd.integer(mesh, "/mesh", "levels", 1, 1, 4));
  res["mesh"] = {{"h", sc.h}, {"R_inf", sc.R_inf}, {"dt", sc.dt}, {"levels", sc.levels}};

  sc.T = rd.positive(root, "", "T", std::nullopt);
  res["T"] = sc.T;
  sc.scheme = rd.string(root, "", "scheme", "monotone");
  if (sc.scheme != "monotone" && sc.scheme != "galerkin" && sc.scheme != "both")
    rd.error("/scheme", "scheme must be monotone, galerkin or both");
  res["scheme"] = sc.scheme;
  if (root.contains("modes")) {
    sc.modes = static_cast<std::size_t>(rd.integer(root, "", "modes", 1, 1, 1000000));
    res["modes"] = *sc.modes;
  } else {
    res["modes"] = nullptr;
  }
  sc.sigma = rd.number(root, "", "sigma", kDefaultSigma);
  check_sigma(rd, "/sigma", sc.sigma);
  res["sigma"] = sc.sigma;

  if (!root.contains("data")) rd.error("", "missing required object 'data'");
  sc.data = read_data(rd, root.at("data"), "/data", dim, res["data"]);

  res["audits"] = json::array();
  if (root.contains("audits")) {
    const json& list = root.at("audits");
    if (!list.is_array()) rd.error("/audits", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      json one;
      sc.audits.push_back(read_audit(rd, list[i], "/audits/" + std::to_string(i), sc, one));
      res["audits"].push_back(one);
    }
  }

  const json out = root.contains("output") ? root.at("output") : json::object();
  rd.allow(out, "/output", {"fields"});
  if (out.contains("fields")) {
    if (!out.at("fields").is_boolean()) rd.error("/output/fields", "expected true or false");
    sc.write_fields = out.at("fields").get<bool>();
  }
  res["output"] = {{"fields", sc.write_fields}};
  return sc;
}

// ---- execution ---------------------------------------------------------------

Kernel build_kernel(const Scenario& sc, double h) {
  const int n = sc.domain.dim;
  if (sc.kernel.type == "fractional") return make_fractional_kernel(n, sc.kernel.s);
  std::ifstream in(sc.kernel.table);
  require(static_cast<bool>(in), ErrorCode::IoError, "cannot open kernel table '" + sc.kernel.table + "'");
  auto table = read_radial_table(in);
  return make_custom_kernel(n, sc.kernel.s, sc.kernel.lambda, sc.kernel.Lambda,
                            tabulated_profile(std::move(table), n, sc.kernel.s), h, sc.R_inf);
}

// Geometry of every audit cylinder at the coarsest level, anchored to its entry.
void prevalidate(const Reader& rd, const Scenario& sc) {
  std::shared_ptr<const Grid> grid;
  try {
    grid = std::make_shared<const Grid>(build_grid(sc.domain, sc.h, sc.R_inf));
  } catch (const Error& e) {
    rd.error("/mesh/h", e.what());
  }
  const TimeGrid time(sc.T, sc.dt);
  const double s = sc.kernel.s;
  for (const auto& a : sc.audits) {
    try {
      if (a.check == "caccioppoli") {
        make_cylinder(*grid, time, a.center, a.t0, 2.0 * a.r, CylinderKind::Standard, sc.sigma, s);
      } else if (a.check == "boundedness") {
        make_cylinder(*grid, time, a.center, a.t0, 2.0 * a.r, CylinderKind::Standard, sc.sigma, s);
      } else if (a.check == "harnack") {
        make_cylinder(*grid, time, a.center, a.t0, a.R, CylinderKind::Standard, sc.sigma, s);
      } else if (a.check == "tail") {
        make_cylinder(*grid, time, a.center, a.t0, a.r, CylinderKind::Standard, sc.sigma, s);
      }
    } catch (const Error& e) {
      rd.error(a.pointer, e.what());
    }
  }
}

json number_json(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

bool field_is_zero(const SpaceTimeField& g) {
  if (g.values().cwiseAbs().maxCoeff() != 0.0) return false;
  for (std::size_t m = 0; m < g.time().size(); ++m)
    if (!g.exterior(m).is_zero()) return false;
  return true;
}

struct LevelContext {
  std::shared_ptr<const Grid> grid;
  TimeGrid time;
  std::shared_ptr<const NonlocalOperator> op;
  OperatorMatrix mat;
  std::optional<SpectralBasis> basis;
};

SpaceTimeField build_data(const PresetSpec& spec, const LevelContext& lc) {
  return make_preset_field(spec, lc.grid, lc.time, lc.basis ? &*lc.basis : nullptr);
}

ProblemData build_problem(const DataSpec& d, const LevelContext& lc) {
  SpaceTimeField g = build_data(d.g, lc);
  std::optional<SpaceTimeField> f;
  if (d.f) f = build_data(*d.f, lc);
  Eigen::VectorXd h = d.h ? Eigen::VectorXd(build_data(*d.h, lc).interior(0)) : Eigen::VectorXd(g.interior(0));
  return ProblemData{std::move(g), std::move(f), std::move(h)};
}

bool needs_basis(const Scenario& sc) {
  if (sc.scheme != "monotone") return true;
  auto uses = [](const DataSpec& d) {
    return preset_needs_basis(d.g) || (d.f && preset_needs_basis(*d.f)) || (d.h && preset_needs_basis(*d.h));
  };
  if (uses(sc.data)) return true;
  for (const auto& a : sc.audits)
    if (a.upper && uses(*a.upper)) return true;
  return false;
}

AuditResult covering_audit(const AuditSpec& a, std::uint64_t seed) {
  const auto host = make_lattice_host(a.cov_dim, a.nodes_across, a.steps, a.r, a.R, a.cov_s);
  std::mt19937_64 rng(seed);
  std::size_t violations = 0, growth = 0, full = 0, runs = 0;
  for (int trial = 0; trial < a.trials; ++trial) {
    const ParabolicPointSet E = random_set(host, a.density, rng);
    for (double gamma : a.gammas) {
      ++runs;
      try {
        const CoveringReport rep = covering_dichotomy(E, gamma, a.rho_max, a.scales);
        growth += rep.growth_branch;
        full += rep.full_branch;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::DichotomyViolation) throw;
        ++violations;
      }
    }
  }
  AuditResult r;
  r.check_id = "covering.dichotomy";
  r.params = {{"trials", static_cast<double>(a.trials)}, {"density", a.density}, {"rho_max", a.rho_max},
              {"scales", static_cast<double>(a.scales)}};
  r.lhs = static_cast<double>(violations);
  r.rhs_terms = {{"allowed_violations", 0.0}};
  r.empirical_constant = r.lhs;
  r.pass = violations == 0;
  std::ostringstream note;
  note << runs << " runs, growth branch " << growth << ", full branch " << full;
  r.note = note.str();
  r.provenance.scheme = "lattice_host";
  r.provenance.dim = a.cov_dim;
  r.provenance.s = a.cov_s;
  r.provenance.h = host->h();
  r.provenance.dt = host->dt();
  return r;
}

std::vector<AuditResult> iterlemma_audits(const AuditSpec& a, std::uint64_t seed) {
  std::vector<AuditResult> out;
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::size_t bad = 0;
  double worst = 0.0;
  for (int i = 0; i < a.draws; ++i) {
    const DecayInstance inst = random_decay_instance(rng, a.length);
    const DecayReport rep = geometric_decay_check(inst.N, inst.d0, inst.e0, inst.eps);
    if (!rep.smallness_met || !rep.conclusion_holds) ++bad;
    worst = std::max(worst, rep.worst_conclusion_ratio);
  }
  AuditResult d;
  d.check_id = "iterlemmas.decay";
  d.params = {{"draws", static_cast<double>(a.draws)}, {"length", static_cast<double>(a.length)}};
  d.lhs = worst;
  d.rhs_terms = {{"unit", 1.0}};
  d.rhs = 1.0;
  d.empirical_constant = worst;
  d.pass = bad == 0;
  d.note = std::to_string(bad) + " failing draws";
  out.push_back(d);

  // f ≡ F at the fixed point, f ≡ 0, and f(t) = (1 - t)^{-1} with c1 = 1.
  struct Example {
    std::function<double(double)> f;
    double c1, c2, theta, eps, hi;
  };
  const double F = (1.0 * std::pow(0.5, -1.0) + 0.5) / (1.0 - 0.5);
  const std::vector<Example> examples{
      {[F](double) { return F; }, 1.0, 0.5, 1.0, 0.5, 0.5},
      {[](double) { return 0.0; }, 1.0, 1.0, 1.0, 0.0, 1.0},
      {[](double t) { return 1.0 / (1.0 - t); }, 1.0, 0.0, 1.0, 0.5, 0.99},
  };
  double worst_ratio = 0.0;
  std::size_t failing = 0;
  for (const auto& ex : examples) {
    const InterpolationCheck chk = verify_interpolation(ex.f, 0.0, ex.hi, 101, ex.c1, ex.c2, ex.theta, ex.eps);
    if (chk.hypothesis_holds && !chk.conclusion_holds) ++failing;
    worst_ratio = std::max(worst_ratio, chk.worst_conclusion_ratio);
  }
  AuditResult c;
  c.check_id = "iterlemmas.interpolation";
  c.params = {{"examples", static_cast<double>(examples.size())}};
  c.lhs = worst_ratio;
  c.rhs_terms = {{"unit", 1.0}};
  c.rhs = 1.0;
  c.empirical_constant = worst_ratio;
  c.pass = failing == 0;
  c.note = std::to_string(failing) + " failing examples";
  out.push_back(c);
  return out;
}

json residual_json(const ResidualStats& r) {
  return {{"max_abs", r.max_abs}, {"rms", r.rms}, {"samples", r.samples}, {"exact_derivative", r.exact_derivative}};
}

void tag(std::vector<AuditResult>& results, const std::string& scheme, int level) {
  for (auto& r : results) {
    if (r.provenance.scheme.empty()) r.provenance.scheme = scheme;
    r.params.insert(r.params.begin(), {"level", static_cast<double>(level)});
  }
}

struct RunState {
  json levels = json::array();
  std::vector<AuditResult> audits;
  std::optional<SpaceTimeField> fields;
};

void run_level(const Scenario& sc, int level, RunState& st, std::string& context) {
  const double s = sc.kernel.s;
  const double h = sc.h / std::pow(2.0, level);
  const double dt = sc.dt * std::pow(2.0, -2.0 * s * level);

  LevelContext lc;
  context = "/mesh";
  lc.grid = std::make_shared<const Grid>(build_grid(sc.domain, h, sc.R_inf));
  lc.time = TimeGrid(sc.T, dt);
  context = "/kernel";
  lc.op = make_operator(lc.grid, build_kernel(sc, h));
  lc.mat = assemble(lc.op);
  if (needs_basis(sc)) {
    const std::size_t k = std::min(sc.modes.value_or(lc.grid->num_interior()), lc.grid->num_interior());
    lc.basis = solve_eigenproblem(lc.mat, k);
  }

  context = "/data";
  const ProblemData data = build_problem(sc.data, lc);
  const SpaceTimeField* f = data.f ? &*data.f : nullptr;

  std::vector<std::pair<std::string, SpaceTimeField>> solutions;
  if (sc.scheme != "galerkin") solutions.emplace_back("monotone", monotone_solve(lc.mat, data.g, f, data.h));
  if (sc.scheme != "monotone") solutions.emplace_back("galerkin", lift_and_solve(*lc.op, *lc.basis, data.g, f, data.h));
  if (level == 0 && sc.write_fields) st.fields = solutions.front().second;

  json lv;
  lv["level"] = level;
  lv["h"] = lc.grid->h();
  lv["dt"] = lc.time.dt();
  lv["R_inf"] = lc.grid->R_inf();
  lv["interior_nodes"] = lc.grid->num_interior();
  lv["collar_nodes"] = lc.grid->num_collar();
  lv["time_steps"] = lc.time.steps();
  const QuadratureRecord& q = lc.op->quadrature();
  lv["quadrature"] = {{"h_min", q.h_min},
                      {"R_inf", q.R_inf},
                      {"reach", q.reach},
                      {"offsets", q.offsets},
                      {"far_mass", q.far_mass},
                      {"local_coefficient", q.local_coefficient},
                      {"moment_correction", q.moment_correction},
                      {"sub_h_moment", q.sub_h_moment},
                      {"error_estimate_initial", lc.op->quadrature_error_estimate(data.g.values().col(0))}};
  if (lc.basis) {
    const auto& b = *lc.basis;
    lv["spectral"] = {{"modes", b.size()},
                      {"alpha_min", b.alpha(0)},
                      {"alpha_max", b.alpha(b.alpha.size() - 1)},
                      {"truncated", b.size() < lc.grid->num_interior()}};
  } else {
    lv["spectral"] = nullptr;
  }

  json sols = json::object();
  const Eigen::MatrixXd nodal = nodal_tests(*lc.grid);
  for (const auto& [name, u] : solutions) {
    json d;
    d["max_u"] = u.values().maxCoeff();
    d["min_u"] = u.values().minCoeff();
    d["sup_abs_u"] = u.values().cwiseAbs().maxCoeff();
    d["residual_nodal"] = residual_json(weak_residual(*lc.op, u, f, nodal));
    if (name == "galerkin") d["residual_basis"] = residual_json(weak_residual(*lc.op, u, f, lc.basis->vectors));
    if (field_is_zero(data.g)) {
      const EnergyReport e = energy_report(lc.mat, u, f, data.h);
      d["energy"] = {{"linf_l2", e.linf_l2},     {"l2_x0", e.l2_x0}, {"derivative_dual", e.derivative_dual},
                     {"lhs", e.lhs},             {"data_norm", e.data_norm}, {"ratio", number_json(e.ratio)},
                     {"inconsistent", e.inconsistent}};
    } else {
      d["energy"] = nullptr;
    }
    sols[name] = d;
  }
  lv["solutions"] = sols;
  if (solutions.size() == 2) {
    const auto& a = solutions[0].second;
    const auto& b = solutions[1].second;
    const Eigen::Index ni = static_cast<Eigen::Index>(lc.grid->num_interior());
    lv["cross_scheme_max_diff"] = (a.values().topRows(ni) - b.values().topRows(ni)).cwiseAbs().maxCoeff();
  } else {
    lv["cross_scheme_max_diff"] = nullptr;
  }
  st.levels.push_back(lv);

  for (const auto& a : sc.audits) {
    context = a.pointer;
    std::vector<AuditResult> batch;
    if (a.check == "order") {
      std::optional<ProblemData> upper;
      if (a.upper) upper = build_problem(*a.upper, lc);
      batch = audit_order_principles(lc.mat, data, upper ? &*upper : nullptr);
      tag(batch, "monotone", level);
    } else if (a.check == "covering" || a.check == "iterlemmas") {
      if (level != 0) continue;
      if (a.check == "covering") batch.push_back(covering_audit(a, sc.seed));
      else batch = iterlemma_audits(a, sc.seed);
      tag(batch, batch.front().provenance.scheme.empty() ? "none" : batch.front().provenance.scheme, level);
    } else {
      for (const auto& [name, u] : solutions) {
        std::vector<AuditResult> one;
        if (a.check == "caccioppoli") {
          one.push_back(audit_caccioppoli(*lc.op, u, a.center, a.t0, a.r, a.level, a.side, std::nullopt, a.tolerance));
        } else if (a.check == "boundedness") {
          for (double delta : a.deltas) {
            auto part = audit_boundedness(u, s, a.center, a.t0, a.r, delta, sc.sigma);
            // the nonnegative form does not depend on delta
            if (delta != a.deltas.front()) part.pop_back();
            one.insert(one.end(), part.begin(), part.end());
          }
        } else if (a.check == "harnack") {
          HarnackOptions opt;
          opt.sigma = sc.sigma;
          opt.tolerance = a.tolerance;
          opt.exponents = a.exponents;
          opt.constant_bound = a.bound;
          one = audit_harnack_suite(u, s, a.center, a.t0, a.r, a.R, opt);
        } else if (a.check == "tail") {
          TailQuery tq;
          tq.field = &u;
          tq.center = a.center;
          tq.t0 = a.t0;
          tq.r = a.r;
          tq.s = s;
          tq.part = a.part;
          const TailResult tr = tail(tq);
          AuditResult r;
          r.check_id = "tail";
          r.params = {{"r", a.r}, {"t0", a.t0}, {"samples", static_cast<double>(tr.samples)}, {"sup_time", tr.sup_time}};
          r.lhs = tr.value;
          r.empirical_constant = tr.value;
          r.provenance.dim = lc.grid->dim();
          r.provenance.s = s;
          r.provenance.h = lc.grid->h();
          r.provenance.dt = lc.time.dt();
          if (a.expected) {
            r.rhs_terms = {{"expected", *a.expected}};
            r.rhs = *a.expected;
            r.tolerance = a.tolerance;
            r.pass = std::abs(tr.value - *a.expected) <= a.tolerance;
          } else {
            r.pass = std::isfinite(tr.value);
          }
          one.push_back(r);
        }
        tag(one, name, level);
        batch.insert(batch.end(), one.begin(), one.end());
      }
    }
    st.audits.insert(st.audits.end(), batch.begin(), batch.end());
  }
}

bool is_config_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidParameter:
    case ErrorCode::KernelRejected:
    case ErrorCode::DegenerateGrid:
    case ErrorCode::OutOfDomain:
    case ErrorCode::InvalidSigma:
    case ErrorCode::InvalidRadius:
    case ErrorCode::OutOfRange:
    case ErrorCode::EmptyCylinder:
    case ErrorCode::IoError:
      return true;
    default:
      return false;
  }
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::IoError, "cannot write '" + p.string() + "'");
  out << text;
  require(static_cast<bool>(out), ErrorCode::IoError, "write to '" + p.string() + "' failed");
}

}  // namespace

std::vector<std::pair<std::string, std::vector<std::string>>> scenario_checks() {
  return {
      {"order", {"order.sign", "order.comparison", "order.linf_bound"}},
      {"caccioppoli", {"caccioppoli"}},
      {"boundedness", {"boundedness", "boundedness.nonnegative"}},
      {"harnack", {"harnack.tail_relation", "harnack.weak", "harnack.full", "harnack.tail_free"}},
      {"tail", {"tail"}},
      {"covering", {"covering.dichotomy"}},
      {"iterlemmas", {"iterlemmas.decay", "iterlemmas.interpolation"}},
  };
}

RunOutcome run_scenario(const RunOptions& options) {
  RunOutcome outcome;
  const std::string label = options.config.filename().string();

  std::string text;
  {
    std::ifstream in(options.config, std::ios::binary);
    if (!in) {
      outcome.exit_code = 2;
      outcome.message = "cannot read config '" + options.config.string() + "'";
      return outcome;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }

  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    outcome.exit_code = 2;
    outcome.message = label + ": line " + std::to_string(line) + ", column " + std::to_string(col) +
                      ": malformed JSON: " + e.what();
    return outcome;
  }

  const Reader rd(label, text, options.config.parent_path());
  Scenario sc;
  try {
    sc = read_scenario(rd, root);
    if (options.seed) sc.seed = *options.seed;
    sc.resolved["seed"] = sc.seed;
    prevalidate(rd, sc);
  } catch (const Error& e) {
    outcome.exit_code = 2;
    outcome.message = e.what();
    return outcome;
  }

  if (options.threads) set_num_threads(*options.threads);

  RunState st;
  std::string context;
  try {
    for (int level = 0; level < sc.levels; ++level) run_level(sc, level, st, context);
  } catch (const Error& e) {
    if (is_config_code(e.code())) {
      outcome.exit_code = 2;
      outcome.message = label + ": " + rd.locator().where(context) + ": " + context + ": " + e.what();
    } else {
      outcome.exit_code = 3;
      outcome.message = std::string("solver failure (") + std::string(to_string(e.code())) + "): " + e.what();
    }
    return outcome;
  }

  for (const auto& r : st.audits) {
    if (r.skipped) ++outcome.skipped;
    else if (r.pass) ++outcome.passed;
    else ++outcome.failed;
  }
  outcome.exit_code = outcome.failed == 0 ? 0 : 1;

  json report;
  report["schema_version"] = kReportSchemaVersion;
  report["config"] = sc.resolved;
  report["levels"] = st.levels;
  report["audits"] = json::parse(audits_to_json(st.audits));
  report["summary"] = {{"passed", outcome.passed},
                       {"failed", outcome.failed},
                       {"skipped", outcome.skipped},
                       {"exit_code", outcome.exit_code}};

  try {
    std::filesystem::create_directories(options.out_dir);
    write_text(options.out_dir / "report.json", report.dump(2) + "\n");
    std::ostringstream csv;
    write_audits_csv(csv, st.audits);
    write_text(options.out_dir / "constants_vs_h.csv", csv.str());
    if (st.fields) {
      std::ostringstream fcsv;
      write_field_csv(*st.fields, fcsv);
      write_text(options.out_dir / "fields.csv", fcsv.str());
    }
  } catch (const std::exception& e) {
    outcome.exit_code = 3;
    outcome.message = std::string("cannot write outputs: ") + e.what();
    return outcome;
  }
  std::ostringstream msg;
  msg << outcome.passed << " passed, " << outcome.failed << " failed, " << outcome.skipped << " skipped";
  outcome.message = msg.str();
  return outcome;
}

}  // namespace nlheat
