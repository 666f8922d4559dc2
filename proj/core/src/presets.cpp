#include "nlheat/presets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "nlheat/error.hpp"

namespace nlheat {

const std::vector<PresetInfo>& preset_catalog() {
  static const std::vector<PresetInfo> catalog{
      {"constant", "value everywhere, including beyond the collar", {"value"}},
      {"linear_in_t", "offset + slope*t, constant in space", {"offset", "slope"}},
      {"sine_bump", "amplitude * prod sin(pi (x-lo)/(hi-lo)) inside the domain, 0 outside", {"amplitude"}},
      {"indicator_annulus", "value on inner < |x-center| < outer, 0 elsewhere", {"value", "inner", "outer"}},
      {"eigenmode", "amplitude * e_index (1-based) inside the domain, 0 outside", {"index", "amplitude"}},
      {"two_level", "inner on the domain and collar nodes within split of it, outer beyond", {"inner", "outer", "split"}},
      {"csv", "nearest sample of a 'x[,y],value' table inside the lattice box, far beyond", {"far"}},
  };
  return catalog;
}

namespace {

const PresetInfo* find_info(const std::string& name) {
  for (const auto& info : preset_catalog())
    if (info.name == name) return &info;
  return nullptr;
}

double param(const PresetSpec& spec, const std::string& key, double fallback) {
  const auto it = spec.params.find(key);
  return it == spec.params.end() ? fallback : it->second;
}

struct Sample {
  Point x;
  double v;
};

std::vector<Sample> read_samples(const std::string& path, int dim) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::IoError, "cannot open data table '" + path + "'");
  std::vector<Sample> out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream is(line);
    Sample s{{0.0, 0.0}, 0.0};
    bool ok = static_cast<bool>(is >> s.x[0]);
    if (ok && dim == 2) ok = static_cast<bool>(is >> s.x[1]);
    if (ok) ok = static_cast<bool>(is >> s.v);
    if (!ok) {
      if (first) {
        first = false;
        continue;  // header
      }
      fail(ErrorCode::IoError, "malformed row in '" + path + "': " + line);
    }
    first = false;
    out.push_back(s);
  }
  require(!out.empty(), ErrorCode::IoError, "data table '" + path + "' has no rows");
  return out;
}

}  // namespace

void validate_preset(const PresetSpec& spec, int dim) {
  const PresetInfo* info = find_info(spec.name);
  require(info != nullptr, ErrorCode::InvalidParameter, "unknown preset '" + spec.name + "'");
  for (const auto& [key, value] : spec.params) {
    require(std::find(info->params.begin(), info->params.end(), key) != info->params.end(),
            ErrorCode::InvalidParameter, "preset '" + spec.name + "' has no parameter '" + key + "'");
    require(std::isfinite(value), ErrorCode::InvalidParameter, "parameter '" + key + "' must be finite");
  }
  if (spec.name == "indicator_annulus") {
    const double inner = param(spec, "inner", 0.0);
    const double outer = param(spec, "outer", 1.0);
    require(inner >= 0.0 && outer > inner, ErrorCode::InvalidParameter,
            "indicator_annulus needs 0 <= inner < outer");
  } else if (spec.name == "eigenmode") {
    const double index = param(spec, "index", 1.0);
    require(index >= 1.0 && index == std::floor(index), ErrorCode::InvalidParameter,
            "eigenmode index must be a positive integer");
  } else if (spec.name == "two_level") {
    require(param(spec, "split", 0.0) >= 0.0, ErrorCode::InvalidParameter, "two_level split must be nonnegative");
  } else if (spec.name == "csv") {
    require(!spec.path.empty(), ErrorCode::InvalidParameter, "csv preset needs a path");
  }
  (void)dim;
}

bool preset_needs_basis(const PresetSpec& spec) { return spec.name == "eigenmode"; }

SpaceTimeField make_preset_field(const PresetSpec& spec, std::shared_ptr<const Grid> grid,
                                 const TimeGrid& time, const SpectralBasis* basis) {
  validate_preset(spec, grid->dim());
  const Domain& dom = grid->domain();
  const int n = grid->dim();

  if (spec.name == "constant") {
    const double c = param(spec, "value", 1.0);
    return sample_field(grid, time, [c](const Point&, double) { return c; },
                        [c](double) { return ExteriorRule::constant(c); });
  }
  if (spec.name == "linear_in_t") {
    const double a = param(spec, "offset", 0.0);
    const double b = param(spec, "slope", 1.0);
    return sample_field(grid, time, [a, b](const Point&, double t) { return a + b * t; },
                        [a, b](double t) { return ExteriorRule::constant(a + b * t); });
  }
  if (spec.name == "sine_bump") {
    const double amp = param(spec, "amplitude", 1.0);
    return sample_field(grid, time, [amp, dom, n](const Point& x, double) {
      if (!dom.contains(x)) return 0.0;
      double v = amp;
      for (int k = 0; k < n; ++k) v *= std::sin(std::numbers::pi * (x[k] - dom.lo[k]) / (dom.hi[k] - dom.lo[k]));
      return v;
    });
  }
  if (spec.name == "indicator_annulus") {
    const double value = param(spec, "value", 1.0);
    const double inner = param(spec, "inner", 0.0);
    const double outer = param(spec, "outer", 1.0);
    const Point c = spec.center;
    return sample_field(grid, time, [=](const Point& x, double) {
      const double d = distance(x, c, n);
      return (d > inner && d < outer) ? value : 0.0;
    });
  }
  if (spec.name == "two_level") {
    const double inner = param(spec, "inner", 1.0);
    const double outer = param(spec, "outer", 0.0);
    const double split = param(spec, "split", 0.5 * grid->R_inf());
    return sample_field(grid, time,
                        [=](const Point& x, double) { return dom.distance(x) <= split ? inner : outer; },
                        [outer](double) { return ExteriorRule::constant(outer); });
  }
  if (spec.name == "eigenmode") {
    require(basis != nullptr, ErrorCode::InvalidParameter, "eigenmode preset needs a spectral basis");
    const auto index = static_cast<std::size_t>(param(spec, "index", 1.0));
    require(index <= basis->size(), ErrorCode::InvalidParameter,
            "eigenmode index " + std::to_string(index) + " exceeds the " + std::to_string(basis->size()) +
                " computed modes");
    const double amp = param(spec, "amplitude", 1.0);
    SpaceTimeField f(grid, time);
    for (std::size_t m = 0; m < time.size(); ++m) f.interior(m) = amp * basis->vectors.col(static_cast<Eigen::Index>(index - 1));
    return f;
  }
  // csv
  const auto samples = read_samples(spec.path, n);
  const double far = param(spec, "far", 0.0);
  std::vector<double> nodal(grid->num_nodes());
  for (std::size_t j = 0; j < grid->num_nodes(); ++j) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) {
      const double d = distance(grid->point(j), s.x, n);
      if (d < best) {
        best = d;
        nodal[j] = s.v;
      }
    }
  }
  SpaceTimeField f(grid, time);
  for (std::size_t m = 0; m < time.size(); ++m) {
    for (std::size_t j = 0; j < grid->num_nodes(); ++j) f.values()(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(m)) = nodal[j];
    f.set_exterior(m, ExteriorRule::constant(far));
  }
  return f;
}

}  // namespace nlheat
