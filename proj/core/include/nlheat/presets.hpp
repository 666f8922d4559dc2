#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "nlheat/field.hpp"
#include "nlheat/spectral.hpp"

namespace nlheat {

/// Named analytic data set (or a tabulated CSV) evaluated on a grid.
struct PresetSpec {
  std::string name = "constant";
  std::map<std::string, double> params;
  Point center{0.0, 0.0};
  std::string path;
};

struct PresetInfo {
  std::string name;
  std::string description;
  std::vector<std::string> params;
};

const std::vector<PresetInfo>& preset_catalog();

/// Throws InvalidParameter for unknown names, unknown parameters or values
/// outside the documented ranges.
void validate_preset(const PresetSpec& spec, int dim);

bool preset_needs_basis(const PresetSpec& spec);

/// Values at every node and time plus the matching exterior rule.
SpaceTimeField make_preset_field(const PresetSpec& spec, std::shared_ptr<const Grid> grid,
                                 const TimeGrid& time, const SpectralBasis* basis = nullptr);

}  // namespace nlheat
