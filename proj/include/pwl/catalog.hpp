#pragma once

#include <string>
#include <variant>
#include <vector>

#include "pwl/map_model.hpp"

namespace pwl {

using MapAny = std::variant<PwlMap<1>, PwlMap<2>, PwlMap<3>>;

inline int map_dimension(const MapAny& m) {
  return std::visit([](const auto& map) { return std::decay_t<decltype(map)>::dim; }, m);
}

struct ParamSpec {
  std::string name;
  bool required = true;
  std::string default_value;  // numeric text, or a keyword for "border"
  bool numeric = true;        // false: keyword-valued ("border")
};

// Named two-piece (or three-piece) families with the origin as common fixed
// point. Ids: F (1D), T1..T9 (2D), T1a (2D, affine left piece), T3D (3D).
std::vector<std::string> catalog_ids();
std::vector<ParamSpec> catalog_params(const std::string& id);

// Builds a map from textual key/value parameters (as read from a config).
// Throws std::invalid_argument naming the offending id or parameter.
MapAny make_catalog_map(const std::string& id,
                        const std::vector<std::pair<std::string, std::string>>& params);

}  // namespace pwl
