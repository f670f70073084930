#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pwl/types.hpp"

namespace pwl {

struct ConfigError : std::runtime_error {
  int line;  // 0 when the error is not tied to a specific line
  ConfigError(int line_, const std::string& what_)
      : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ": " + what_ : what_),
        line(line_) {}
};

// Parsed `key = value` run configuration. Global scope selects the map and
// its parameters; one section per subcommand holds that command's knobs.
struct RunConfig {
  std::string map_id;
  std::vector<std::pair<std::string, std::string>> map_params;  // file order, verbatim text
  std::optional<std::vector<Scalar>> ic;
  std::uint64_t seed = 20240501u;
  std::map<std::string, std::map<std::string, std::string>> sections;
};

// Full validation: unknown keys, unknown sections, malformed numbers and
// unknown catalog parameters are rejected with a line number.
RunConfig parse_config(const std::string& text);

// Canonical text form; parse_config(render_config(cfg)) round-trips.
std::string render_config(const RunConfig& cfg);

}  // namespace pwl
