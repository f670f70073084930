#include "pwl/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "pwl/catalog.hpp"
#include "pwl/io.hpp"

namespace pwl {
namespace {

enum class Kind { Num, Int, Word, NumList };

struct KeySpec {
  const char* key;
  Kind kind;
  int arity = 1;  // exact element count for NumList, 0 = any positive count
};

const std::map<std::string, std::vector<KeySpec>>& section_schema() {
  static const std::map<std::string, std::vector<KeySpec>> schema = {
      {"orbit",
       {{"steps", Kind::Int}, {"transient", Kind::Int}, {"thin", Kind::Int}}},
      {"classify",
       {{"transient", Kind::Int}, {"samples", Kind::Int}, {"extra_ics", Kind::Int}}},
      {"return-map",
       {{"slope", Kind::Num}, {"seg", Kind::NumList, 2}, {"probes", Kind::Int},
        {"k_max", Kind::Int}}},
      {"rotation",
       {{"steps", Kind::Int}, {"max_pq", Kind::Int}, {"tol", Kind::Num}}},
      {"scan1d",
       {{"axis", Kind::Word}, {"lo", Kind::Num}, {"hi", Kind::Num}, {"n", Kind::Int},
        {"projection", Kind::Word}, {"transient", Kind::Int}, {"keep", Kind::Int}}},
      {"scan2d",
       {{"axis1", Kind::Word}, {"lo1", Kind::Num}, {"hi1", Kind::Num}, {"n1", Kind::Int},
        {"axis2", Kind::Word}, {"lo2", Kind::Num}, {"hi2", Kind::Num}, {"n2", Kind::Int},
        {"transient", Kind::Int}, {"samples", Kind::Int}, {"extra_ics", Kind::Int}}},
      {"basin",
       {{"window", Kind::NumList, 4}, {"nx", Kind::Int}, {"ny", Kind::Int},
        {"ref1", Kind::NumList, 2}, {"ref2", Kind::NumList, 2}, {"transient", Kind::Int},
        {"tail", Kind::Int}}},
      {"critical-images", {{"seg", Kind::NumList, 4}, {"depth", Kind::Int}}},
  };
  return schema;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& s, Scalar* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return false;
  if (out) *out = v;
  return true;
}

std::vector<Scalar> parse_num_list(const std::string& s, int line, const std::string& key) {
  std::istringstream in(s);
  std::vector<Scalar> out;
  std::string tok;
  while (in >> tok) {
    Scalar v;
    if (!parse_number(tok, &v))
      throw ConfigError(line, "key '" + key + "': '" + tok + "' is not a number");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError(line, "key '" + key + "': empty value");
  return out;
}

void check_typed(const KeySpec& spec, const std::string& value, int line) {
  switch (spec.kind) {
    case Kind::Num:
      if (!parse_number(value, nullptr))
        throw ConfigError(line, std::string("key '") + spec.key + "': '" + value +
                                    "' is not a number");
      break;
    case Kind::Int: {
      Scalar v;
      if (!parse_number(value, &v) || v != static_cast<long long>(v))
        throw ConfigError(line, std::string("key '") + spec.key + "': '" + value +
                                    "' is not an integer");
      break;
    }
    case Kind::Word:
      if (value.empty() || value.find(' ') != std::string::npos)
        throw ConfigError(line, std::string("key '") + spec.key + "': expected a single word");
      break;
    case Kind::NumList: {
      const auto vals = parse_num_list(value, line, spec.key);
      if (spec.arity > 0 && static_cast<int>(vals.size()) != spec.arity)
        throw ConfigError(line, std::string("key '") + spec.key + "': expected " +
                                    std::to_string(spec.arity) + " numbers, got " +
                                    std::to_string(vals.size()));
      break;
    }
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::string section;  // empty = global scope
  std::vector<std::pair<std::string, int>> global_lines;  // key -> line, for late checks
  std::map<std::string, int> seen_global;
  std::map<std::string, std::map<std::string, int>> seen_section;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  int ic_line = 0, seed_line = 0;
  std::string ic_text;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!section_schema().count(section))
        throw ConfigError(line_no, "unknown section '" + section + "'");
      cfg.sections[section];  // creates the (possibly empty) section
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "empty key");
    if (value.empty()) throw ConfigError(line_no, "key '" + key + "': empty value");

    if (section.empty()) {
      if (seen_global.count(key))
        throw ConfigError(line_no, "duplicate key '" + key + "' (first at line " +
                                       std::to_string(seen_global[key]) + ")");
      seen_global[key] = line_no;
      if (key == "map") {
        cfg.map_id = value;
      } else if (key == "ic") {
        ic_text = value;
        ic_line = line_no;
      } else if (key == "seed") {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
        if (end != value.c_str() + value.size())
          throw ConfigError(line_no, "key 'seed': '" + value + "' is not an unsigned integer");
        cfg.seed = v;
        seed_line = line_no;
      } else {
        cfg.map_params.emplace_back(key, value);
        global_lines.emplace_back(key, line_no);
      }
    } else {
      const auto& schema = section_schema().at(section);
      const auto it = std::find_if(schema.begin(), schema.end(),
                                   [&](const KeySpec& s) { return key == s.key; });
      if (it == schema.end())
        throw ConfigError(line_no, "unknown key '" + key + "' in section [" + section + "]");
      auto& seen = seen_section[section];
      if (seen.count(key))
        throw ConfigError(line_no, "duplicate key '" + key + "' in section [" + section + "]");
      seen[key] = line_no;
      check_typed(*it, value, line_no);
      cfg.sections[section][key] = value;
    }
  }
  (void)seed_line;

  if (cfg.map_id.empty()) throw ConfigError(0, "missing 'map'");
  const auto ids = catalog_ids();
  if (std::find(ids.begin(), ids.end(), cfg.map_id) == ids.end())
    throw ConfigError(seen_global.count("map") ? seen_global["map"] : 0,
                      "unknown map id '" + cfg.map_id + "'");

  // Map parameters: names and value shapes against the catalog.
  const auto specs = catalog_params(cfg.map_id);
  for (std::size_t i = 0; i < cfg.map_params.size(); ++i) {
    const auto& [key, value] = cfg.map_params[i];
    const int line = global_lines[i].second;
    const auto it = std::find_if(specs.begin(), specs.end(),
                                 [&](const ParamSpec& s) { return s.name == key; });
    if (it == specs.end())
      throw ConfigError(line, "map " + cfg.map_id + " has no parameter '" + key + "'");
    if (it->numeric && !parse_number(value, nullptr))
      throw ConfigError(line, "key '" + key + "': '" + value + "' is not a number");
  }

  if (!ic_text.empty()) {
    const auto vals = parse_num_list(ic_text, ic_line, "ic");
    if (vals.size() < 1 || vals.size() > 3)
      throw ConfigError(ic_line, "key 'ic': expected 1 to 3 coordinates");
    cfg.ic = vals;
  }

  // Axis names inside scan sections must exist on the chosen map.
  for (const auto& [sname, body] : cfg.sections) {
    for (const char* axis_key : {"axis", "axis1", "axis2"}) {
      const auto it = body.find(axis_key);
      if (it == body.end()) continue;
      const auto sp = std::find_if(specs.begin(), specs.end(),
                                   [&](const ParamSpec& s) { return s.name == it->second; });
      if (sp == specs.end())
        throw ConfigError(seen_section[sname][axis_key],
                          "map " + cfg.map_id + " has no parameter '" + it->second + "'");
    }
    const auto pj = body.find("projection");
    if (pj != body.end() && pj->second != "x" && pj->second != "y" && pj->second != "z")
      throw ConfigError(seen_section[sname]["projection"],
                        "key 'projection': expected x, y or z");
  }
  return cfg;
}

std::string render_config(const RunConfig& cfg) {
  std::string out = "map = " + cfg.map_id + "\n";
  for (const auto& [k, v] : cfg.map_params) out += k + " = " + v + "\n";
  if (cfg.ic) {
    out += "ic =";
    for (Scalar c : *cfg.ic) out += " " + format_g17(c);
    out += "\n";
  }
  out += "seed = " + std::to_string(cfg.seed) + "\n";
  for (const auto& [name, body] : cfg.sections) {
    out += "\n[" + name + "]\n";
    for (const auto& [k, v] : body) out += k + " = " + v + "\n";
  }
  return out;
}

}  // namespace pwl
