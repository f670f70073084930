#include "pwl/catalog.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <stdexcept>

namespace pwl {
namespace {

struct Args {
  std::string id;
  std::map<std::string, std::string> kv;

  Scalar num(const std::string& key) const {
    auto it = kv.find(key);
    if (it == kv.end())
      throw std::invalid_argument(id + ": missing required parameter '" + key + "'");
    const std::string& text = it->second;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0')
      throw std::invalid_argument(id + ": parameter '" + key + "' is not a number: '" + text + "'");
    return v;
  }
  Scalar num_or(const std::string& key, Scalar fallback) const {
    return kv.count(key) ? num(key) : fallback;
  }
  bool has(const std::string& key) const { return kv.count(key) != 0; }
};

const std::vector<ParamSpec>& specs_for(const std::string& id) {
  static const std::map<std::string, std::vector<ParamSpec>> table = {
      {"F", {{"sL"}, {"sR"}, {"h", false, "1"}}},
      {"T1", {{"tauL"}, {"deltaL"}, {"tauR"}, {"deltaR"}, {"h"}}},
      {"T2", {{"al"}, {"bl"}, {"dl"}, {"ar"}, {"br"}, {"dr"}, {"h", false, "-1"}}},
      {"T3", {{"a1"}, {"b1"}, {"c1"}, {"a2"}, {"b2"}, {"c2"}, {"h", false, "-1"}}},
      {"T4", {{"tauR"}, {"deltaR"}, {"alpha"}, {"h", false, "-1"}}},
      {"T5", {{"tauL"}, {"deltaL"}, {"tauR"}, {"deltaR"}, {"h", false, "1"}}},
      {"T6", {{"tauL"}, {"deltaL"}, {"tauR"}, {"deltaR"}, {"h", false, "1"}}},
      {"T7", {{"tauL"}, {"deltaL"}, {"tauR"}, {"deltaR"}}},
      {"T8", {{"tauR"}, {"deltaR"}, {"alpha"}}},
      {"T9",
       {{"tauL"},
        {"deltaL"},
        {"tauR1"},
        {"deltaR1"},
        {"tauR2"},
        {"deltaR2"},
        {"border", false, "line", false},
        {"h", false, ""}}},  // default depends on border, resolved in build()
      {"T3D", {{"tauL"}, {"sigmaL"}, {"deltaL"}, {"tauR"}, {"sigmaR"}, {"deltaR"}, {"h", false, "-1"}}},
      {"T1a", {{"tauL"}, {"deltaL"}, {"tauR"}, {"deltaR"}, {"muL"}, {"h", false, "-1"}}},
  };
  auto it = table.find(id);
  if (it == table.end()) throw std::invalid_argument("unknown catalog map id: '" + id + "'");
  return it->second;
}

Mat2 nf2(Scalar tau, Scalar delta) {
  Mat2 j;
  j << tau, 1, -delta, 0;
  return j;
}

Region<2> left_of_line(Scalar h) { return {{HalfSpace<2>{{1, 0}, h, true}}, "L"}; }
Region<2> right_of_line(Scalar h) { return {{HalfSpace<2>{{1, 0}, h, false}}, "R"}; }
Region<2> above_slant(Scalar h) { return {{HalfSpace<2>{{-1, 1}, h, false}}, "L"}; }  // y > x + h
Region<2> below_slant(Scalar h) { return {{HalfSpace<2>{{-1, 1}, h, true}}, "R"}; }

PwlMap<2> two_piece(Region<2> rl, Region<2> rr, const Mat2& jl, const Mat2& jr,
                    const Vec2& bl = Vec2::Zero()) {
  return PwlMap<2>({std::move(rl), std::move(rr)},
                   {LinearPiece<2>{jl, bl}, LinearPiece<2>{jr, Vec2::Zero()}});
}

void require_nonzero_h(const std::string& id, Scalar h) {
  if (h == 0) throw std::invalid_argument(id + ": h must be nonzero");
}

MapAny build(const Args& a) {
  const std::string& id = a.id;
  if (id == "F") {
    const Scalar h = a.num("h");
    require_nonzero_h(id, h);
    Region<1> l{{HalfSpace<1>{Vec<1>::Constant(1), h, true}}, "L"};
    Region<1> r{{HalfSpace<1>{Vec<1>::Constant(1), h, false}}, "R"};
    return PwlMap<1>({l, r}, {LinearPiece<1>{Mat<1>::Constant(a.num("sL")), Vec<1>::Zero()},
                              LinearPiece<1>{Mat<1>::Constant(a.num("sR")), Vec<1>::Zero()}});
  }
  if (id == "T1" || id == "T1a") {
    const Scalar h = a.num("h");
    require_nonzero_h(id, h);
    const Vec2 bl = id == "T1a" ? Vec2{a.num("muL"), 0} : Vec2{0, 0};
    return two_piece(left_of_line(h), right_of_line(h), nf2(a.num("tauL"), a.num("deltaL")),
                     nf2(a.num("tauR"), a.num("deltaR")), bl);
  }
  if (id == "T2") {
    Mat2 jl, jr;
    jl << a.num("al"), a.num("bl"), 0, a.num("dl");
    jr << a.num("ar"), a.num("br"), 0, a.num("dr");
    const Scalar h = a.num("h");
    require_nonzero_h(id, h);
    return two_piece(left_of_line(h), right_of_line(h), jl, jr);
  }
  if (id == "T3") {
    Mat2 jl, jr;
    jl << a.num("a1"), a.num("b1"), 0, a.num("c1");
    jr << a.num("a2"), 0, a.num("b2"), a.num("c2");
    const Scalar h = a.num("h");
    require_nonzero_h(id, h);
    return two_piece(left_of_line(h), right_of_line(h), jl, jr);
  }
  if (id == "T4" || id == "T8") {
    const Scalar alpha = a.num("alpha");
    const Mat2 jl = nf2(alpha * a.num("tauR"), alpha * alpha * a.num("deltaR"));
    const Mat2 jr = nf2(a.num("tauR"), a.num("deltaR"));
    if (id == "T4") {
      const Scalar h = a.num("h");
      require_nonzero_h(id, h);
      return two_piece(left_of_line(h), right_of_line(h), jl, jr);
    }
    return two_piece({{Disc{1, false}}, "L"}, {{Disc{1, true}}, "R"}, jl, jr);
  }
  if (id == "T5") {
    const Scalar h = a.num("h");
    require_nonzero_h(id, h);
    return two_piece(above_slant(h), below_slant(h), nf2(a.num("tauL"), a.num("deltaL")),
                     nf2(a.num("tauR"), a.num("deltaR")));
  }
  if (id == "T6") {
    const Scalar h = a.num("h");
    if (h <= 0) throw std::invalid_argument("T6: h must be positive (band half-width)");
    return two_piece({{Band{h, false}}, "L"}, {{Band{h, true}}, "R"},
                     nf2(a.num("tauL"), a.num("deltaL")), nf2(a.num("tauR"), a.num("deltaR")));
  }
  if (id == "T7") {
    return two_piece({{Disc{1, false}}, "L"}, {{Disc{1, true}}, "R"},
                     nf2(a.num("tauL"), a.num("deltaL")), nf2(a.num("tauR"), a.num("deltaR")));
  }
  if (id == "T9") {
    const std::string border = a.kv.at("border");
    Region<2> dl;
    Atom<2> rest;  // the side holding the origin, split below by the sign of x
    if (border == "line") {
      const Scalar h = a.num_or("h", -1);
      require_nonzero_h(id, h);
      dl = left_of_line(h);
      rest = HalfSpace<2>{{1, 0}, h, false};
    } else if (border == "slant") {
      const Scalar h = a.num_or("h", 1);
      require_nonzero_h(id, h);
      dl = above_slant(h);
      rest = HalfSpace<2>{{-1, 1}, h, true};
    } else if (border == "circle") {
      if (a.has("h")) throw std::invalid_argument("T9: h does not apply to border = circle");
      dl = Region<2>{{Disc{1, false}}, "L"};
      rest = Disc{1, true};
    } else {
      throw std::invalid_argument("T9: border must be line, slant or circle (got '" + border + "')");
    }
    Region<2> r2{{rest, HalfSpace<2>{{1, 0}, 0, true}}, "R2"};
    Region<2> r1{{rest, HalfSpace<2>{{1, 0}, 0, false}}, "R1"};
    return PwlMap<2>({dl, r2, r1},
                     {LinearPiece<2>{nf2(a.num("tauL"), a.num("deltaL")), Vec2::Zero()},
                      LinearPiece<2>{nf2(a.num("tauR2"), a.num("deltaR2")), Vec2::Zero()},
                      LinearPiece<2>{nf2(a.num("tauR1"), a.num("deltaR1")), Vec2::Zero()}});
  }
  if (id == "T3D") {
    const Scalar h = a.num("h");
    require_nonzero_h(id, h);
    Mat3 jl, jr;
    jl << a.num("tauL"), 1, 0, -a.num("sigmaL"), 0, 1, a.num("deltaL"), 0, 0;
    jr << a.num("tauR"), 1, 0, -a.num("sigmaR"), 0, 1, a.num("deltaR"), 0, 0;
    Region<3> l{{HalfSpace<3>{{1, 0, 0}, h, true}}, "L"};
    Region<3> r{{HalfSpace<3>{{1, 0, 0}, h, false}}, "R"};
    return PwlMap<3>({l, r}, {LinearPiece<3>{jl, Vec3::Zero()}, LinearPiece<3>{jr, Vec3::Zero()}});
  }
  throw std::invalid_argument("unknown catalog map id: '" + id + "'");
}

}  // namespace

std::vector<std::string> catalog_ids() {
  return {"F", "T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8", "T9", "T3D", "T1a"};
}

std::vector<ParamSpec> catalog_params(const std::string& id) { return specs_for(id); }

MapAny make_catalog_map(const std::string& id,
                        const std::vector<std::pair<std::string, std::string>>& params) {
  const auto& specs = specs_for(id);
  Args a;
  a.id = id;
  for (const auto& [k, v] : params) {
    const bool known = std::any_of(specs.begin(), specs.end(),
                                   [&](const ParamSpec& s) { return s.name == k; });
    if (!known) throw std::invalid_argument(id + ": unknown parameter '" + k + "'");
    if (!a.kv.emplace(k, v).second)
      throw std::invalid_argument(id + ": duplicate parameter '" + k + "'");
  }
  for (const auto& s : specs) {
    if (a.kv.count(s.name)) continue;
    if (s.required) throw std::invalid_argument(id + ": missing required parameter '" + s.name + "'");
    if (!s.default_value.empty()) a.kv.emplace(s.name, s.default_value);
  }
  MapAny m = build(a);
  std::visit(
      [&](auto& map) {
        map.id = id;
        for (const auto& s : specs) {
          auto it = a.kv.find(s.name);
          if (it == a.kv.end() || s.name == "border") continue;
          char* end = nullptr;
          const double v = std::strtod(it->second.c_str(), &end);
          if (end != it->second.c_str() && *end == '\0') map.params.emplace_back(s.name, v);
        }
      },
      m);
  return m;
}

}  // namespace pwl
