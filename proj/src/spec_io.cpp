#include "infconv/spec_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace infconv {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw SpecError(path + ": " + what);
}

void require_keys(const json& obj, const std::string& path,
                  std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional = {}) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const char* k : required)
    if (!obj.contains(k)) fail(path, std::string("missing key \"") + k + "\"");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : required) known = known || it.key() == k;
    for (const char* k : optional) known = known || it.key() == k;
    if (!known) fail(path, "unknown key \"" + it.key() + "\"");
  }
}

double number_at(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

long integer_at(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<long>();
}

DigitSet parse_digits(const json& arr, const std::string& path) {
  if (!arr.is_array() || arr.empty()) fail(path, "expected a non-empty array of digits");
  std::vector<BigInt> exact;
  std::vector<double> reals;
  bool any_exact = false, any_fractional = false;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& v = arr[i];
    std::string p = path + "[" + std::to_string(i) + "]";
    if (v.is_number_integer()) {
      exact.emplace_back(v.get<long long>());
      reals.push_back((double)v.get<long long>());
    } else if (v.is_number_unsigned()) {
      exact.emplace_back(v.get<unsigned long long>());
      reals.push_back((double)v.get<unsigned long long>());
    } else if (v.is_number_float()) {
      double d = v.get<double>();
      if (std::fabs(d) > kExactIntLimit)
        fail(p, "digit exceeds 2^53; quote it as a decimal string to keep it exact");
      reals.push_back(d);
      if (d == std::rint(d)) {
        exact.emplace_back((long long)d);
      } else {
        any_fractional = true;
      }
    } else if (v.is_string()) {
      any_exact = true;
      try {
        exact.emplace_back(BigInt(v.get<std::string>()));
      } catch (const std::exception&) {
        fail(p, "not a decimal integer string");
      }
      reals.push_back(0.0);  // unused on the exact path
    } else {
      fail(p, "digits must be numbers or decimal strings");
    }
  }
  if (any_exact && any_fractional)
    fail(path, "exact digit strings cannot mix with fractional digits");
  try {
    if (any_exact) return DigitSet::from_bigints(std::move(exact));
    return DigitSet::from_reals(reals);
  } catch (const DomainError& e) {
    fail(path, e.what());
  }
}

GeneratorPair parse_pair(const json& obj, const std::string& path) {
  require_keys(obj, path, {"scale", "digits"});
  double scale = number_at(obj.at("scale"), path + ".scale");
  DigitSet digits = parse_digits(obj.at("digits"), path + ".digits");
  try {
    return GeneratorPair(scale, std::move(digits));
  } catch (const DomainError& e) {
    fail(path, e.what());
  }
}

std::vector<GeneratorPair> parse_pair_list(const json& arr, const std::string& path) {
  if (!arr.is_array() || arr.empty()) fail(path, "expected a non-empty array of pairs");
  std::vector<GeneratorPair> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i)
    out.push_back(parse_pair(arr[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

IndexSet parse_index_set(const json& v, const std::string& path) {
  if (v.is_string()) {
    if (v.get<std::string>() == "all") return IndexSet::all();
    fail(path, "the only string form is \"all\"");
  }
  require_keys(v, path, {"type"}, {"first", "step", "values"});
  std::string type = v.at("type").get<std::string>();
  try {
    if (type == "arithmetic") {
      require_keys(v, path, {"type", "first", "step"});
      return IndexSet::arithmetic(integer_at(v.at("first"), path + ".first"),
                                  integer_at(v.at("step"), path + ".step"));
    }
    if (type == "list") {
      require_keys(v, path, {"type", "values"});
      const json& vals = v.at("values");
      if (!vals.is_array() || vals.empty()) fail(path + ".values", "expected a non-empty array");
      std::vector<long> out;
      for (std::size_t i = 0; i < vals.size(); ++i)
        out.push_back(integer_at(vals[i], path + ".values[" + std::to_string(i) + "]"));
      return IndexSet::from_list(std::move(out));
    }
  } catch (const DomainError& e) {
    fail(path, e.what());
  }
  fail(path + ".type", "unknown index set type \"" + type + "\"");
}

constexpr int kMaxRuleDepth = 8;

Rule parse_rule(const json& obj, const std::string& path, int depth) {
  if (depth > kMaxRuleDepth) fail(path, "rule nesting too deep");
  require_keys(obj, path, {"type"}, {"pairs", "prefix", "cycle", "family", "indices", "base", "sub"});
  std::string type = obj.at("type").get<std::string>();
  if (type == "cycle") {
    require_keys(obj, path, {"type", "pairs"});
    return Rule{CycleRule{parse_pair_list(obj.at("pairs"), path + ".pairs")}};
  }
  if (type == "prefix_cycle") {
    require_keys(obj, path, {"type", "prefix", "cycle"});
    return Rule{PrefixCycleRule{parse_pair_list(obj.at("prefix"), path + ".prefix"),
                                parse_pair_list(obj.at("cycle"), path + ".cycle")}};
  }
  if (type == "indexed_family") {
    require_keys(obj, path, {"type", "family"}, {"indices"});
    std::string name = obj.at("family").get<std::string>();
    auto kind = family_from_name(name);
    if (!kind) fail(path + ".family", "unknown family \"" + name + "\"");
    IndexSet ix = obj.contains("indices")
                      ? parse_index_set(obj.at("indices"), path + ".indices")
                      : IndexSet::all();
    return Rule{FamilyRule{*kind, std::move(ix)}};
  }
  if (type == "interleave") {
    require_keys(obj, path, {"type", "base", "sub", "indices"});
    auto base = std::make_shared<Rule>(parse_rule(obj.at("base"), path + ".base", depth + 1));
    auto sub = std::make_shared<Rule>(parse_rule(obj.at("sub"), path + ".sub", depth + 1));
    return Rule{InterleaveRule{std::move(base), std::move(sub),
                               parse_index_set(obj.at("indices"), path + ".indices")}};
  }
  fail(path + ".type", "unknown rule type \"" + type + "\"");
}

ConvergenceTag parse_tag(const json& obj, const std::string& path) {
  require_keys(obj, path, {"kind", "c"}, {"shift", "rho"});
  ConvergenceTag tag;
  std::string kind = obj.at("kind").get<std::string>();
  tag.c = number_at(obj.at("c"), path + ".c");
  if (tag.c <= 0.0) fail(path + ".c", "constant must be positive");
  if (kind == "inverse_square") {
    tag.kind = ConvergenceTag::Kind::InverseSquare;
    require_keys(obj, path, {"kind", "c"}, {"shift"});
    tag.shift = obj.contains("shift") ? integer_at(obj.at("shift"), path + ".shift") : 0;
  } else if (kind == "power_of_two") {
    tag.kind = ConvergenceTag::Kind::PowerOfTwo;
    require_keys(obj, path, {"kind", "c"});
  } else if (kind == "geometric") {
    tag.kind = ConvergenceTag::Kind::Geometric;
    require_keys(obj, path, {"kind", "c", "rho"});
    tag.rho = number_at(obj.at("rho"), path + ".rho");
    if (!(tag.rho > 0.0 && tag.rho < 1.0)) fail(path + ".rho", "ratio must lie in (0, 1)");
  } else {
    fail(path + ".kind", "unknown tag kind \"" + kind + "\"");
  }
  return tag;
}

std::vector<long long> parse_spectrum_set(const json& arr, const std::string& path) {
  if (!arr.is_array() || arr.empty()) fail(path, "expected a non-empty array of integers");
  std::vector<long long> out;
  std::set<long long> seen;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string p = path + "[" + std::to_string(i) + "]";
    if (!arr[i].is_number_integer() && !arr[i].is_number_unsigned())
      fail(p, "expected an integer");
    long long v = arr[i].get<long long>();
    if (!seen.insert(v).second) fail(p, "duplicate spectrum value");
    out.push_back(v);
  }
  return out;
}

SpectrumSets parse_spectrum_sets(const json& v, const std::string& path) {
  if (v.is_string()) {
    if (v.get<std::string>() == "family") return SpectrumSets::family();
    fail(path, "the only string form is \"family\"");
  }
  require_keys(v, path, {}, {"cycle", "map"});
  if (v.contains("cycle") == v.contains("map"))
    fail(path, "expected exactly one of \"cycle\" or \"map\"");
  if (v.contains("cycle")) {
    const json& arr = v.at("cycle");
    if (!arr.is_array() || arr.empty()) fail(path + ".cycle", "expected a non-empty array");
    std::vector<std::vector<long long>> sets;
    for (std::size_t i = 0; i < arr.size(); ++i)
      sets.push_back(parse_spectrum_set(arr[i], path + ".cycle[" + std::to_string(i) + "]"));
    return SpectrumSets::cycled(std::move(sets));
  }
  const json& m = v.at("map");
  if (!m.is_object() || m.empty()) fail(path + ".map", "expected a non-empty object");
  std::map<long, std::vector<long long>> sets;
  for (auto it = m.begin(); it != m.end(); ++it) {
    long idx = 0;
    try {
      std::size_t used = 0;
      idx = std::stol(it.key(), &used);
      if (used != it.key().size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      fail(path + ".map", "key \"" + it.key() + "\" is not an index");
    }
    if (idx < 1) fail(path + ".map", "indices are 1-based");
    sets[idx] = parse_spectrum_set(it.value(), path + ".map[\"" + it.key() + "\"]");
  }
  return SpectrumSets::mapped(std::move(sets));
}

json digits_to_json(const DigitSet& d) {
  json arr = json::array();
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!d.all_integral()) {
      arr.push_back((double)d.approx(i));
      continue;
    }
    BigInt v = d.exact(i);
    if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
      arr.push_back((long long)v);
    else
      arr.push_back(v.str());
  }
  return arr;
}

json rule_to_json(const Rule& r) {
  json out;
  if (const auto* c = std::get_if<CycleRule>(&r)) {
    out["type"] = "cycle";
    json pairs = json::array();
    for (const auto& p : c->pairs) pairs.push_back(pair_to_json(p));
    out["pairs"] = std::move(pairs);
  } else if (const auto* pc = std::get_if<PrefixCycleRule>(&r)) {
    out["type"] = "prefix_cycle";
    json prefix = json::array(), cycle = json::array();
    for (const auto& p : pc->prefix) prefix.push_back(pair_to_json(p));
    for (const auto& p : pc->cycle) cycle.push_back(pair_to_json(p));
    out["prefix"] = std::move(prefix);
    out["cycle"] = std::move(cycle);
  } else if (const auto* f = std::get_if<FamilyRule>(&r)) {
    out["type"] = "indexed_family";
    out["family"] = family_name(f->family);
    out["indices"] = index_set_to_json(f->indices);
  } else {
    const auto& il = std::get<InterleaveRule>(r);
    out["type"] = "interleave";
    out["base"] = rule_to_json(*il.base);
    out["sub"] = rule_to_json(*il.sub);
    out["indices"] = index_set_to_json(il.indices);
  }
  return out;
}

json tag_to_json(const ConvergenceTag& t) {
  json out;
  out["c"] = t.c;
  switch (t.kind) {
    case ConvergenceTag::Kind::InverseSquare:
      out["kind"] = "inverse_square";
      out["shift"] = t.shift;
      break;
    case ConvergenceTag::Kind::PowerOfTwo:
      out["kind"] = "power_of_two";
      break;
    case ConvergenceTag::Kind::Geometric:
      out["kind"] = "geometric";
      out["rho"] = t.rho;
      break;
  }
  return out;
}

json spectrum_sets_to_json(const SpectrumSets& s) {
  switch (s.kind) {
    case SpectrumSets::Kind::None:
      return json();  // caller omits
    case SpectrumSets::Kind::Family:
      return json("family");
    case SpectrumSets::Kind::Cycle: {
      json out;
      out["cycle"] = s.cycle;
      return out;
    }
    case SpectrumSets::Kind::Map: {
      json m = json::object();
      for (const auto& [idx, set] : s.by_index) m[std::to_string(idx)] = set;
      json out;
      out["map"] = std::move(m);
      return out;
    }
  }
  return json();
}

}  // namespace

SequenceSpec parse_spec(const json& doc) {
  require_keys(doc, "$", {"version", "rule"}, {"convergence_tag", "spectrum_sets"});
  if (!doc.at("version").is_string() || doc.at("version").get<std::string>() != "v1")
    fail("$.version", "expected \"v1\"");
  SequenceSpec spec{parse_rule(doc.at("rule"), "$.rule", 0), std::nullopt, SpectrumSets::none()};
  if (doc.contains("convergence_tag"))
    spec.tag = parse_tag(doc.at("convergence_tag"), "$.convergence_tag");
  if (doc.contains("spectrum_sets"))
    spec.spectrum_sets = parse_spectrum_sets(doc.at("spectrum_sets"), "$.spectrum_sets");
  return spec;
}

SequenceSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open spec file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw SpecError("spec file " + path + " is not valid JSON: " + e.what());
  }
  return parse_spec(doc);
}

json spec_to_json(const SequenceSpec& spec) {
  json out;
  out["version"] = "v1";
  out["rule"] = rule_to_json(spec.rule);
  if (spec.tag) out["convergence_tag"] = tag_to_json(*spec.tag);
  if (spec.spectrum_sets.kind != SpectrumSets::Kind::None)
    out["spectrum_sets"] = spectrum_sets_to_json(spec.spectrum_sets);
  return out;
}

json index_set_to_json(const IndexSet& ix) {
  json out;
  if (ix.kind() == IndexSet::Kind::Arithmetic) {
    out["type"] = "arithmetic";
    out["first"] = ix.first();
    out["step"] = ix.step();
  } else {
    out["type"] = "list";
    out["values"] = ix.list();
  }
  return out;
}

json pair_to_json(const GeneratorPair& p) {
  json out;
  if (p.scale_integral())
    out["scale"] = p.scale_int();
  else
    out["scale"] = p.scale();
  out["digits"] = digits_to_json(p.digits());
  return out;
}

}  // namespace infconv
