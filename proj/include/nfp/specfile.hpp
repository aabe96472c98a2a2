#pragma once

// Spec-file ingestion: versioned JSON describing a filtration, generator
// maps, coset representatives, an endomorphism (lift + generator images) and
// hypothesis flags. Entries are exact: integers as numbers, rationals as
// "p/q" strings, parameters as bare symbols substituted at load time.

#include <json.hpp>

#include <cctype>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nfp/canonical.hpp"
#include "nfp/group.hpp"
#include "nfp/numeric.hpp"

namespace nfp {

using Json = nlohmann::ordered_json;

struct SpecError : std::runtime_error {
  explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

using ParamMap = std::map<std::string, Rat>;

struct SpecFile {
  std::string version;
  std::string name;
  std::string description;
  std::vector<std::string> param_names;
  std::map<std::string, std::string> param_constraints;  // name -> "odd" | "even" | "nonzero"
  GroupSpec group;
  EndoSpec endo{CanonicalMap()};
  ParamMap params_used;
  Json source;  // original document, for round-trip serialization
};

namespace detail {

inline Rat parse_entry(const Json& j, const ParamMap& params, const std::string& where) {
  if (j.is_number_integer()) return Rat(static_cast<long>(j.get<long long>()));
  if (!j.is_string()) throw SpecError(where + ": entry must be an integer or a string");
  std::string s = j.get<std::string>();
  if (s.empty()) throw SpecError(where + ": empty entry");
  bool neg = false;
  std::string body = s;
  if (body[0] == '-' || body[0] == '+') {
    neg = body[0] == '-';
    body = body.substr(1);
  }
  Rat v;
  if (!body.empty() && (std::isdigit(static_cast<unsigned char>(body[0])))) {
    try {
      v = parse_rat(body);
    } catch (const std::exception&) {
      throw SpecError(where + ": malformed number '" + s + "'");
    }
  } else {
    auto it = params.find(body);
    if (it == params.end()) throw SpecError(where + ": unknown symbol '" + body + "' (missing --param?)");
    v = it->second;
  }
  return neg ? Rat(-v) : v;
}

inline RatMatrix parse_matrix(const Json& j, std::size_t dim, const ParamMap& params, const std::string& where) {
  if (!j.is_array() || j.size() != dim) throw SpecError(where + ": expected a " + std::to_string(dim) + "-row matrix");
  RatMatrix m(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    if (!j[r].is_array() || j[r].size() != dim) throw SpecError(where + ": row " + std::to_string(r + 1) + " has wrong length");
    for (std::size_t c = 0; c < dim; ++c) m(r, c) = parse_entry(j[r][c], params, where);
  }
  return m;
}

inline MultiPoly parse_poly(const Json& j, std::size_t nvars, const ParamMap& params, const std::string& where) {
  MultiPoly p(nvars);
  if (j.is_null()) return p;
  if (!j.is_array()) throw SpecError(where + ": polynomial must be a list of terms");
  for (const auto& term : j) {
    if (!term.is_object() || !term.contains("c")) throw SpecError(where + ": term needs a coefficient 'c'");
    Rat c = parse_entry(term["c"], params, where);
    Mono e(nvars, 0);
    if (term.contains("e")) {
      const auto& ev = term["e"];
      if (!ev.is_array() || ev.size() > nvars)
        throw SpecError(where + ": exponent vector longer than the available lower-level variables");
      for (std::size_t i = 0; i < ev.size(); ++i) {
        if (!ev[i].is_number_integer() || ev[i].get<long long>() < 0)
          throw SpecError(where + ": exponents must be nonnegative integers");
        e[i] = static_cast<unsigned>(ev[i].get<long long>());
      }
    }
    p.add_term(std::move(e), c);
  }
  return p;
}

inline CanonicalMap parse_map(const Json& j, const Filtration& filt, const ParamMap& params, const std::string& where) {
  if (!j.is_object() || !j.contains("blocks")) throw SpecError(where + ": map needs 'blocks'");
  const auto& jb = j["blocks"];
  if (!jb.is_array() || jb.size() != filt.levels()) throw SpecError(where + ": one block per level required");
  std::vector<RatMatrix> blocks;
  for (std::size_t i = 0; i < filt.levels(); ++i)
    blocks.push_back(parse_matrix(jb[i], filt.block_dim(i), params, where + ".blocks[" + std::to_string(i) + "]"));
  std::vector<std::vector<MultiPoly>> tails;
  for (std::size_t i = 0; i < filt.levels(); ++i)
    tails.emplace_back(filt.block_dim(i), MultiPoly(filt.offset(i)));
  if (j.contains("tails") && !j["tails"].is_null()) {
    const auto& jt = j["tails"];
    if (!jt.is_array() || jt.size() != filt.levels()) throw SpecError(where + ": one tail list per level required");
    for (std::size_t i = 0; i < filt.levels(); ++i) {
      if (jt[i].is_null()) continue;
      if (!jt[i].is_array() || jt[i].size() != filt.block_dim(i))
        throw SpecError(where + ": level " + std::to_string(i + 1) + " needs " + std::to_string(filt.block_dim(i)) +
                        " tail polynomials");
      for (std::size_t r = 0; r < filt.block_dim(i); ++r)
        tails[i][r] = parse_poly(jt[i][r], filt.offset(i), params,
                                 where + ".tails[" + std::to_string(i) + "][" + std::to_string(r) + "]");
    }
  }
  try {
    return CanonicalMap(filt, std::move(blocks), std::move(tails));
  } catch (const std::exception& e) {
    throw SpecError(where + ": " + e.what());
  }
}

inline Word parse_word(const Json& j, const std::string& where) {
  Word w;
  if (j.is_null()) return w;
  if (!j.is_array()) throw SpecError(where + ": word must be a list of [name, exponent] pairs");
  for (const auto& f : j) {
    if (f.is_string()) {
      w.emplace_back(f.get<std::string>(), 1);
      continue;
    }
    if (!f.is_array() || f.size() != 2 || !f[0].is_string() || !f[1].is_number_integer())
      throw SpecError(where + ": word factor must be \"name\" or [\"name\", exponent]");
    w.emplace_back(f[0].get<std::string>(), static_cast<long>(f[1].get<long long>()));
  }
  return w;
}

inline HypothesisStatus parse_status(const Json& j, const std::string& where) {
  if (j.is_null()) return HypothesisStatus::None;
  std::string s = j.get<std::string>();
  if (s == "none") return HypothesisStatus::None;
  if (s == "assert") return HypothesisStatus::Asserted;
  if (s == "certify") return HypothesisStatus::CertifyRequested;
  throw SpecError(where + ": hypothesis status must be none/assert/certify");
}

}  // namespace detail

inline void check_param_constraints(const SpecFile& spec) {
  for (const auto& [name, constraint] : spec.param_constraints) {
    auto it = spec.params_used.find(name);
    if (it == spec.params_used.end()) continue;
    const Rat& v = it->second;
    if (constraint == "odd" || constraint == "even") {
      if (!is_integer(v)) throw SpecError("parameter '" + name + "' must be an integer");
      bool even = to_int(v) % 2 == 0;
      if ((constraint == "odd") == even)
        throw SpecError("parameter '" + name + "' must be " + constraint + ", got " + rat_str(v));
    } else if (constraint == "nonzero") {
      if (v == 0) throw SpecError("parameter '" + name + "' must be nonzero");
    } else {
      throw SpecError("unknown parameter constraint '" + constraint + "'");
    }
  }
}

// Parses, substitutes parameters and validates: canonical structure of every
// map, group-element axioms for generators and reps, rep[0] = identity,
// index consistency, and the equivariance of the lift against the declared
// generator images.
inline SpecFile load_spec(const Json& doc, const ParamMap& params) {
  SpecFile spec;
  spec.source = doc;
  if (!doc.is_object()) throw SpecError("top level must be an object");
  if (!doc.contains("version") || doc["version"].get<std::string>() != "nielsen-spec/1")
    throw SpecError("unsupported or missing version (want \"nielsen-spec/1\")");
  spec.version = doc["version"].get<std::string>();
  spec.name = doc.value("name", std::string());
  spec.description = doc.value("description", std::string());

  if (doc.contains("params")) {
    for (const auto& [pname, pval] : doc["params"].items()) {
      spec.param_names.push_back(pname);
      if (pval.is_object() && pval.contains("constraint"))
        spec.param_constraints[pname] = pval["constraint"].get<std::string>();
      if (params.find(pname) == params.end()) {
        if (pval.is_object() && pval.contains("default"))
          spec.params_used[pname] = detail::parse_entry(pval["default"], {}, "params." + pname + ".default");
        else
          throw SpecError("parameter '" + pname + "' has no value (pass --param " + pname + "=...)");
      } else {
        spec.params_used[pname] = params.at(pname);
      }
    }
  }
  for (const auto& [k, v] : params)
    if (spec.params_used.find(k) == spec.params_used.end())
      throw SpecError("parameter '" + k + "' is not declared by the spec file");
  check_param_constraints(spec);

  if (!doc.contains("filtration")) throw SpecError("missing filtration");
  std::vector<std::size_t> dims;
  for (const auto& d : doc["filtration"]) {
    if (!d.is_number_integer() || d.get<long long>() <= 0) throw SpecError("filtration dims must be positive integers");
    dims.push_back(static_cast<std::size_t>(d.get<long long>()));
  }
  spec.group.filtration = Filtration(dims);

  if (!doc.contains("maps") || !doc["maps"].is_object()) throw SpecError("missing maps");
  std::map<std::string, CanonicalMap> maps;
  for (const auto& [mname, mjson] : doc["maps"].items())
    maps.emplace(mname, detail::parse_map(mjson, spec.group.filtration, spec.params_used, "maps." + mname));

  if (!doc.contains("group") || !doc["group"].is_object()) throw SpecError("missing group");
  const Json& jg = doc["group"];
  if (!jg.contains("level_generators")) throw SpecError("group.level_generators required");
  // only maps referenced from the group sections become group generators;
  // the lift and the endomorphism images are validated separately
  auto reference = [&](const std::string& s, const std::string& where) {
    if (maps.find(s) == maps.end()) throw SpecError(where + ": '" + s + "' is not a declared map");
    spec.group.generators.emplace(s, maps.at(s));
  };
  for (const auto& lvl : jg["level_generators"]) {
    std::vector<std::string> names;
    for (const auto& n : lvl) {
      std::string s = n.get<std::string>();
      reference(s, "group.level_generators");
      names.push_back(s);
    }
    spec.group.level_generators.push_back(names);
  }
  for (const char* key : {"coset_reps", "net_coset_reps", "k_generators"}) {
    if (!jg.contains(key) || jg[key].is_null()) continue;
    for (const auto& w : jg[key]) {
      Word word = detail::parse_word(w, std::string("group.") + key);
      for (const auto& [name, e] : word) reference(name, std::string("group.") + key);
    }
  }
  spec.group.filtration_exhausts_group = jg.value("filtration_exhausts_group", true);

  auto resolve_named_word = [&](const Json& j, const std::string& where) -> NamedMap {
    Word w = detail::parse_word(j, where);
    return NamedMap{word_str(w), spec.group.resolve_word(w)};
  };

  if (!jg.contains("coset_reps")) throw SpecError("group.coset_reps required");
  for (std::size_t i = 0; i < jg["coset_reps"].size(); ++i)
    spec.group.coset_reps.push_back(resolve_named_word(jg["coset_reps"][i], "group.coset_reps[" + std::to_string(i) + "]"));
  if (jg.contains("index")) {
    std::size_t declared = jg["index"].get<std::size_t>();
    if (declared != spec.group.coset_reps.size())
      throw SpecError("declared index " + std::to_string(declared) + " does not match " +
                      std::to_string(spec.group.coset_reps.size()) + " coset representatives");
  }
  if (jg.contains("net_coset_reps") && !jg["net_coset_reps"].is_null()) {
    std::vector<NamedMap> reps;
    for (std::size_t i = 0; i < jg["net_coset_reps"].size(); ++i)
      reps.push_back(resolve_named_word(jg["net_coset_reps"][i], "group.net_coset_reps[" + std::to_string(i) + "]"));
    spec.group.net_coset_reps = std::move(reps);
  }
  if (jg.contains("k_generators"))
    for (std::size_t i = 0; i < jg["k_generators"].size(); ++i)
      spec.group.k_generators.push_back(resolve_named_word(jg["k_generators"][i], "group.k_generators[" + std::to_string(i) + "]"));

  if (doc.contains("hypotheses")) {
    const Json& jh = doc["hypotheses"];
    spec.group.hypotheses.k_fully_invariant = jh.value("k_fully_invariant", false);
    if (jh.contains("nr")) spec.group.hypotheses.nr = detail::parse_status(jh["nr"], "hypotheses.nr");
    if (jh.contains("net")) spec.group.hypotheses.net = detail::parse_status(jh["net"], "hypotheses.net");
    if (jh.contains("nr_levels"))
      for (const auto& l : jh["nr_levels"]) {
        std::size_t lvl = l.get<std::size_t>();
        if (lvl < 1 || lvl > spec.group.filtration.levels()) throw SpecError("nr_levels entry out of range");
        spec.group.hypotheses.nr_levels.push_back(lvl - 1);
      }
    spec.group.hypotheses.word_bound = jh.value("word_bound", 4L);
    spec.group.hypotheses.exponent_bound = jh.value("exponent_bound", 2L);
    if (jh.contains("notes"))
      for (const auto& n : jh["notes"]) spec.group.hypotheses.notes.push_back(n.get<std::string>());
  }

  try {
    spec.group.validate();
  } catch (const std::exception& e) {
    throw SpecError(std::string("group validation: ") + e.what());
  }

  if (!doc.contains("endo") || !doc["endo"].is_object()) throw SpecError("missing endo");
  const Json& je = doc["endo"];
  if (!je.contains("lift")) throw SpecError("endo.lift required");
  std::string lift_name = je["lift"].get<std::string>();
  if (maps.find(lift_name) == maps.end()) throw SpecError("endo.lift '" + lift_name + "' is not a declared map");
  std::map<std::string, CanonicalMap> images;
  if (je.contains("images"))
    for (const auto& [gname, iname] : je["images"].items()) {
      if (spec.group.generators.find(gname) == spec.group.generators.end())
        throw SpecError("endo image given for unknown generator '" + gname + "'");
      std::string target = iname.get<std::string>();
      if (maps.find(target) == maps.end()) throw SpecError("endo image '" + target + "' is not a declared map");
      images.emplace(gname, maps.at(target));
    }
  spec.endo = EndoSpec(maps.at(lift_name), std::move(images));
  try {
    spec.endo.validate_equivariance(spec.group);
  } catch (const std::exception& e) {
    throw SpecError(std::string("endomorphism validation: ") + e.what());
  }
  return spec;
}

inline SpecFile load_spec_file(const std::string& path, const ParamMap& params) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const std::exception& e) {
    throw SpecError("JSON parse error in '" + path + "': " + e.what());
  }
  return load_spec(doc, params);
}

// Canonical re-serialization of the source document (stable field order,
// 2-space indentation). load(serialize(load(f))) == load(f).
inline std::string serialize_spec(const SpecFile& spec) { return spec.source.dump(2) + "\n"; }

}  // namespace nfp
