#pragma once

// Command dispatch and report rendering. Reports are built as ordered JSON
// and rendered to text deterministically; re-running a command on identical
// input yields byte-identical output.

#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nfp/fixedpoints.hpp"
#include "nfp/group.hpp"
#include "nfp/nielsen.hpp"
#include "nfp/reidemeister.hpp"
#include "nfp/specfile.hpp"
#include "nfp/spectra.hpp"

namespace nfp {

struct RunOptions {
  std::string route = "invariant";  // nielsen: invariant | net | jacobian
  std::size_t samples = 10;
  long word_bound = 0;      // 0: take from the spec file
  long exponent_bound = 0;  // 0: take from the spec file
  long box_radius = 0;      // 0: derive per matrix
  unsigned long seed = 20240901;
};

struct Report {
  Json body = Json::object();
  int exit_code = 0;

  std::string text() const {
    std::ostringstream os;
    render(body, 0, os);
    return os.str();
  }

 private:
  static bool scalar(const Json& j) { return !j.is_object() && !j.is_array(); }
  static std::string scalar_str(const Json& j) {
    if (j.is_string()) return j.get<std::string>();
    return j.dump();
  }
  static void render(const Json& j, int indent, std::ostringstream& os) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    if (j.is_object()) {
      for (const auto& [k, v] : j.items()) {
        if (scalar(v)) {
          os << pad << k << ": " << scalar_str(v) << "\n";
        } else if (v.is_array() && all_scalar(v)) {
          os << pad << k << ": " << inline_array(v) << "\n";
        } else {
          os << pad << k << ":\n";
          render(v, indent + 2, os);
        }
      }
    } else if (j.is_array()) {
      for (const auto& v : j) {
        if (scalar(v)) {
          os << pad << "- " << scalar_str(v) << "\n";
        } else {
          os << pad << "-\n";
          render(v, indent + 2, os);
        }
      }
    } else {
      os << pad << scalar_str(j) << "\n";
    }
  }
  static bool all_scalar(const Json& a) {
    for (const auto& v : a)
      if (!scalar(v)) return false;
    return true;
  }
  static std::string inline_array(const Json& a) {
    std::string s = "[";
    bool first = true;
    for (const auto& v : a) {
      if (!first) s += ", ";
      s += scalar_str(v);
      first = false;
    }
    return s + "]";
  }
};

namespace detail {

inline Json params_json(const SpecFile& spec) {
  Json j = Json::object();
  for (const auto& [k, v] : spec.params_used) j[k] = rat_str(v);
  return j;
}

inline Json matrix_json(const RatMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(rat_str(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

// Per-level NR action generators: blocks of the K-generators at the declared
// nr_levels.
inline std::vector<std::vector<IntMatrix>> nr_actions(const GroupSpec& g) {
  std::vector<std::vector<IntMatrix>> actions;
  for (std::size_t lvl : g.hypotheses.nr_levels) {
    std::vector<IntMatrix> gens;
    for (const auto& kg : g.k_generators) {
      const RatMatrix& b = kg.map.block(lvl);
      if (!is_integral(b)) throw std::domain_error("K-generator block is not integral at an NR level");
      gens.push_back(to_integer(b));
    }
    actions.push_back(std::move(gens));
  }
  return actions;
}

inline Certification certify_nr_spec(const GroupSpec& g, long word_bound) {
  auto actions = nr_actions(g);
  if (actions.empty()) {
    Certification c;
    c.verdict = Certification::Verdict::Certified;
    c.method = "no torsion-eligible levels declared (abelian or trivial N)";
    return c;
  }
  Certification c = nr_certify(actions, word_bound);
  if (c.witness.has_value()) c.witness->level = g.hypotheses.nr_levels.at(c.witness->level);
  return c;
}

inline Certification certify_net_spec(const GroupSpec& g, long exponent_bound) {
  Certification overall;
  overall.verdict = Certification::Verdict::Certified;
  overall.method = "per level and K'-generator";
  for (std::size_t lvl = 0; lvl < g.filtration.levels(); ++lvl) {
    for (const auto& kg : g.k_generators) {
      const RatMatrix& b = kg.map.block(lvl);
      if (!is_integral(b)) throw std::domain_error("K'-generator block is not integral");
      IntMatrix m = to_integer(b);
      if (m == IntMatrix::identity(m.rows())) continue;
      Certification c = net_certify(m, exponent_bound);
      if (c.witness.has_value()) c.witness->level = lvl;
      if (c.refuted()) return c;
      if (!c.certified()) overall = c;
    }
  }
  return overall;
}

inline Json certification_json(const Certification& c) {
  Json j = Json::object();
  j["verdict"] = c.verdict_str();
  j["method"] = c.method;
  if (c.witness.has_value()) j["witness"] = c.witness->str();
  return j;
}

// hypothesis block shared by the nielsen routes; returns exit code 2 on a
// refuted certification request
inline int hypothesis_status(const SpecFile& spec, const RunOptions& opt, bool need_nr, bool need_net, Json& out) {
  int code = 0;
  const Hypotheses& hyp = spec.group.hypotheses;
  Json j = Json::object();
  j["k_fully_invariant"] = hyp.k_fully_invariant ? "declared" : "not declared";
  auto describe = [&](HypothesisStatus st, bool needed, const std::string& kind) -> Json {
    Json h = Json::object();
    if (st == HypothesisStatus::None) {
      h["status"] = needed ? "missing" : "not declared";
      return h;
    }
    if (st == HypothesisStatus::Asserted) {
      h["status"] = "asserted (unverified); results conditional on the assertion";
      return h;
    }
    long wb = opt.word_bound > 0 ? opt.word_bound : hyp.word_bound;
    long eb = opt.exponent_bound > 0 ? opt.exponent_bound : hyp.exponent_bound;
    Certification c = kind == "nr" ? certify_nr_spec(spec.group, wb) : certify_net_spec(spec.group, eb);
    h["status"] = c.certified() ? "certified" : (c.refuted() ? "refuted" : "inconclusive; results conditional");
    h["certification"] = certification_json(c);
    if (c.refuted()) code = 2;
    return h;
  };
  if (need_nr) j["nr"] = describe(hyp.nr, true, "nr");
  if (need_net) j["net"] = describe(hyp.net, true, "net");
  out["hypotheses"] = j;
  return code;
}

inline Json nielsen_result_json(const NielsenResult& r) {
  Json j = Json::object();
  j["value"] = r.value.get_str();
  j["index"] = r.index;
  Json terms = Json::array();
  for (const auto& t : r.terms) {
    Json tj = Json::object();
    tj["rep"] = t.rep_name;
    Json dets = Json::array();
    for (const auto& d : t.level_dets) dets.push_back(d.get_str());
    tj["level_dets"] = dets;
    tj["abs_product"] = t.product_abs.get_str();
    terms.push_back(tj);
  }
  j["coset_terms"] = terms;
  return j;
}

}  // namespace detail

inline Report run_command(const std::string& command, const SpecFile& spec, const RunOptions& opt = {}) {
  Report rep;
  Json& body = rep.body;
  body["command"] = command;
  body["spec"] = spec.name;
  body["params"] = detail::params_json(spec);

  const Hypotheses& hyp = spec.group.hypotheses;

  if (command == "validate") {
    body["status"] = "ok";
    body["levels"] = spec.group.filtration.levels();
    Json dims = Json::array();
    for (auto d : spec.group.filtration.block_dims()) dims.push_back(d);
    body["block_dims"] = dims;
    body["index"] = spec.group.index();
    Json gens = Json::array();
    for (const auto& [n, m] : spec.group.generators) gens.push_back(n);
    body["generators"] = gens;
    if (!hyp.notes.empty()) body["notes"] = hyp.notes;
    return rep;
  }

  if (command == "linearise") {
    Json lv = Json::array();
    for (std::size_t i = 0; i < spec.endo.lift().levels(); ++i)
      lv.push_back(detail::matrix_json(spec.endo.lift().block(i)));
    body["lift_blocks"] = lv;
    Json per_coset = Json::array();
    for (const auto& repm : spec.group.coset_reps) {
      Json cj = Json::object();
      cj["rep"] = repm.name;
      CanonicalMap composed = compose_maps(repm.map, spec.endo.lift());
      Json blocks = Json::array();
      for (std::size_t i = 0; i < composed.levels(); ++i) blocks.push_back(detail::matrix_json(composed.block(i)));
      cj["blocks"] = blocks;
      per_coset.push_back(cj);
    }
    body["coset_blocks"] = per_coset;
    return rep;
  }

  if (command == "nielsen") {
    body["route"] = opt.route;
    if (opt.route == "invariant") {
      rep.exit_code = detail::hypothesis_status(spec, opt, true, false, body);
      body["result"] = detail::nielsen_result_json(nielsen_average_invariant(spec.group, spec.endo));
    } else if (opt.route == "net") {
      rep.exit_code = detail::hypothesis_status(spec, opt, false, true, body);
      body["result"] = detail::nielsen_result_json(nielsen_average_net(spec.group, spec.endo));
    } else if (opt.route == "jacobian") {
      rep.exit_code = detail::hypothesis_status(spec, opt, true, false, body);
      JacobianRouteResult jr = nielsen_via_jacobian(spec.group, spec.endo, opt.samples, opt.seed);
      body["result"] = detail::nielsen_result_json(jr.result);
      body["samples"] = jr.sample_points.size();
      body["determinant_point_independence"] = "verified";
      body["agrees_with_linearisation_route"] = true;
    } else {
      throw std::invalid_argument("unknown nielsen route '" + opt.route + "'");
    }
    if (!hyp.notes.empty()) body["notes"] = hyp.notes;
    return rep;
  }

  if (command == "reidemeister") {
    ReidemeisterResult r = reidemeister_filtered(spec.group, spec.endo, true);
    body["count"] = r.count.str();
    if (r.count.is_finite()) {
      Json reps = Json::array();
      for (const auto& m : r.representatives) reps.push_back(m.str());
      body["representatives"] = reps;
    }
    if (!hyp.notes.empty()) body["notes"] = hyp.notes;
    return rep;
  }

  if (command == "fixed-points") {
    QuotientFixCount q = count_fixed_points_on_quotient(spec.group, spec.endo);
    if (q.uncountable) {
      body["fixed_points"] = "uncountable";
    } else {
      body["fixed_points"] = q.count.str();
      body["equals_nielsen_number"] = true;
    }
    body["nielsen_value"] = q.nielsen_value.get_str();
    if (!hyp.notes.empty()) body["notes"] = hyp.notes;
    return rep;
  }

  if (command == "certify-nr") {
    long wb = opt.word_bound > 0 ? opt.word_bound : hyp.word_bound;
    Certification c = detail::certify_nr_spec(spec.group, wb);
    body["certification"] = detail::certification_json(c);
    rep.exit_code = c.refuted() ? 2 : 0;
    return rep;
  }

  if (command == "certify-net") {
    long eb = opt.exponent_bound > 0 ? opt.exponent_bound : hyp.exponent_bound;
    Certification c = detail::certify_net_spec(spec.group, eb);
    body["certification"] = detail::certification_json(c);
    rep.exit_code = c.refuted() ? 2 : 0;
    return rep;
  }

  if (command == "oracle") {
    // SNF class counts against the union-find brute force, per coset and level
    Json checks = Json::array();
    bool all_ok = true;
    for (const auto& repm : spec.group.coset_reps) {
      CanonicalMap composed = compose_maps(repm.map, spec.endo.lift());
      for (std::size_t i = 0; i < composed.levels(); ++i) {
        if (!is_integral(composed.block(i))) continue;
        IntMatrix f = to_integer(composed.block(i));
        IntMatrix m = IntMatrix::identity(f.rows()) - f;
        Json cj = Json::object();
        cj["rep"] = repm.name;
        cj["level"] = i + 1;
        if (det(m) == 0) {
          cj["classes"] = "infinite";
        } else {
          ReidemeisterResult ra = reidemeister_abelian(f);
          long radius = opt.box_radius > 0 ? opt.box_radius : default_box_radius(m);
          Count bf = brute_force_coker(m, radius);
          cj["snf_count"] = ra.count.str();
          cj["brute_force_count"] = bf.str();
          bool ok = ra.count == bf;
          cj["agree"] = ok;
          all_ok = all_ok && ok;
        }
        checks.push_back(cj);
      }
    }
    body["checks"] = checks;
    body["status"] = all_ok ? "ok" : "mismatch";
    if (!all_ok) rep.exit_code = 1;
    return rep;
  }

  throw std::invalid_argument("unknown command '" + command + "'");
}

}  // namespace nfp
