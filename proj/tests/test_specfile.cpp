#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nfp/report.hpp"
#include "nfp/specfile.hpp"

using namespace nfp;

namespace {

std::string data_path(const std::string& name) { return std::string(NFP_DATA_DIR) + "/" + name; }

ParamMap params(std::initializer_list<std::pair<std::string, long>> kv) {
  ParamMap p;
  for (const auto& [k, v] : kv) p[k] = Rat(v);
  return p;
}

}  // namespace

TEST_CASE("bundled files load and validate") {
  CHECK_NOTHROW(load_spec_file(data_path("klein_bottle.json"), params({{"a", 2}, {"c", 3}})));
  CHECK_NOTHROW(load_spec_file(data_path("big_example.json"), params({{"k", 2}})));
  CHECK_NOTHROW(load_spec_file(data_path("big_example_polymap.json"), params({{"k", -1}})));
  CHECK_NOTHROW(load_spec_file(data_path("heisenberg_nil.json"), {}));
}

TEST_CASE("parameter handling") {
  // missing parameter
  CHECK_THROWS_WITH_AS(load_spec_file(data_path("big_example.json"), {}),
                       doctest::Contains("parameter 'k' has no value"), SpecError);
  // undeclared parameter
  CHECK_THROWS_AS(load_spec_file(data_path("big_example.json"), params({{"k", 1}, {"zz", 1}})), SpecError);
  // parity constraint: c must be odd
  CHECK_THROWS_WITH_AS(load_spec_file(data_path("klein_bottle.json"), params({{"a", 2}, {"c", 2}})),
                       doctest::Contains("must be odd"), SpecError);
}

TEST_CASE("schema violations carry locations") {
  Json doc = Json::parse(R"({
    "version": "nielsen-spec/1",
    "name": "bad",
    "filtration": [1, 1],
    "maps": {
      "g": { "blocks": [[[1]], [[2]]], "tails": [[[{"c": 1, "e": []}]], null] },
      "z": { "blocks": [[[1]], [[1]]], "tails": [null, [[{"c": 1, "e": []}]]] },
      "lift": { "blocks": [[[1]], [[1]]], "tails": null }
    },
    "group": { "level_generators": [["g"], ["z"]], "coset_reps": [[]] },
    "endo": { "lift": "lift" }
  })");
  // generator's level-2 block has det 2: not in GL(1, Z), level reported
  CHECK_THROWS_WITH_AS(load_spec(doc, {}), doctest::Contains("level 2"), SpecError);

  Json bad_version = doc;
  bad_version["version"] = "nielsen-spec/99";
  CHECK_THROWS_WITH_AS(load_spec(bad_version, {}), doctest::Contains("version"), SpecError);

  Json bad_index = doc;
  bad_index["maps"]["g"]["blocks"][0][0][0] = 1;
  bad_index["group"]["index"] = 3;
  CHECK_THROWS_WITH_AS(load_spec(bad_index, {}), doctest::Contains("index"), SpecError);
}

TEST_CASE("equivariance validation rejects inconsistent images") {
  Json doc = Json::parse(R"({
    "version": "nielsen-spec/1",
    "name": "bad_endo",
    "filtration": [1],
    "maps": {
      "g": { "blocks": [[[1]]], "tails": [[[{"c": 1, "e": []}]]] },
      "lift": { "blocks": [[[2]]], "tails": null },
      "wrong": { "blocks": [[[1]]], "tails": [[[{"c": 3, "e": []}]]] }
    },
    "group": { "level_generators": [["g"]], "coset_reps": [[]] },
    "endo": { "lift": "lift", "images": { "g": "wrong" } }
  })");
  // lift(g(x)) = 2x + 2 but wrong(lift(x)) = 2x + 3
  CHECK_THROWS_WITH_AS(load_spec(doc, {}), doctest::Contains("equivariance"), SpecError);
}

TEST_CASE("round trip: serialize then load yields the same model") {
  SpecFile s1 = load_spec_file(data_path("klein_bottle.json"), params({{"a", 2}, {"c", 3}}));
  std::string text = serialize_spec(s1);
  Json doc = Json::parse(text);
  SpecFile s2 = load_spec(doc, params({{"a", 2}, {"c", 3}}));
  CHECK(serialize_spec(s2) == text);
  CHECK(s2.group.index() == s1.group.index());
  CHECK(s2.endo.lift() == s1.endo.lift());
}

TEST_CASE("cli commands: documented example values") {
  SpecFile big2 = load_spec_file(data_path("big_example.json"), params({{"k", 2}}));
  RunOptions opt;
  Report r = run_command("nielsen", big2, opt);
  CHECK(r.body["result"]["value"] == "12");
  CHECK(r.exit_code == 0);

  SpecFile kleinm = load_spec_file(data_path("klein_bottle.json"), params({{"a", -1}, {"c", -1}}));
  Report rr = run_command("reidemeister", kleinm, opt);
  CHECK(rr.body["count"] == "infinite");

  SpecFile big1 = load_spec_file(data_path("big_example.json"), params({{"k", 1}}));
  RunOptions jopt;
  jopt.route = "jacobian";
  jopt.samples = 10;
  Report rj = run_command("nielsen", big1, jopt);
  CHECK(rj.body["result"]["value"] == "6");
  CHECK(rj.body["determinant_point_independence"] == "verified");
}

TEST_CASE("cli commands: routes, certifications, oracle, fixed points") {
  RunOptions opt;
  SpecFile klein = load_spec_file(data_path("klein_bottle.json"), params({{"a", 2}, {"c", 3}}));

  RunOptions netopt;
  netopt.route = "net";
  CHECK(run_command("nielsen", klein, netopt).body["result"]["value"] == "4");

  Report fx = run_command("fixed-points", klein, opt);
  CHECK(fx.body["fixed_points"] == "4");
  CHECK(fx.body["nielsen_value"] == "4");

  SpecFile big = load_spec_file(data_path("big_example.json"), params({{"k", 2}}));
  Report cnr = run_command("certify-nr", big, opt);
  CHECK(cnr.body["certification"]["verdict"] == "certified");
  CHECK(cnr.exit_code == 0);

  Report cnet = run_command("certify-net", big, opt);
  CHECK(cnet.body["certification"]["verdict"] == "inconclusive up to bound 2");

  Report orc = run_command("oracle", big, opt);
  CHECK(orc.body["status"] == "ok");

  Report lin = run_command("linearise", big, opt);
  CHECK(lin.body["lift_blocks"].size() == 2);

  Report val = run_command("validate", big, opt);
  CHECK(val.body["status"] == "ok");
}

TEST_CASE("the a = c = -1 run reports N = 2 with the note echoed") {
  SpecFile klein = load_spec_file(data_path("klein_bottle.json"), params({{"a", -1}, {"c", -1}}));
  Report n = run_command("nielsen", klein, {});
  CHECK(n.body["result"]["value"] == "2");
  REQUIRE(n.body.contains("notes"));
  std::string note = n.body["notes"][0].get<std::string>();
  CHECK(note.find("without dividing by the index 2 would print 4") != std::string::npos);
}

TEST_CASE("reports are byte identical across runs") {
  for (const char* cmd : {"validate", "nielsen", "reidemeister", "linearise"}) {
    SpecFile a = load_spec_file(data_path("big_example.json"), params({{"k", 2}}));
    SpecFile b = load_spec_file(data_path("big_example.json"), params({{"k", 2}}));
    Report ra = run_command(cmd, a, {});
    Report rb = run_command(cmd, b, {});
    CHECK(ra.text() == rb.text());
    CHECK(ra.body.dump() == rb.body.dump());
  }
}

TEST_CASE("heisenberg: nonlinear tails work through every route") {
  SpecFile h = load_spec_file(data_path("heisenberg_nil.json"), {});
  CHECK(run_command("nielsen", h, {}).body["result"]["value"] == "10");
  RunOptions jopt;
  jopt.route = "jacobian";
  CHECK(run_command("nielsen", h, jopt).body["result"]["value"] == "10");
  CHECK(run_command("reidemeister", h, {}).body["count"] == "10");
  Report fx = run_command("fixed-points", h, {});
  CHECK(fx.body["fixed_points"] == "10");
  Report cnet = run_command("certify-net", h, {});
  CHECK(cnet.body["certification"]["verdict"] == "certified");
}

TEST_CASE("invariant and jacobian routes agree on every bundled example") {
  struct Case {
    const char* file;
    ParamMap p;
  };
  std::vector<Case> cases = {
      {"big_example.json", params({{"k", 2}})},
      {"big_example_polymap.json", params({{"k", 2}})},
      {"klein_bottle.json", params({{"a", 2}, {"c", 3}})},
      {"heisenberg_nil.json", {}},
  };
  for (const auto& c : cases) {
    SpecFile spec = load_spec_file(data_path(c.file), c.p);
    RunOptions inv, jac;
    jac.route = "jacobian";
    Report ri = run_command("nielsen", spec, inv);
    Report rj = run_command("nielsen", spec, jac);
    CHECK(ri.body["result"]["value"] == rj.body["result"]["value"]);
  }
}

TEST_CASE("conjugated presentation agrees on counts and fixed points") {
  for (long k : {2L, -3L}) {
    SpecFile affine = load_spec_file(data_path("big_example.json"), params({{"k", k}}));
    SpecFile poly = load_spec_file(data_path("big_example_polymap.json"), params({{"k", k}}));
    Count ra = reidemeister_filtered(affine.group, affine.endo, false).count;
    Count rp = reidemeister_filtered(poly.group, poly.endo, false).count;
    CHECK(ra == rp);
    QuotientFixCount qa = count_fixed_points_on_quotient(affine.group, affine.endo);
    QuotientFixCount qp = count_fixed_points_on_quotient(poly.group, poly.endo);
    REQUIRE(!qa.uncountable);
    REQUIRE(!qp.uncountable);
    CHECK(qa.count == qp.count);
  }
}

TEST_CASE("coarse one-block Klein presentation: same average, no whole-group recursion") {
  // K = Z x 2Z as a single level; z translates by e1, t^2 by 2 e2, t is the
  // nontrivial coset representative. The filtration covers only K, so the
  // averaging formula applies but the whole-group recursion must refuse.
  GroupSpec g;
  g.filtration = Filtration({2});
  CanonicalMap z(g.filtration, {RatMatrix::identity(2)},
                 {{MultiPoly::constant(0, Rat(1)), MultiPoly::constant(0, Rat(0))}});
  CanonicalMap t2(g.filtration, {RatMatrix::identity(2)},
                  {{MultiPoly::constant(0, Rat(0)), MultiPoly::constant(0, Rat(2))}});
  CanonicalMap t(g.filtration, {RatMatrix{{Rat(-1), Rat(0)}, {Rat(0), Rat(1)}}},
                 {{MultiPoly::constant(0, Rat(0)), MultiPoly::constant(0, Rat(1))}});
  g.generators.emplace("z", z);
  g.generators.emplace("t2", t2);
  g.generators.emplace("t", t);
  g.level_generators = {{"z", "t2"}};
  g.coset_reps = {{"id", CanonicalMap::identity(g.filtration)}, {"t", t}};
  g.k_generators = {{"z", z}, {"t2", t2}};
  g.hypotheses.k_fully_invariant = true;
  g.hypotheses.nr = HypothesisStatus::Asserted;
  g.filtration_exhausts_group = false;
  g.validate();

  for (long a : {2L, -1L, 3L})
    for (long c : {3L, -1L}) {
      CanonicalMap lift(g.filtration, {RatMatrix{{Rat(a), Rat(0)}, {Rat(0), Rat(c)}}},
                        {{MultiPoly(0), MultiPoly(0)}});
      EndoSpec endo(lift);
      SpecFile fine = load_spec_file(data_path("klein_bottle.json"),
                                     params({{"a", a}, {"c", c}}));
      CHECK(nielsen_average_invariant(g, endo).value ==
            nielsen_average_invariant(fine.group, fine.endo).value);
      CHECK_THROWS_AS(reidemeister_filtered(g, endo, false), std::domain_error);
    }
}
