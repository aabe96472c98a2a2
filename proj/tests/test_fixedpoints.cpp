#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nfp/fixedpoints.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace nfp;

namespace {

CanonicalMap scalar_map(Rat scale, Rat shift) {
  Filtration f({1});
  return CanonicalMap(f, {RatMatrix{{scale}}}, {{MultiPoly::constant(0, shift)}});
}

}  // namespace

TEST_CASE("solve: pinned scalar cases") {
  FixSetStructure doubling = solve_fixed_points(scalar_map(Rat(2), Rat(0)));
  CHECK(doubling.kind == FixSetStructure::Kind::Unique);
  CHECK(doubling.point == std::vector<Rat>{Rat(0)});

  FixSetStructure shift = solve_fixed_points(scalar_map(Rat(1), Rat(1)));
  CHECK(shift.kind == FixSetStructure::Kind::Empty);

  FixSetStructure identity = solve_fixed_points(scalar_map(Rat(1), Rat(0)));
  CHECK(identity.kind == FixSetStructure::Kind::PositiveDimensional);
}

TEST_CASE("solve: the one-block Klein map (r1, r2) -> (r1, -r2 + 1)") {
  Filtration f({1, 1});
  CanonicalMap m(f, {RatMatrix::identity(1), RatMatrix{{Rat(-1)}}},
                 {{MultiPoly(0)}, {MultiPoly::constant(1, Rat(1))}});
  FixSetStructure s = solve_fixed_points(m);
  REQUIRE(s.kind == FixSetStructure::Kind::PositiveDimensional);
  CHECK(s.first_degenerate_level == 0);
  REQUIRE(s.kernel_basis.size() == 1);
  CHECK(s.kernel_basis[0] == std::vector<Rat>{Rat(1)});
  REQUIRE(s.num_parameters >= 1);

  // the certificate produces distinct fixed points on demand
  std::vector<Rat> p0 = s.point_at(std::vector<Rat>(s.num_parameters, Rat(0)));
  std::vector<Rat> p1 = s.point_at([&] {
    std::vector<Rat> v(s.num_parameters, Rat(0));
    v[0] = 1;
    return v;
  }());
  CHECK(m.apply(p0) == p0);
  CHECK(m.apply(p1) == p1);
  CHECK(p0 != p1);
  CHECK(p0[1] == make_rat(1, 2));
}

TEST_CASE("solve: unique points are verified exactly, empties hold at random points") {
  auto rg = oracle::rng(91);
  Filtration f({1, 2});
  MultiPoly sq(1);
  sq.add_term({2}, Rat(1));
  CanonicalMap m(f, {RatMatrix{{Rat(2)}}, RatMatrix{{Rat(0), Rat(1)}, {Rat(-1), Rat(3)}}},
                 {{MultiPoly::constant(0, Rat(3))}, {sq, MultiPoly::constant(1, Rat(-2))}});
  FixSetStructure s = solve_fixed_points(m);
  REQUIRE(s.kind == FixSetStructure::Kind::Unique);
  CHECK(m.apply(s.point) == s.point);

  CanonicalMap empty_map(f, {RatMatrix{{Rat(1)}}, RatMatrix::identity(2)},
                         {{MultiPoly::constant(0, Rat(2))}, {MultiPoly(1), MultiPoly(1)}});
  FixSetStructure e = solve_fixed_points(empty_map);
  REQUIRE(e.kind == FixSetStructure::Kind::Empty);
  for (int it = 0; it < 50; ++it) {
    std::vector<Rat> x = oracle::random_point(rg, 3);
    CHECK(empty_map.apply(x) != x);
  }
}

TEST_CASE("solve: singular-consistent level feeding a later level") {
  // (x1, x2) -> (x1, x2 + x1): level 1 positive dimensional, level 2
  // consistent only on the subvariety x1 = 0 (affine constraint handling)
  Filtration f({1, 1});
  MultiPoly x1(1);
  x1.add_term({1}, Rat(1));
  CanonicalMap m(f, {RatMatrix::identity(1), RatMatrix::identity(1)}, {{MultiPoly(0)}, {x1}});
  FixSetStructure s = solve_fixed_points(m);
  // fixed set is the line x1 = 0: still positive dimensional in x2
  REQUIRE(s.kind == FixSetStructure::Kind::PositiveDimensional);
  std::vector<Rat> p = s.point_at(std::vector<Rat>(s.num_parameters, Rat(5)));
  CHECK(m.apply(p) == p);
  CHECK(p[0] == Rat(0));
}

TEST_CASE("quotient counts: Klein bottle, identity, circle doubling") {
  GroupSpec klein = fixtures::klein_group();
  QuotientFixCount q23 = count_fixed_points_on_quotient(klein, fixtures::klein_endo(2, 3));
  CHECK(!q23.uncountable);
  CHECK(q23.count == Count(Int(4)));
  CHECK(q23.nielsen_value == 4);

  QuotientFixCount qid = count_fixed_points_on_quotient(klein, fixtures::klein_endo(1, 1));
  CHECK(qid.uncountable);

  // a = c = -1: R infinite, fix(rho(t) lift) positive dimensional
  QuotientFixCount qm = count_fixed_points_on_quotient(klein, fixtures::klein_endo(-1, -1));
  CHECK(qm.uncountable);

  GroupSpec circle = fixtures::circle_group();
  QuotientFixCount qc = count_fixed_points_on_quotient(circle, fixtures::circle_endo(2));
  CHECK(!qc.uncountable);
  CHECK(qc.count == Count(Int(1)));

  QuotientFixCount qci = count_fixed_points_on_quotient(circle, fixtures::circle_endo(1));
  CHECK(qci.uncountable);
}

TEST_CASE("trichotomy: no finite nonzero count away from N") {
  GroupSpec klein = fixtures::klein_group();
  for (long a : {-3L, -2L, 0L, 2L, 3L})
    for (long c : {-3L, 3L, 5L}) {
      NielsenResult n = nielsen_average_invariant(klein, fixtures::klein_endo(a, c));
      ReidemeisterResult r = reidemeister_filtered(klein, fixtures::klein_endo(a, c), false);
      if (!r.count.is_finite()) continue;
      QuotientFixCount q = count_fixed_points_on_quotient(klein, fixtures::klein_endo(a, c));
      REQUIRE(!q.uncountable);
      CHECK(q.count == Count(n.value));
    }
}

TEST_CASE("6-dim example: count matches 6|k|") {
  GroupSpec g = fixtures::big_group();
  for (long k : {2L, -2L, 3L}) {
    QuotientFixCount q = count_fixed_points_on_quotient(g, fixtures::big_endo(k));
    CHECK(!q.uncountable);
    CHECK(q.count == Count(Int(6 * std::labs(k))));
  }
}

TEST_CASE("singular level feeding a squared parameter still resolves") {
  // (x1, x2) -> (x1, x2 + x1^2): fixed set is the line x1 = 0
  Filtration f({1, 1});
  MultiPoly x1sq(1);
  x1sq.add_term({2}, Rat(1));
  CanonicalMap m(f, {RatMatrix::identity(1), RatMatrix::identity(1)}, {{MultiPoly(0)}, {x1sq}});
  FixSetStructure s = solve_fixed_points(m);
  REQUIRE(s.kind == FixSetStructure::Kind::PositiveDimensional);
  std::vector<Rat> p = s.point_at(std::vector<Rat>(s.num_parameters, Rat(7)));
  CHECK(m.apply(p) == p);
  CHECK(p[0] == Rat(0));
}

TEST_CASE("fuzz: solver output verifies against direct application") {
  auto rg = oracle::rng(92);
  Filtration f({1, 2, 1});
  std::uniform_int_distribution<long> block_pick(0, 4);
  int unique_seen = 0, empty_seen = 0, pd_seen = 0;
  for (int it = 0; it < 120; ++it) {
    // blocks drawn from a small pool including singular I - D cases
    std::vector<RatMatrix> blocks;
    blocks.push_back(RatMatrix{{Rat(block_pick(rg) - 2)}});
    RatMatrix mid(2, 2);
    mid(0, 0) = Rat(block_pick(rg) - 2);
    mid(0, 1) = Rat(block_pick(rg) - 2);
    mid(1, 1) = Rat(block_pick(rg) - 2);
    blocks.push_back(mid);
    blocks.push_back(RatMatrix{{Rat(block_pick(rg) - 2)}});
    std::vector<std::vector<MultiPoly>> tails;
    tails.push_back({oracle::random_poly(rg, 0, 0, 1)});
    tails.push_back({oracle::random_poly(rg, 1, 2, 2), oracle::random_poly(rg, 1, 2, 2)});
    tails.push_back({oracle::random_poly(rg, 3, 2, 2)});
    CanonicalMap m(f, blocks, tails);
    FixSetStructure s;
    try {
      s = solve_fixed_points(m);
    } catch (const std::domain_error&) {
      continue;  // nonlinear branching case: honestly unsupported
    }
    if (s.kind == FixSetStructure::Kind::Unique) {
      ++unique_seen;
      CHECK(m.apply(s.point) == s.point);
    } else if (s.kind == FixSetStructure::Kind::PositiveDimensional) {
      ++pd_seen;
      for (long trial = 0; trial < 3; ++trial) {
        std::vector<Rat> params(s.num_parameters, Rat(trial));
        std::vector<Rat> p = s.point_at(params);
        CHECK(m.apply(p) == p);
      }
    } else {
      ++empty_seen;
      for (int trial = 0; trial < 10; ++trial) {
        std::vector<Rat> x = oracle::random_point(rg, f.total_dim());
        CHECK(m.apply(x) != x);
      }
    }
  }
  // the pool must exercise all three outcomes
  CHECK(unique_seen > 0);
  CHECK(empty_seen > 0);
  CHECK(pd_seen > 0);
}
