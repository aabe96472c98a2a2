#pragma once

// Shared concrete data: the 6-dimensional solvmanifold matrices, the Klein
// bottle group, and builders for their GroupSpec/EndoSpec forms used across
// the suites.

#include <string>
#include <vector>

#include "nfp/canonical.hpp"
#include "nfp/group.hpp"
#include "nfp/matrix.hpp"
#include "nfp/multipoly.hpp"
#include "nfp/numeric.hpp"

namespace fixtures {

using namespace nfp;

inline IntMatrix matrix_a() {
  return IntMatrix{{-1, 0, 0, 0, 0},
                   {0, 0, 1, 0, 0},
                   {0, 0, 0, 1, 0},
                   {0, 0, 0, 0, 1},
                   {0, -1, 1, 1, 1}};
}

inline IntMatrix matrix_b(long k) {
  return IntMatrix{{k, 0, 0, 0, 0},
                   {0, -1, 1, 1, 0},
                   {0, 0, 0, -1, 1},
                   {0, 0, -1, 1, 0},
                   {0, -1, 1, 0, 0}};
}

// Klein bottle group over the filtration 1 < <z> < Pi, blocks [1, 1]:
// t: (x1, x2) -> (x1 + 1, -x2), z: (x1, x2) -> (x1, x2 + 1).
inline GroupSpec klein_group() {
  GroupSpec g;
  g.filtration = Filtration({1, 1});
  RatMatrix one = RatMatrix::identity(1);
  RatMatrix minus_one{{Rat(-1)}};

  CanonicalMap t(g.filtration, {one, minus_one},
                 {{MultiPoly::constant(0, Rat(1))}, {MultiPoly(1)}});
  CanonicalMap z(g.filtration, {one, one},
                 {{MultiPoly(0)}, {MultiPoly::constant(1, Rat(1))}});
  g.generators.emplace("t", t);
  g.generators.emplace("z", z);
  g.level_generators = {{"t"}, {"z"}};
  g.coset_reps = {{"id", CanonicalMap::identity(g.filtration)}, {"t", t}};
  g.k_generators = {{"t^2", power_map(t, 2)}, {"z", z}};
  g.hypotheses.k_fully_invariant = true;
  g.hypotheses.nr = HypothesisStatus::Asserted;
  g.hypotheses.net = HypothesisStatus::Asserted;
  g.validate();
  return g;
}

// lift of z -> z^a, t -> t^c: (x1, x2) -> (c x1, a x2)
inline EndoSpec klein_endo(long a, long c) {
  Filtration f({1, 1});
  CanonicalMap lift(f, {RatMatrix{{Rat(c)}}, RatMatrix{{Rat(a)}}}, {{MultiPoly(0)}, {MultiPoly(1)}});
  return EndoSpec(lift);
}

// Z^5 x| Z over the filtration 1 < Z^5 < Pi, blocks [1, 5]:
// t: (x1, v) -> (x1 + 1, A v), e_j: (x1, v) -> (x1, v + e_j).
inline GroupSpec big_group() {
  GroupSpec g;
  g.filtration = Filtration({1, 5});
  RatMatrix one = RatMatrix::identity(1);
  RatMatrix a = to_rational(matrix_a());

  CanonicalMap t(g.filtration, {one, a}, {{MultiPoly::constant(0, Rat(1))}, std::vector<MultiPoly>(5, MultiPoly(1))});
  g.generators.emplace("t", t);
  g.level_generators = {{"t"}, {}};
  for (std::size_t j = 0; j < 5; ++j) {
    std::vector<MultiPoly> tail2(5, MultiPoly(1));
    tail2[j] = MultiPoly::constant(1, Rat(1));
    CanonicalMap ej(g.filtration, {one, RatMatrix::identity(5)}, {{MultiPoly(0)}, tail2});
    std::string name = "e" + std::to_string(j + 1);
    g.generators.emplace(name, ej);
    g.level_generators[1].push_back(name);
  }
  g.coset_reps = {{"id", CanonicalMap::identity(g.filtration)}, {"t", t}};
  g.k_generators.push_back({"t^2", power_map(t, 2)});
  for (std::size_t j = 0; j < 5; ++j) {
    std::string name = "e" + std::to_string(j + 1);
    g.k_generators.push_back({name, g.generators.at(name)});
  }
  g.hypotheses.k_fully_invariant = true;
  g.hypotheses.nr = HypothesisStatus::Asserted;
  g.hypotheses.net = HypothesisStatus::Asserted;
  g.hypotheses.nr_levels = {1};
  g.validate();
  return g;
}

// lift of phi_k: (x1, v) -> (-x1, B_k v)
inline EndoSpec big_endo(long k) {
  Filtration f({1, 5});
  CanonicalMap lift(f, {RatMatrix{{Rat(-1)}}, to_rational(matrix_b(k))},
                    {{MultiPoly(0)}, std::vector<MultiPoly>(5, MultiPoly(1))});
  return EndoSpec(lift);
}

// rank-1 torus (circle) with the doubling map
inline GroupSpec circle_group() {
  GroupSpec g;
  g.filtration = Filtration({1});
  CanonicalMap z(g.filtration, {RatMatrix::identity(1)}, {{MultiPoly::constant(0, Rat(1))}});
  g.generators.emplace("z", z);
  g.level_generators = {{"z"}};
  g.coset_reps = {{"id", CanonicalMap::identity(g.filtration)}};
  g.k_generators = {{"z", z}};
  g.hypotheses.k_fully_invariant = true;
  g.hypotheses.nr = HypothesisStatus::Asserted;
  g.hypotheses.net = HypothesisStatus::Asserted;
  g.validate();
  return g;
}

inline EndoSpec circle_endo(long m) {
  Filtration f({1});
  CanonicalMap lift(f, {RatMatrix{{Rat(m)}}}, {{MultiPoly(0)}});
  return EndoSpec(lift);
}

}  // namespace fixtures
