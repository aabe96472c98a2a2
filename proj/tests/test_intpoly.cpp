#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nfp/cyclotomic.hpp"
#include "nfp/intpoly.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <complex>
#include <numeric>

using namespace nfp;

TEST_CASE("poly arithmetic and division") {
  IntPoly p(std::vector<Int>{-1, 0, 1});  // x^2 - 1
  IntPoly xm1(std::vector<Int>{-1, 1});
  IntPoly xp1(std::vector<Int>{1, 1});
  CHECK(p == xm1 * xp1);
  auto [q, r] = divmod_monic(p, xm1);
  CHECK(q == xp1);
  CHECK(r.is_zero());
  CHECK(divides(xp1, p));
  CHECK(!divides(IntPoly(std::vector<Int>{2, 1}), p));
  CHECK(p.evaluate(Rat(3)) == Rat(8));
  CHECK(p.derivative() == IntPoly(std::vector<Int>{0, 2}));
}

TEST_CASE("rational gcd") {
  RatPoly a = to_rational(IntPoly(std::vector<Int>{-1, 0, 1}));   // (x-1)(x+1)
  RatPoly b = to_rational(IntPoly(std::vector<Int>{1, 2, 1}));    // (x+1)^2
  RatPoly g = gcd(a, b);
  CHECK(g == to_rational(IntPoly(std::vector<Int>{1, 1})));
}

TEST_CASE("cyclotomic polynomials") {
  CHECK(cyclotomic(1) == IntPoly(std::vector<Int>{-1, 1}));
  CHECK(cyclotomic(2) == IntPoly(std::vector<Int>{1, 1}));
  CHECK(cyclotomic(3) == IntPoly(std::vector<Int>{1, 1, 1}));
  CHECK(cyclotomic(4) == IntPoly(std::vector<Int>{1, 0, 1}));
  CHECK(cyclotomic(6) == IntPoly(std::vector<Int>{1, -1, 1}));
  CHECK(cyclotomic(12) == IntPoly(std::vector<Int>{1, 0, -1, 0, 1}));
  CHECK(euler_phi(1) == 1);
  CHECK(euler_phi(12) == 4);
  CHECK(euler_phi(30) == 8);
}

TEST_CASE("cyclotomic factor scan: spec examples") {
  CHECK(cyclotomic_factor_scan(IntPoly(std::vector<Int>{1, 1})) == std::vector<long>{2});
  IntPoly quartic(std::vector<Int>{1, -1, -1, -1, 1});
  CHECK(cyclotomic_factor_scan(quartic).empty());
  IntPoly pm(std::vector<Int>{-1, 0, 1});  // (x-1)(x+1)
  CHECK(cyclotomic_factor_scan(pm, true) == std::vector<long>{1, 2});
  CHECK(cyclotomic_factor_scan(pm, false) == std::vector<long>{2});
  CHECK_THROWS_AS(cyclotomic_factor_scan(IntPoly()), std::invalid_argument);
}

TEST_CASE("cyclotomic scan agrees with numeric root-of-unity substitution") {
  // products of known cyclotomics times irreducible non-cyclotomics,
  // compared against |p(zeta_d)| at every primitive d-th root
  auto g = oracle::rng(21);
  std::uniform_int_distribution<long> pick_d(1, 12);
  std::vector<IntPoly> non_cyc = {
      IntPoly(std::vector<Int>{-2, 1}),        // x - 2
      IntPoly(std::vector<Int>{1, -3, 1}),     // x^2 - 3x + 1
      IntPoly(std::vector<Int>{1, -1, -1, -1, 1}),
      IntPoly(std::vector<Int>{-1, -1, 1}),    // x^2 - x - 1
  };
  for (int it = 0; it < 40; ++it) {
    std::vector<long> wanted;
    IntPoly p = non_cyc[static_cast<std::size_t>(it) % non_cyc.size()];
    int factors = 1 + it % 3;
    for (int f = 0; f < factors; ++f) {
      long d = pick_d(g);
      bool fresh = true;
      for (long w : wanted) fresh = fresh && w != d;
      if (fresh) wanted.push_back(d);
      p = p * cyclotomic(d);
    }
    std::sort(wanted.begin(), wanted.end());
    std::vector<long> got = cyclotomic_factor_scan(p, true);
    // every wanted order must be found (duplicates collapse), nothing extra
    for (long d : wanted) CHECK(std::find(got.begin(), got.end(), d) != got.end());
    for (long d : got) {
      // numeric check: p vanishes at a primitive d-th root of unity
      bool primitive_found = false;
      for (long j = 1; j <= d; ++j) {
        if (std::gcd(j, d) != 1) continue;
        std::complex<double> z = std::polar(1.0, 2.0 * 3.14159265358979323846 * static_cast<double>(j) / static_cast<double>(d));
        std::complex<double> val(0, 0), power(1, 0);
        for (const auto& c : p.coeffs()) {
          val += c.get_d() * power;
          power *= z;
        }
        primitive_found = std::abs(val) < 1e-6;
        break;
      }
      CHECK(primitive_found);
    }
  }
}

TEST_CASE("sturm root counting") {
  // (x-1)(x-2)(x-3): all real positive
  IntPoly p(std::vector<Int>{-6, 11, -6, 1});
  CHECK(all_roots_real_positive(p));
  // x^2 + 1: no real roots
  CHECK(!all_roots_real_positive(IntPoly(std::vector<Int>{1, 0, 1})));
  // (x+1)(x-2): negative root present
  CHECK(!all_roots_real_positive(IntPoly(std::vector<Int>{-2, -1, 1})));
  // x(x-1): zero root
  CHECK(!all_roots_real_positive(IntPoly(std::vector<Int>{0, -1, 1})));
  // (x-1)^2: multiplicity handled through the squarefree part
  CHECK(all_roots_real_positive(IntPoly(std::vector<Int>{1, -2, 1})));

  SturmChain s(to_rational(IntPoly(std::vector<Int>{-6, 11, -6, 1})));
  CHECK(s.count_real_roots() == 3);
  CHECK(s.count_in(make_rat(3, 2), Rat(3)) == 2);
}

TEST_CASE("reciprocal and primitive part") {
  IntPoly p(std::vector<Int>{2, 0, 1});
  CHECK(p.reciprocal() == IntPoly(std::vector<Int>{1, 0, 2}));
  RatPoly q(std::vector<Rat>{make_rat(1, 2), make_rat(3, 4)});
  CHECK(primitive_part(q) == IntPoly(std::vector<Int>{2, 3}));
}
