#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nfp/intpoly.hpp"
#include "nfp/matrix.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace nfp;

TEST_CASE("determinant basics") {
  CHECK(det(IntMatrix::identity(4)) == 1);
  CHECK(det(IntMatrix(3, 3)) == 0);
  CHECK(det(IntMatrix{{2, 0}, {0, 3}}) == 6);
  CHECK(det(RatMatrix{{make_rat(1, 2), Rat(0)}, {Rat(0), make_rat(2, 3)}}) == make_rat(1, 3));
  CHECK_THROWS_AS(det(IntMatrix(2, 3)), std::invalid_argument);
}

TEST_CASE("det(I - B_2) = 3 and the +-3(1 -+ k) pattern") {
  for (long k = -3; k <= 3; ++k) {
    IntMatrix b = fixtures::matrix_b(k);
    IntMatrix m = IntMatrix::identity(5) - b;
    CHECK(det(m) == oracle::cofactor_det(m));
    CHECK(det(m) == Int(3 * (k - 1)));
    IntMatrix ab = fixtures::matrix_a() * b;
    IntMatrix m2 = IntMatrix::identity(5) - ab;
    CHECK(det(m2) == oracle::cofactor_det(m2));
    CHECK(det(m2) == Int(-3 * (1 + k)));
  }
  CHECK(det(IntMatrix::identity(5) - fixtures::matrix_b(2)) == 3);
}

TEST_CASE("Bareiss equals cofactor expansion on random small matrices") {
  auto g = oracle::rng(11);
  for (int it = 0; it < 200; ++it) {
    std::size_t n = 1 + static_cast<std::size_t>(it % 4);
    IntMatrix m = oracle::random_int_matrix(g, n, -3, 3);
    CHECK(det(m) == oracle::cofactor_det(m));
  }
}

TEST_CASE("rational determinant equals cofactor expansion") {
  auto g = oracle::rng(12);
  for (int it = 0; it < 60; ++it) {
    std::size_t n = 1 + static_cast<std::size_t>(it % 3);
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = oracle::random_rat(g);
    CHECK(det(m) == oracle::cofactor_det(m));
  }
}

TEST_CASE("char poly: companion block and the 5x5 A") {
  IntMatrix c{{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {-1, 1, 1, 1}};
  IntPoly quartic(std::vector<Int>{1, -1, -1, -1, 1});  // x^4 - x^3 - x^2 - x + 1
  CHECK(char_poly(c) == quartic);
  CHECK(char_poly(c) == oracle::charpoly_oracle(c));

  CHECK(char_poly(IntMatrix::identity(2)) == IntPoly(std::vector<Int>{1, -2, 1}));

  IntPoly xplus1(std::vector<Int>{1, 1});
  CHECK(char_poly(fixtures::matrix_a()) == xplus1 * quartic);
  CHECK(char_poly(fixtures::matrix_a()) == oracle::charpoly_oracle(fixtures::matrix_a()));
}

TEST_CASE("char poly matches the oracle on random matrices") {
  auto g = oracle::rng(13);
  for (int it = 0; it < 100; ++it) {
    std::size_t n = 1 + static_cast<std::size_t>(it % 4);
    IntMatrix m = oracle::random_int_matrix(g, n, -3, 3);
    CHECK(char_poly(m) == oracle::charpoly_oracle(m));
  }
}

TEST_CASE("inverse and powers") {
  IntMatrix a = fixtures::matrix_a();
  CHECK(is_unimodular(a));
  IntMatrix ainv = inverse_unimodular(a);
  CHECK(a * ainv == IntMatrix::identity(5));
  CHECK(pow(a, -2) * pow(a, 2) == IntMatrix::identity(5));
  CHECK(pow(a, 0) == IntMatrix::identity(5));

  // the relation B_k A = A^{-1} B_k behind the endomorphism family
  for (long k = -2; k <= 2; ++k) CHECK(fixtures::matrix_b(k) * a == ainv * fixtures::matrix_b(k));

  CHECK_THROWS_AS(inverse(RatMatrix(2, 2)), std::domain_error);
}

TEST_CASE("kronecker product shape and values") {
  IntMatrix x{{1, 2}, {3, 4}};
  IntMatrix y{{0, 1}, {1, 0}};
  IntMatrix k = kronecker(x, y);
  CHECK(k.rows() == 4);
  CHECK(k(0, 1) == 1);
  CHECK(k(0, 3) == 2);
  CHECK(k(3, 0) == 3);
  CHECK(det(k) == det(x) * det(x) * det(y) * det(y));
}
