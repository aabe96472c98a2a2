#pragma once

// Smith normal form over Z and cokernel coset enumeration. Naive O(n^4)
// reduction; matrices here never exceed desk scale.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "nfp/matrix.hpp"
#include "nfp/numeric.hpp"

namespace nfp {

struct SmithDecomposition {
  IntMatrix u, d, v;  // u * input * v = d

  std::vector<Int> invariants() const {
    std::vector<Int> r;
    const std::size_t n = std::min(d.rows(), d.cols());
    for (std::size_t i = 0; i < n; ++i) r.push_back(d(i, i));
    return r;
  }
};

// U m V = D with U, V unimodular, D = diag(d_1, ..., d_r, 0, ..) and
// d_1 | d_2 | ... ; diagonal entries nonnegative.
inline SmithDecomposition smith_normal_form(const IntMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  IntMatrix a = m;
  IntMatrix u = IntMatrix::identity(rows);
  IntMatrix v = IntMatrix::identity(cols);

  auto swap_rows = [&](std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < cols; ++k) std::swap(a(i, k), a(j, k));
    for (std::size_t k = 0; k < rows; ++k) std::swap(u(i, k), u(j, k));
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < rows; ++k) std::swap(a(k, i), a(k, j));
    for (std::size_t k = 0; k < cols; ++k) std::swap(v(k, i), v(k, j));
  };
  auto add_row = [&](std::size_t dst, std::size_t src, const Int& f) {
    for (std::size_t k = 0; k < cols; ++k) a(dst, k) += f * a(src, k);
    for (std::size_t k = 0; k < rows; ++k) u(dst, k) += f * u(src, k);
  };
  auto add_col = [&](std::size_t dst, std::size_t src, const Int& f) {
    for (std::size_t k = 0; k < rows; ++k) a(k, dst) += f * a(k, src);
    for (std::size_t k = 0; k < cols; ++k) v(k, dst) += f * v(k, src);
  };
  auto negate_row = [&](std::size_t i) {
    for (std::size_t k = 0; k < cols; ++k) a(i, k) = -a(i, k);
    for (std::size_t k = 0; k < rows; ++k) u(i, k) = -u(i, k);
  };

  const std::size_t steps = std::min(rows, cols);
  for (std::size_t t = 0; t < steps; ++t) {
    // move a minimal-magnitude nonzero entry of the trailing block to (t,t)
    for (;;) {
      std::size_t pi = t, pj = t;
      bool found = false;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j) {
          if (a(i, j) == 0) continue;
          if (!found || abs_int(a(i, j)) < abs_int(a(pi, pj))) {
            pi = i;
            pj = j;
            found = true;
          }
        }
      if (!found) break;  // trailing block zero
      if (pi != t) swap_rows(t, pi);
      if (pj != t) swap_cols(t, pj);
      if (a(t, t) < 0) negate_row(t);

      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a(i, t) == 0) continue;
        Int q = a(i, t) / a(t, t);  // truncated; remainder smaller than pivot
        add_row(i, t, -q);
        if (a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a(t, j) == 0) continue;
        Int q = a(t, j) / a(t, t);
        add_col(j, t, -q);
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // pivot must divide the remaining block for the divisibility chain
      bool divides_all = true;
      for (std::size_t i = t + 1; i < rows && divides_all; ++i)
        for (std::size_t j = t + 1; j < cols && divides_all; ++j)
          if (a(i, j) % a(t, t) != 0) {
            add_row(t, i, Int(1));
            divides_all = false;
          }
      if (divides_all) break;
    }
  }

  SmithDecomposition s{std::move(u), std::move(a), std::move(v)};
  return s;
}

// Coset representatives of Z^n modulo the column lattice of a square M.
struct CokernelClasses {
  bool finite = false;
  std::vector<std::vector<Int>> representatives;  // present when finite
};

// With U M V = D the map x -> Ux identifies Z^n / M Z^n with prod Z/d_i;
// representatives are U^{-1} w for canonical residues w, enumerated in
// lexicographic order of w for reproducibility.
inline CokernelClasses cokernel_classes(const IntMatrix& m) {
  m.require_square();
  const std::size_t n = m.rows();
  CokernelClasses out;
  if (n == 0) {
    out.finite = true;
    out.representatives.push_back({});
    return out;
  }
  Int d = det(m);
  if (d == 0) return out;  // infinite
  SmithDecomposition s = smith_normal_form(m);
  IntMatrix uinv = inverse_unimodular(s.u);
  std::vector<Int> w(n, Int(0));
  out.finite = true;
  for (;;) {
    out.representatives.push_back(uinv.apply(w));
    std::size_t i = n;
    while (i-- > 0) {
      w[i] += 1;
      if (w[i] < s.d(i, i)) break;
      w[i] = 0;
      if (i == 0) {
        return out;
      }
    }
  }
}

// True iff x lies in the column lattice of M (det M != 0).
inline bool in_column_lattice(const IntMatrix& m, const std::vector<Int>& x) {
  RatMatrix minv = inverse(to_rational(m));
  std::vector<Rat> xr;
  xr.reserve(x.size());
  for (const auto& c : x) xr.emplace_back(c);
  for (const auto& c : minv.apply(xr))
    if (!is_integer(c)) return false;
  return true;
}

}  // namespace nfp
