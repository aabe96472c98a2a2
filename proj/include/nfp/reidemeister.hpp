#pragma once

// Twisted-conjugacy (Reidemeister) class counting. The abelian case is the
// cokernel of I - F; the filtered case recurses with the addition formula,
// twisting by class representatives lifted through the level generators.
// brute_force_coker is an independent oracle sharing no code with the Smith
// normal form path.

#include <cstddef>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "nfp/canonical.hpp"
#include "nfp/group.hpp"
#include "nfp/matrix.hpp"
#include "nfp/numeric.hpp"
#include "nfp/smith.hpp"

namespace nfp {

struct ReidemeisterResult {
  Count count;
  std::vector<CanonicalMap> representatives;  // group elements, present when finite
  std::vector<std::vector<Int>> abelian_reps; // vectors, for the abelian entry point
};

// R(F) on Z^n: |det(I - F)| classes with SNF-derived representatives when
// det(I - F) != 0, infinite otherwise.
inline ReidemeisterResult reidemeister_abelian(const IntMatrix& f) {
  f.require_square();
  IntMatrix m = IntMatrix::identity(f.rows()) - f;
  ReidemeisterResult out;
  CokernelClasses classes = cokernel_classes(m);
  if (!classes.finite) {
    out.count = Count::infinity();
    return out;
  }
  out.count = Count(Int(static_cast<long>(classes.representatives.size())));
  out.abelian_reps = std::move(classes.representatives);
  return out;
}

// Union-find over the box [0, P)^n with coordinates wrapped mod P, where P
// is the exponent of Z^n / M Z^n computed via the adjugate (P = smallest
// divisor d of |det M| with d * M^{-1} integral). Requires P <= box_radius.
inline Count brute_force_coker(const IntMatrix& m, long box_radius) {
  m.require_square();
  const std::size_t n = m.rows();
  if (n == 0) return Count(Int(1));

  // cofactor-expansion determinant: deliberately not the Bareiss path
  std::function<Int(const IntMatrix&)> cofactor_det = [&](const IntMatrix& a) -> Int {
    const std::size_t k = a.rows();
    if (k == 1) return a(0, 0);
    Int acc(0);
    for (std::size_t j = 0; j < k; ++j) {
      if (a(0, j) == 0) continue;
      IntMatrix minor(k - 1, k - 1);
      for (std::size_t r = 1; r < k; ++r) {
        std::size_t cc = 0;
        for (std::size_t c = 0; c < k; ++c) {
          if (c == j) continue;
          minor(r - 1, cc++) = a(r, c);
        }
      }
      Int term = a(0, j) * cofactor_det(minor);
      if (j % 2) acc -= term;
      else acc += term;
    }
    return acc;
  };

  Int d = cofactor_det(m);
  if (d == 0) throw std::invalid_argument("brute_force_coker requires det(M) != 0");
  Int dabs = abs_int(d);

  // adjugate via cofactors; exponent P = |det| / gcd(|det|, content(adj))
  IntMatrix adj(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      IntMatrix minor(n - 1, n - 1);
      std::size_t rr = 0;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == i) continue;
        std::size_t cc = 0;
        for (std::size_t c = 0; c < n; ++c) {
          if (c == j) continue;
          minor(rr, cc++) = m(r, c);
        }
        ++rr;
      }
      Int cof = n == 1 ? Int(1) : cofactor_det(minor);
      if ((i + j) % 2) cof = -cof;
      adj(j, i) = cof;
    }
  Int content(0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), adj(i, j).get_mpz_t());
  Int g(0);
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), dabs.get_mpz_t());
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), content.get_mpz_t());
  Int period = dabs / g;
  if (!period.fits_slong_p() || period.get_si() > box_radius)
    throw std::invalid_argument("insufficient box radius: wraparound period " + period.get_str() +
                                " exceeds " + std::to_string(box_radius));
  const long p = period.get_si();

  // columns reduced mod p
  std::vector<std::vector<long>> cols(n, std::vector<long>(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      Int e = m(i, j) % period;
      if (e < 0) e += period;
      cols[j][i] = e.get_si();
    }

  long total = 1;
  bool small = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > (1L << 20) / p) {
      small = false;
      break;
    }
    total *= p;
  }

  if (small) {
    // enumerate [0, p)^n, union x with x + column_j (mod p)
    std::vector<long> parent(static_cast<std::size_t>(total));
    std::iota(parent.begin(), parent.end(), 0L);
    std::function<long(long)> find = [&](long x) {
      while (parent[static_cast<std::size_t>(x)] != x) {
        parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        x = parent[static_cast<std::size_t>(x)];
      }
      return x;
    };
    for (std::size_t j = 0; j < n; ++j) {
      for (long idx = 0; idx < total; ++idx) {
        long rem = idx, nidx = 0, mult = 1;
        for (std::size_t i = n; i-- > 0;) {
          long xi = rem % p;
          rem /= p;
          long yi = (xi + cols[j][i]) % p;
          nidx += yi * mult;
          mult *= p;
        }
        long a = find(idx), b = find(nidx);
        if (a != b) parent[static_cast<std::size_t>(a)] = b;
      }
    }
    long classes = 0;
    for (long idx = 0; idx < total; ++idx)
      if (find(idx) == idx) ++classes;
    return Count(Int(classes));
  }

  // Large box: the classes are the cosets of the subgroup L of (Z/p)^n
  // generated by the columns, so count = p^n / |L|. |L| is found by plain
  // closure (breadth-first), which is the same wraparound walk without
  // storing the whole box.
  std::set<std::vector<long>> seen;
  std::vector<std::vector<long>> frontier{std::vector<long>(n, 0)};
  seen.insert(frontier.front());
  while (!frontier.empty()) {
    std::vector<std::vector<long>> next;
    for (const auto& x : frontier)
      for (std::size_t j = 0; j < n; ++j) {
        std::vector<long> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = (x[i] + cols[j][i]) % p;
        if (seen.insert(y).second) next.push_back(std::move(y));
      }
    frontier = std::move(next);
  }
  Int pn(1);
  for (std::size_t i = 0; i < n; ++i) pn *= period;
  Int order(static_cast<long>(seen.size()));
  if (pn % order != 0) throw std::logic_error("subgroup order does not divide box size");
  return Count(pn / order);
}

inline long default_box_radius(const IntMatrix& m) {
  SmithDecomposition s = smith_normal_form(m);
  Int mx(0);
  for (const auto& d : s.invariants())
    if (d > mx) mx = d;
  return mx.fits_slong_p() ? mx.get_si() + 1 : 0;
}

namespace detail {

inline void reidemeister_rec(const GroupSpec& g, const CanonicalMap& twisted_lift, std::size_t level,
                             const CanonicalMap& prefix, Count& total, std::vector<CanonicalMap>* reps,
                             bool* hit_infinite) {
  if (*hit_infinite) return;
  if (level == g.filtration.levels()) {
    total += Count(Int(1));
    if (reps) reps->push_back(prefix);
    return;
  }
  // induced action on the level lattice: S^{-1} (I - D) S must be integral
  // (this is the check that the twisted endomorphism preserves the level)
  RatMatrix s = g.level_basis(level);
  RatMatrix m_level = inverse(s) * (RatMatrix::identity(s.rows()) - twisted_lift.block(level)) * s;
  if (!is_integral(m_level))
    throw std::domain_error("endomorphism does not preserve the level " + std::to_string(level + 1) +
                            " lattice");
  IntMatrix imf = to_integer(m_level);
  CokernelClasses classes = cokernel_classes(imf);
  if (!classes.finite) {
    *hit_infinite = true;
    total = Count::infinity();
    return;
  }
  for (const auto& v : classes.representatives) {
    CanonicalMap elem = g.level_element(level, v);
    reidemeister_rec(g, compose_maps(elem, twisted_lift), level + 1, compose_maps(elem, prefix), total, reps,
                     hit_infinite);
    if (*hit_infinite) return;
  }
}

}  // namespace detail

// R(phi) for phi given by its lift, over the torsion-free filtration of the
// whole group: classes of the induced map on the top free-abelian quotient,
// then recursion on the lower levels with the twist tau_k ∘ phi realised as
// rho(k) ∘ lift. Infinity at any level propagates.
inline ReidemeisterResult reidemeister_filtered(const GroupSpec& g, const EndoSpec& phi,
                                                bool want_representatives = true) {
  if (!g.filtration_exhausts_group)
    throw std::domain_error("reidemeister_filtered needs a filtration of the whole group "
                            "(filtration_exhausts_group = false)");
  if (phi.lift().filtration() != g.filtration) throw std::invalid_argument("lift filtration mismatch");
  ReidemeisterResult out;
  bool hit_infinite = false;
  std::vector<CanonicalMap> reps;
  detail::reidemeister_rec(g, phi.lift(), 0, CanonicalMap::identity(g.filtration), out.count,
                           want_representatives ? &reps : nullptr, &hit_infinite);
  if (!hit_infinite) out.representatives = std::move(reps);
  return out;
}

struct AdditionInequalityReport {
  Count lhs;              // R(phi) on the whole group
  Count rhs;              // sum over cosets of R((tau_x ∘ phi)|_H)
  std::vector<Count> per_coset;
  bool ok = false;
};

// R(phi) <= sum_{xH} R((tau_x ∘ phi)|_H) for an automorphism phi preserving
// the normal finite-index subgroup H; infinity absorbs. H is presented as
// its own GroupSpec over the same coordinates, h_reps are coset
// representatives of G/H (elements of G).
inline AdditionInequalityReport check_addition_inequality(const GroupSpec& g, const GroupSpec& h,
                                                          const std::vector<CanonicalMap>& h_reps,
                                                          const EndoSpec& phi) {
  // hypothesis: phi invertible (automorphism); invert_map throws otherwise
  invert_map(phi.lift());
  AdditionInequalityReport rep;
  rep.lhs = reidemeister_filtered(g, phi, false).count;
  rep.rhs = Count(Int(0));
  for (const auto& x : h_reps) {
    EndoSpec twisted(compose_maps(x, phi.lift()));
    Count c = reidemeister_filtered(h, twisted, false).count;
    rep.per_coset.push_back(c);
    rep.rhs += c;
  }
  rep.ok = rep.lhs <= rep.rhs;
  return rep;
}

}  // namespace nfp
