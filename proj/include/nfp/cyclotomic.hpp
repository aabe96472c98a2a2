#pragma once

// Cyclotomic polynomial generation and cyclotomic-factor detection. The scan
// over phi(d) <= deg(p) is exhaustive: a cyclotomic factor Phi_d of p has
// degree phi(d), so no larger d can divide.

#include <map>
#include <stdexcept>
#include <vector>

#include "nfp/intpoly.hpp"
#include "nfp/numeric.hpp"

namespace nfp {

inline long euler_phi(long n) {
  if (n <= 0) throw std::invalid_argument("euler_phi requires n >= 1");
  long result = n;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

// Phi_d(x) = (x^d - 1) / prod_{e | d, e < d} Phi_e(x), computed by exact
// monic division; results are cached per process.
inline const IntPoly& cyclotomic(long d) {
  static std::map<long, IntPoly> cache;
  auto it = cache.find(d);
  if (it != cache.end()) return it->second;
  if (d < 1) throw std::invalid_argument("cyclotomic order must be >= 1");
  std::vector<Int> xd(static_cast<std::size_t>(d) + 1, Int(0));
  xd[0] = -1;
  xd.back() = 1;
  IntPoly num((std::vector<Int>(xd)));
  for (long e = 1; e < d; ++e) {
    if (d % e != 0) continue;
    auto [q, r] = divmod_monic(num, cyclotomic(e));
    if (!r.is_zero()) throw std::logic_error("cyclotomic division not exact");
    num = std::move(q);
  }
  return cache.emplace(d, std::move(num)).first->second;
}

// Orders d with Phi_d dividing p, ascending; d = 1 only when include_trivial.
inline std::vector<long> cyclotomic_factor_scan(const IntPoly& p, bool include_trivial = false) {
  if (p.is_zero()) throw std::invalid_argument("cyclotomic scan of the zero polynomial");
  std::vector<long> found;
  const long deg = p.degree();
  for (long d = 1;; ++d) {
    long phi = euler_phi(d);
    if (phi > deg) {
      // phi(d) is not monotone in d, but phi(d) >= sqrt(d/2); past that
      // bound no further order can have phi(d) <= deg.
      if (d > 2 * deg * deg + 1) break;
      continue;
    }
    if (d == 1 && !include_trivial) continue;
    if (divides(cyclotomic(d), p)) found.push_back(d);
  }
  return found;
}

inline bool has_nontrivial_cyclotomic_factor(const IntPoly& p) {
  return !cyclotomic_factor_scan(p, false).empty();
}

}  // namespace nfp
