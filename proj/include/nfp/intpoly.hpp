#pragma once

// Univariate polynomials with exact coefficients, ascending degree order.
// IntPoly is the public characteristic-polynomial type; RatPoly backs the
// Euclidean algorithms (gcd, Sturm chains).

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "nfp/matrix.hpp"
#include "nfp/numeric.hpp"

namespace nfp {

template <typename T>
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<T> coeffs) : c_(std::move(coeffs)) { normalize(); }
  static Poly constant(T v) { return Poly(std::vector<T>{std::move(v)}); }
  static Poly x() { return Poly(std::vector<T>{T(0), T(1)}); }

  bool is_zero() const { return c_.empty(); }
  // degree of the zero polynomial is -1 by convention
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  const std::vector<T>& coeffs() const { return c_; }
  T coeff(std::size_t i) const { return i < c_.size() ? c_[i] : T(0); }
  const T& leading() const {
    if (c_.empty()) throw std::domain_error("zero polynomial has no leading coefficient");
    return c_.back();
  }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  Poly& operator+=(const Poly& o) {
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    normalize();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    normalize();
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  Poly operator-() const {
    Poly r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<T> r(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(r));
  }

  Poly& operator*=(const T& s) {
    for (auto& x : c_) x *= s;
    normalize();
    return *this;
  }

  template <typename U>
  U evaluate(const U& x) const {
    U acc(0);
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + U(c_[i]);
    return acc;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<T> r(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * T(static_cast<long>(i));
    return Poly(std::move(r));
  }

  // coefficients reversed: x^deg * p(1/x)
  Poly reciprocal() const {
    std::vector<T> r(c_.rbegin(), c_.rend());
    return Poly(std::move(r));
  }

  std::string str(const std::string& var = "x") const;

 private:
  void normalize() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<T> c_;
};

using IntPoly = Poly<Int>;
using RatPoly = Poly<Rat>;

template <typename T>
std::string Poly<T>::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::string out;
  for (std::size_t i = c_.size(); i-- > 0;) {
    if (c_[i] == 0) continue;
    T a = c_[i];
    if (!out.empty()) {
      out += a < 0 ? " - " : " + ";
      if (a < 0) a = -a;
    } else if (a < 0) {
      out += "-";
      a = -a;
    }
    if (i == 0 || a != 1) {
      out += a.get_str();
      if (i > 0) out += "*";
    }
    if (i > 0) {
      out += var;
      if (i > 1) out += "^" + std::to_string(i);
    }
  }
  return out;
}

inline RatPoly to_rational(const IntPoly& p) {
  std::vector<Rat> c;
  c.reserve(p.coeffs().size());
  for (const auto& x : p.coeffs()) c.emplace_back(x);
  return RatPoly(std::move(c));
}

// Clears denominators and divides out integer content; sign of the leading
// coefficient is preserved. Factor set over Q is unchanged.
inline IntPoly primitive_part(const RatPoly& p) {
  if (p.is_zero()) return IntPoly();
  Int l(1);
  for (const auto& c : p.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  std::vector<Int> scaled;
  scaled.reserve(p.coeffs().size());
  Int g(0);
  for (const auto& c : p.coeffs()) {
    scaled.push_back(to_int(Rat(c * Rat(l))));
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), scaled.back().get_mpz_t());
  }
  for (auto& x : scaled) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  return IntPoly(std::move(scaled));
}

// Division with remainder by a monic divisor stays in Z[x].
inline std::pair<IntPoly, IntPoly> divmod_monic(const IntPoly& num, const IntPoly& den) {
  if (!den.is_monic()) throw std::invalid_argument("divisor must be monic");
  std::vector<Int> r(num.coeffs());
  const long dd = den.degree();
  if (num.degree() < dd) return {IntPoly(), num};
  std::vector<Int> q(num.degree() - dd + 1, Int(0));
  for (long i = num.degree(); i >= dd; --i) {
    Int f = r[static_cast<std::size_t>(i)];
    if (f == 0) continue;
    q[static_cast<std::size_t>(i - dd)] = f;
    for (long j = 0; j <= dd; ++j) r[static_cast<std::size_t>(i - dd + j)] -= f * den.coeff(static_cast<std::size_t>(j));
  }
  return {IntPoly(std::move(q)), IntPoly(std::move(r))};
}

inline bool divides(const IntPoly& den, const IntPoly& num) {
  return divmod_monic(num, den).second.is_zero();
}

inline std::pair<RatPoly, RatPoly> divmod(const RatPoly& num, const RatPoly& den) {
  if (den.is_zero()) throw std::invalid_argument("polynomial division by zero");
  std::vector<Rat> r(num.coeffs());
  const long dd = den.degree();
  if (num.degree() < dd) return {RatPoly(), num};
  std::vector<Rat> q(static_cast<std::size_t>(num.degree() - dd + 1), Rat(0));
  const Rat lead = den.leading();
  for (long i = num.degree(); i >= dd; --i) {
    Rat f = r[static_cast<std::size_t>(i)] / lead;
    if (f == 0) continue;
    q[static_cast<std::size_t>(i - dd)] = f;
    for (long j = 0; j <= dd; ++j) r[static_cast<std::size_t>(i - dd + j)] -= f * den.coeff(static_cast<std::size_t>(j));
  }
  return {RatPoly(std::move(q)), RatPoly(std::move(r))};
}

// Monic gcd over Q.
inline RatPoly gcd(RatPoly a, RatPoly b) {
  while (!b.is_zero()) {
    RatPoly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  Rat inv_lead = Rat(1) / a.leading();
  a *= inv_lead;
  return a;
}

// Faddeev-LeVerrier; all divisions are exact in Z. Returns the monic
// characteristic polynomial det(xI - M).
inline IntPoly char_poly(const IntMatrix& m) {
  m.require_square();
  const std::size_t n = m.rows();
  std::vector<Int> c(n + 1, Int(0));
  c[n] = 1;
  IntMatrix mk = m;
  for (std::size_t k = 1; k <= n; ++k) {
    Int t = mk.trace();
    mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), static_cast<unsigned long>(k));
    c[n - k] = -t;
    if (k < n) {
      IntMatrix shifted = mk;
      for (std::size_t i = 0; i < n; ++i) shifted(i, i) += c[n - k];
      mk = m * shifted;
    }
  }
  return IntPoly(std::move(c));
}

inline RatPoly char_poly(const RatMatrix& m) {
  m.require_square();
  const std::size_t n = m.rows();
  std::vector<Rat> c(n + 1, Rat(0));
  c[n] = 1;
  RatMatrix mk = m;
  for (std::size_t k = 1; k <= n; ++k) {
    c[n - k] = -mk.trace() / Rat(static_cast<long>(k));
    if (k < n) {
      RatMatrix shifted = mk;
      for (std::size_t i = 0; i < n; ++i) shifted(i, i) += c[n - k];
      mk = m * shifted;
    }
  }
  return RatPoly(std::move(c));
}

namespace detail {

inline int sign_of(const Rat& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

inline int sign_variations(const std::vector<int>& signs) {
  int v = 0, last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

}  // namespace detail

// Sturm chain root counting for the squarefree part. Bounds are rationals;
// use count_real_roots for the whole line.
class SturmChain {
 public:
  explicit SturmChain(const RatPoly& p) {
    RatPoly sf = p;
    RatPoly g = gcd(p, p.derivative());
    if (g.degree() > 0) sf = divmod(p, g).first;
    chain_.push_back(sf);
    if (sf.degree() > 0) chain_.push_back(sf.derivative());
    while (chain_.back().degree() > 0) {
      RatPoly r = divmod(chain_[chain_.size() - 2], chain_.back()).second;
      if (r.is_zero()) break;
      chain_.push_back(-r);
    }
  }

  long squarefree_degree() const { return chain_.front().degree(); }

  // distinct real roots in (a, b]
  long count_in(const Rat& a, const Rat& b) const { return variations_at(a) - variations_at(b); }

  long count_real_roots() const { return variations_at_minus_inf() - variations_at_plus_inf(); }

  // distinct real roots in (0, +inf)
  long count_positive() const { return variations_at(Rat(0)) - variations_at_plus_inf(); }

  bool zero_is_root() const { return chain_.front().coeff(0) == 0; }

 private:
  long variations_at(const Rat& x) const {
    std::vector<int> s;
    s.reserve(chain_.size());
    for (const auto& p : chain_) s.push_back(detail::sign_of(p.evaluate(x)));
    return detail::sign_variations(s);
  }
  long variations_at_plus_inf() const {
    std::vector<int> s;
    for (const auto& p : chain_) s.push_back(p.is_zero() ? 0 : detail::sign_of(p.leading()));
    return detail::sign_variations(s);
  }
  long variations_at_minus_inf() const {
    std::vector<int> s;
    for (const auto& p : chain_) {
      if (p.is_zero()) {
        s.push_back(0);
        continue;
      }
      int lead = detail::sign_of(p.leading());
      s.push_back(p.degree() % 2 == 0 ? lead : -lead);
    }
    return detail::sign_variations(s);
  }

  std::vector<RatPoly> chain_;
};

// All roots (with multiplicity) real and strictly positive.
inline bool all_roots_real_positive(const IntPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("zero polynomial");
  if (p.degree() == 0) return true;
  SturmChain s(to_rational(p));
  if (s.zero_is_root()) return false;
  return s.count_real_roots() == s.squarefree_degree() && s.count_positive() == s.squarefree_degree();
}

}  // namespace nfp
