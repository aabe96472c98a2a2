#pragma once

// Sparse exact multivariate polynomials over Q: term map keyed by exponent
// vector in graded lexicographic order. Canonical form (no zero terms, fixed
// ordering) makes equality and serialization deterministic.

#include <algorithm>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "nfp/matrix.hpp"
#include "nfp/numeric.hpp"

namespace nfp {

using Mono = std::vector<unsigned>;

struct GrlexLess {
  bool operator()(const Mono& a, const Mono& b) const {
    unsigned da = 0, db = 0;
    for (unsigned e : a) da += e;
    for (unsigned e : b) db += e;
    if (da != db) return da < db;
    return a < b;
  }
};

class MultiPoly {
 public:
  MultiPoly() : nvars_(0) {}
  explicit MultiPoly(std::size_t nvars) : nvars_(nvars) {}

  static MultiPoly constant(std::size_t nvars, const Rat& c) {
    MultiPoly p(nvars);
    if (c != 0) p.terms_[Mono(nvars, 0)] = c;
    return p;
  }
  static MultiPoly variable(std::size_t nvars, std::size_t i) {
    if (i >= nvars) throw std::invalid_argument("variable index out of range");
    MultiPoly p(nvars);
    Mono m(nvars, 0);
    m[i] = 1;
    p.terms_[std::move(m)] = Rat(1);
    return p;
  }

  std::size_t num_vars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Mono, Rat, GrlexLess>& terms() const { return terms_; }

  bool is_constant() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 && total_degree(terms_.begin()->first) == 0;
  }
  Rat constant_term() const {
    Mono zero(nvars_, 0);
    auto it = terms_.find(zero);
    return it == terms_.end() ? Rat(0) : it->second;
  }
  long degree() const {
    long d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, static_cast<long>(total_degree(m)));
    return d;
  }
  bool depends_on(std::size_t var) const {
    for (const auto& [m, c] : terms_)
      if (m[var] != 0) return true;
    return false;
  }
  // largest variable index used, or -1
  long max_var() const {
    long mv = -1;
    for (const auto& [m, c] : terms_)
      for (std::size_t i = 0; i < m.size(); ++i)
        if (m[i] != 0) mv = std::max(mv, static_cast<long>(i));
    return mv;
  }

  void add_term(Mono m, const Rat& c) {
    if (m.size() != nvars_) throw std::invalid_argument("exponent vector length mismatch");
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(std::move(m), c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

  MultiPoly& operator+=(const MultiPoly& o) {
    check_vars(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  MultiPoly& operator-=(const MultiPoly& o) {
    check_vars(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  MultiPoly operator-() const {
    MultiPoly r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
  }

  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    a.check_vars(b);
    MultiPoly r(a.nvars_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        Mono m(a.nvars_);
        for (std::size_t i = 0; i < a.nvars_; ++i) m[i] = ma[i] + mb[i];
        r.add_term(std::move(m), ca * cb);
      }
    return r;
  }

  MultiPoly& operator*=(const Rat& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }
  friend MultiPoly operator*(MultiPoly a, const Rat& s) { return a *= s; }
  friend MultiPoly operator*(const Rat& s, MultiPoly a) { return a *= s; }

  MultiPoly pow(unsigned e) const {
    MultiPoly r = constant(nvars_, Rat(1));
    for (unsigned i = 0; i < e; ++i) r = r * (*this);
    return r;
  }

  Rat evaluate(const std::vector<Rat>& x) const {
    if (x.size() != nvars_) throw std::invalid_argument("evaluation point arity mismatch");
    Rat acc(0);
    for (const auto& [m, c] : terms_) {
      Rat t = c;
      for (std::size_t i = 0; i < nvars_; ++i)
        for (unsigned e = 0; e < m[i]; ++e) t *= x[i];
      acc += t;
    }
    return acc;
  }

  double evaluate_double(const std::vector<double>& x) const {
    if (x.size() != nvars_) throw std::invalid_argument("evaluation point arity mismatch");
    double acc = 0;
    for (const auto& [m, c] : terms_) {
      double t = c.get_d();
      for (std::size_t i = 0; i < nvars_; ++i)
        for (unsigned e = 0; e < m[i]; ++e) t *= x[i];
      acc += t;
    }
    return acc;
  }

  // substitute inner[i] for variable i; all inner share an arity
  MultiPoly compose(const std::vector<MultiPoly>& inner) const {
    if (inner.size() != nvars_) throw std::invalid_argument("composition arity mismatch");
    std::size_t target_vars = inner.empty() ? 0 : inner[0].num_vars();
    for (const auto& g : inner)
      if (g.num_vars() != target_vars) throw std::invalid_argument("inner polynomials disagree on arity");

    // cache powers of each inner polynomial up to its max exponent
    std::vector<unsigned> max_e(nvars_, 0);
    for (const auto& [m, c] : terms_)
      for (std::size_t i = 0; i < nvars_; ++i) max_e[i] = std::max(max_e[i], m[i]);
    std::vector<std::vector<MultiPoly>> pows(nvars_);
    for (std::size_t i = 0; i < nvars_; ++i) {
      pows[i].push_back(MultiPoly::constant(target_vars, Rat(1)));
      for (unsigned e = 1; e <= max_e[i]; ++e) pows[i].push_back(pows[i].back() * inner[i]);
    }

    MultiPoly r(target_vars);
    for (const auto& [m, c] : terms_) {
      MultiPoly t = MultiPoly::constant(target_vars, c);
      for (std::size_t i = 0; i < nvars_; ++i)
        if (m[i] != 0) t = t * pows[i][m[i]];
      r += t;
    }
    return r;
  }

  MultiPoly derivative(std::size_t var) const {
    if (var >= nvars_) throw std::invalid_argument("variable index out of range");
    MultiPoly r(nvars_);
    for (const auto& [m, c] : terms_) {
      if (m[var] == 0) continue;
      Mono d = m;
      d[var] -= 1;
      r.add_term(std::move(d), c * Rat(static_cast<long>(m[var])));
    }
    return r;
  }

  // reinterpret over a wider variable set (new variables unused)
  MultiPoly extended(std::size_t new_nvars) const {
    if (new_nvars < nvars_) throw std::invalid_argument("extended() cannot shrink arity");
    MultiPoly r(new_nvars);
    for (const auto& [m, c] : terms_) {
      Mono e(new_nvars, 0);
      std::copy(m.begin(), m.end(), e.begin());
      r.terms_.emplace(std::move(e), c);
    }
    return r;
  }

  // drop trailing unused variables down to arity n
  MultiPoly truncated(std::size_t n) const {
    if (max_var() >= static_cast<long>(n)) throw std::invalid_argument("truncated() would drop used variables");
    MultiPoly r(n);
    for (const auto& [m, c] : terms_) {
      Mono e(m.begin(), m.begin() + static_cast<long>(n));
      r.terms_.emplace(std::move(e), c);
    }
    return r;
  }

  std::string str(const std::string& stem = "x") const {
    if (terms_.empty()) return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [m, c] = *it;
      if (!out.empty()) out += c > 0 ? " + " : " - ";
      else if (c < 0) out += "-";
      Rat a = c > 0 ? c : Rat(-c);
      bool unit = a == 1 && total_degree(m) > 0;
      if (!unit) out += a.get_str();
      bool first = unit;
      for (std::size_t i = 0; i < nvars_; ++i) {
        if (m[i] == 0) continue;
        if (!first || !unit) out += "*";
        out += stem + std::to_string(i + 1);
        if (m[i] > 1) out += "^" + std::to_string(m[i]);
        first = false;
      }
    }
    return out;
  }

 private:
  static unsigned total_degree(const Mono& m) {
    unsigned d = 0;
    for (unsigned e : m) d += e;
    return d;
  }
  void check_vars(const MultiPoly& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("polynomial arity mismatch");
  }

  std::size_t nvars_;
  std::map<Mono, Rat, GrlexLess> terms_;
};

inline std::vector<MultiPoly> compose(const std::vector<MultiPoly>& outer, const std::vector<MultiPoly>& inner) {
  std::vector<MultiPoly> r;
  r.reserve(outer.size());
  for (const auto& f : outer) r.push_back(f.compose(inner));
  return r;
}

inline std::vector<MultiPoly> identity_polys(std::size_t n) {
  std::vector<MultiPoly> r;
  r.reserve(n);
  for (std::size_t i = 0; i < n; ++i) r.push_back(MultiPoly::variable(n, i));
  return r;
}

// entry (i, j) = d f_i / d x_j
inline std::vector<std::vector<MultiPoly>> jacobian(const std::vector<MultiPoly>& f) {
  std::vector<std::vector<MultiPoly>> j;
  j.reserve(f.size());
  for (const auto& fi : f) {
    std::vector<MultiPoly> row;
    row.reserve(fi.num_vars());
    for (std::size_t v = 0; v < fi.num_vars(); ++v) row.push_back(fi.derivative(v));
    j.push_back(std::move(row));
  }
  return j;
}

inline RatMatrix evaluate_matrix(const std::vector<std::vector<MultiPoly>>& m, const std::vector<Rat>& x) {
  RatMatrix r(m.size(), m.empty() ? 0 : m[0].size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) r(i, j) = m[i][j].evaluate(x);
  return r;
}

inline std::vector<Rat> evaluate_vector(const std::vector<MultiPoly>& f, const std::vector<Rat>& x) {
  std::vector<Rat> r;
  r.reserve(f.size());
  for (const auto& fi : f) r.push_back(fi.evaluate(x));
  return r;
}

}  // namespace nfp
