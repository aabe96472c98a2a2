#pragma once

// Canonical-type polynomial self-maps of R^h: block lower-triangular maps
// whose level-i component is a linear action on the level's own variables
// plus a polynomial tail in the lower-level variables. Group elements and
// endomorphism lifts are both values of this type; all group theory is done
// by exact composition.

#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nfp/matrix.hpp"
#include "nfp/multipoly.hpp"
#include "nfp/numeric.hpp"

namespace nfp {

class Filtration {
 public:
  Filtration() = default;
  explicit Filtration(std::vector<std::size_t> block_dims) : dims_(std::move(block_dims)) {
    for (std::size_t k : dims_) {
      if (k == 0) throw std::invalid_argument("filtration block of dimension zero");
      offsets_.push_back(offsets_.back() + k);
    }
  }

  std::size_t levels() const { return dims_.size(); }
  std::size_t block_dim(std::size_t i) const { return dims_.at(i); }
  // number of variables strictly below level i (i.e. K_{i-1} when levels are 0-based here)
  std::size_t offset(std::size_t i) const { return offsets_.at(i); }
  std::size_t total_dim() const { return offsets_.back(); }
  const std::vector<std::size_t>& block_dims() const { return dims_; }

  friend bool operator==(const Filtration& a, const Filtration& b) { return a.dims_ == b.dims_; }
  friend bool operator!=(const Filtration& a, const Filtration& b) { return !(a == b); }

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> offsets_ = {0};
};

struct CanonicalViolation {
  std::size_t level;       // 0-based level index
  std::string what;        // description; mentions the offending variable where relevant
};

struct ValidationReport {
  std::vector<CanonicalViolation> violations;
  bool ok() const { return violations.empty(); }
  std::string str() const {
    std::ostringstream os;
    for (const auto& v : violations) os << "level " << (v.level + 1) << ": " << v.what << "\n";
    return os.str();
  }
};

class CanonicalMap {
 public:
  CanonicalMap() = default;

  // blocks[i] is k_i x k_i; tails[i] holds k_i polynomials in offset(i) variables
  CanonicalMap(Filtration filt, std::vector<RatMatrix> blocks, std::vector<std::vector<MultiPoly>> tails)
      : filt_(std::move(filt)), blocks_(std::move(blocks)), tails_(std::move(tails)) {
    if (blocks_.size() != filt_.levels() || tails_.size() != filt_.levels())
      throw std::invalid_argument("level count mismatch");
    for (std::size_t i = 0; i < filt_.levels(); ++i) {
      const std::size_t k = filt_.block_dim(i);
      if (blocks_[i].rows() != k || blocks_[i].cols() != k)
        throw std::invalid_argument("diagonal block shape mismatch at level " + std::to_string(i + 1));
      if (tails_[i].size() != k) throw std::invalid_argument("tail arity mismatch at level " + std::to_string(i + 1));
      for (auto& t : tails_[i]) {
        if (t.num_vars() == filt_.offset(i)) continue;
        if (t.num_vars() < filt_.offset(i) || t.max_var() < static_cast<long>(filt_.offset(i)))
          t = t.num_vars() < filt_.offset(i) ? t.extended(filt_.offset(i)) : t.truncated(filt_.offset(i));
        else
          throw std::invalid_argument("tail at level " + std::to_string(i + 1) + " uses variables of its own or higher levels");
      }
    }
  }

  static CanonicalMap identity(const Filtration& f) {
    std::vector<RatMatrix> blocks;
    std::vector<std::vector<MultiPoly>> tails;
    for (std::size_t i = 0; i < f.levels(); ++i) {
      blocks.push_back(RatMatrix::identity(f.block_dim(i)));
      tails.emplace_back(f.block_dim(i), MultiPoly(f.offset(i)));
    }
    return CanonicalMap(f, std::move(blocks), std::move(tails));
  }

  // pure translation by z within level i, identity elsewhere
  static CanonicalMap translation(const Filtration& f, std::size_t level, const std::vector<Rat>& z) {
    CanonicalMap m = identity(f);
    if (z.size() != f.block_dim(level)) throw std::invalid_argument("translation dimension mismatch");
    for (std::size_t r = 0; r < z.size(); ++r)
      m.tails_[level][r] = MultiPoly::constant(f.offset(level), z[r]);
    return m;
  }

  const Filtration& filtration() const { return filt_; }
  std::size_t levels() const { return filt_.levels(); }
  const RatMatrix& block(std::size_t i) const { return blocks_.at(i); }
  const std::vector<MultiPoly>& tail(std::size_t i) const { return tails_.at(i); }

  friend bool operator==(const CanonicalMap& a, const CanonicalMap& b) {
    return a.filt_ == b.filt_ && a.blocks_ == b.blocks_ && a.tails_ == b.tails_;
  }
  friend bool operator!=(const CanonicalMap& a, const CanonicalMap& b) { return !(a == b); }

  bool is_identity() const { return *this == identity(filt_); }

  // the level-i component as polynomials in the first offset(i+1) variables
  std::vector<MultiPoly> level_polys(std::size_t i) const {
    const std::size_t nv = filt_.offset(i + 1);
    std::vector<MultiPoly> r;
    r.reserve(filt_.block_dim(i));
    for (std::size_t row = 0; row < filt_.block_dim(i); ++row) {
      MultiPoly p = tails_[i][row].extended(nv);
      for (std::size_t col = 0; col < filt_.block_dim(i); ++col) {
        const Rat& c = blocks_[i](row, col);
        if (c != 0) p += c * MultiPoly::variable(nv, filt_.offset(i) + col);
      }
      r.push_back(std::move(p));
    }
    return r;
  }

  // the whole map as h polynomials in h variables
  std::vector<MultiPoly> full_polys() const {
    const std::size_t h = filt_.total_dim();
    std::vector<MultiPoly> r;
    r.reserve(h);
    for (std::size_t i = 0; i < levels(); ++i)
      for (auto& p : level_polys(i)) r.push_back(p.extended(h));
    return r;
  }

  std::vector<Rat> apply(const std::vector<Rat>& x) const {
    if (x.size() != filt_.total_dim()) throw std::invalid_argument("point dimension mismatch");
    std::vector<Rat> y;
    y.reserve(x.size());
    for (std::size_t i = 0; i < levels(); ++i) {
      std::vector<Rat> lower(x.begin(), x.begin() + static_cast<long>(filt_.offset(i)));
      for (std::size_t row = 0; row < filt_.block_dim(i); ++row) {
        Rat v = tails_[i][row].evaluate(lower);
        for (std::size_t col = 0; col < filt_.block_dim(i); ++col)
          v += blocks_[i](row, col) * x[filt_.offset(i) + col];
        y.push_back(std::move(v));
      }
    }
    return y;
  }

  std::string str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < levels(); ++i) {
      os << "level " << (i + 1) << ": block [";
      for (std::size_t r = 0; r < blocks_[i].rows(); ++r) {
        if (r) os << "; ";
        for (std::size_t c = 0; c < blocks_[i].cols(); ++c) {
          if (c) os << ",";
          os << blocks_[i](r, c).get_str();
        }
      }
      os << "] tail (";
      for (std::size_t r = 0; r < tails_[i].size(); ++r) {
        if (r) os << ", ";
        os << tails_[i][r].str();
      }
      os << ")\n";
    }
    return os.str();
  }

 private:
  Filtration filt_;
  std::vector<RatMatrix> blocks_;
  std::vector<std::vector<MultiPoly>> tails_;
};

// Structural checks; with as_group_element additionally demands an integral
// unimodular action in each level's own block.
inline ValidationReport validate_canonical(const CanonicalMap& f, bool as_group_element = false) {
  ValidationReport rep;
  for (std::size_t i = 0; i < f.levels(); ++i) {
    const std::size_t k = f.filtration().block_dim(i);
    for (std::size_t row = 0; row < k; ++row) {
      long mv = f.tail(i)[row].max_var();
      if (mv >= static_cast<long>(f.filtration().offset(i)))
        rep.violations.push_back({i, "tail depends on variable x" + std::to_string(mv + 1) + " of level >= " + std::to_string(i + 1)});
    }
    if (as_group_element) {
      if (!is_integral(f.block(i))) {
        rep.violations.push_back({i, "diagonal block is not integral"});
      } else {
        Int d = det(to_integer(f.block(i)));
        if (d != 1 && d != -1)
          rep.violations.push_back({i, "diagonal block is not in GL(" + std::to_string(k) + ", Z), det = " + d.get_str()});
      }
    }
  }
  return rep;
}

inline CanonicalMap compose_maps(const CanonicalMap& f, const CanonicalMap& g) {
  if (f.filtration() != g.filtration()) throw std::invalid_argument("composition across different filtrations");
  const Filtration& filt = f.filtration();
  std::vector<RatMatrix> blocks;
  std::vector<std::vector<MultiPoly>> tails;
  // g's components at levels < i, as polynomials in the first offset(i) variables
  std::vector<MultiPoly> g_lower;
  for (std::size_t i = 0; i < f.levels(); ++i) {
    blocks.push_back(f.block(i) * g.block(i));
    const std::size_t nv = filt.offset(i);
    std::vector<MultiPoly> level;
    std::vector<MultiPoly> g_lower_here;
    g_lower_here.reserve(nv);
    for (const auto& p : g_lower) g_lower_here.push_back(p.extended(nv));
    for (std::size_t row = 0; row < filt.block_dim(i); ++row) {
      // f.block * g.tail + f.tail ∘ (g at lower levels)
      MultiPoly t = f.tail(i)[row].compose(g_lower_here);
      for (std::size_t col = 0; col < filt.block_dim(i); ++col) {
        const Rat& c = f.block(i)(row, col);
        if (c != 0) t += c * g.tail(i)[col];
      }
      level.push_back(std::move(t));
    }
    tails.push_back(level);
    if (i + 1 < f.levels())
      for (auto& p : g.level_polys(i)) g_lower.push_back(std::move(p));
  }
  return CanonicalMap(filt, std::move(blocks), std::move(tails));
}

struct NotInvertible : std::domain_error {
  std::size_t level;
  explicit NotInvertible(std::size_t lvl)
      : std::domain_error("diagonal block at level " + std::to_string(lvl + 1) + " is singular"), level(lvl) {}
};

// Level-by-level back substitution: x_i = B_i^{-1}(y_i - tail_i(x_{<i}(y))).
inline CanonicalMap invert_map(const CanonicalMap& f) {
  const Filtration& filt = f.filtration();
  std::vector<RatMatrix> blocks;
  std::vector<std::vector<MultiPoly>> tails;
  std::vector<MultiPoly> inv_lower;  // inverse components of levels < i, in y_{<i}
  for (std::size_t i = 0; i < f.levels(); ++i) {
    RatMatrix binv;
    try {
      binv = inverse(f.block(i));
    } catch (const std::domain_error&) {
      throw NotInvertible(i);
    }
    const std::size_t nv = filt.offset(i);
    std::vector<MultiPoly> inv_lower_here;
    for (const auto& p : inv_lower) inv_lower_here.push_back(p.extended(nv));
    std::vector<MultiPoly> level;
    std::vector<MultiPoly> tail_sub;
    for (std::size_t row = 0; row < filt.block_dim(i); ++row)
      tail_sub.push_back(f.tail(i)[row].compose(inv_lower_here));
    for (std::size_t row = 0; row < filt.block_dim(i); ++row) {
      MultiPoly t(nv);
      for (std::size_t col = 0; col < filt.block_dim(i); ++col) {
        const Rat& c = binv(row, col);
        if (c != 0) t -= c * tail_sub[col];
      }
      level.push_back(std::move(t));
    }
    blocks.push_back(std::move(binv));
    tails.push_back(level);
    if (i + 1 < f.levels()) {
      // inverse map's level-i component in y_{<= i}
      const std::size_t nv2 = filt.offset(i + 1);
      for (std::size_t row = 0; row < filt.block_dim(i); ++row) {
        MultiPoly p = tails.back()[row].extended(nv2);
        for (std::size_t col = 0; col < filt.block_dim(i); ++col) {
          const Rat& c = blocks.back()(row, col);
          if (c != 0) p += c * MultiPoly::variable(nv2, filt.offset(i) + col);
        }
        inv_lower.push_back(std::move(p));
      }
    }
  }
  return CanonicalMap(filt, std::move(blocks), std::move(tails));
}

inline CanonicalMap power_map(const CanonicalMap& f, long e) {
  CanonicalMap base = e < 0 ? invert_map(f) : f;
  unsigned long k = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  CanonicalMap r = CanonicalMap::identity(f.filtration());
  while (k) {
    if (k & 1) r = compose_maps(r, base);
    base = compose_maps(base, base);
    k >>= 1;
  }
  return r;
}

// g f g^{-1}
inline CanonicalMap conjugate_map(const CanonicalMap& g, const CanonicalMap& f) {
  return compose_maps(compose_maps(g, f), invert_map(g));
}

inline std::vector<RatMatrix> linearisation(const CanonicalMap& f) {
  std::vector<RatMatrix> r;
  r.reserve(f.levels());
  for (std::size_t i = 0; i < f.levels(); ++i) r.push_back(f.block(i));
  return r;
}

// Exact Jacobian at a point: block lower triangular, diagonal blocks are the
// level blocks, strictly lower part comes from the tails.
inline RatMatrix jacobian_at(const CanonicalMap& f, const std::vector<Rat>& x0) {
  const Filtration& filt = f.filtration();
  if (x0.size() != filt.total_dim()) throw std::invalid_argument("point dimension mismatch");
  const std::size_t h = filt.total_dim();
  RatMatrix j(h, h);
  for (std::size_t i = 0; i < f.levels(); ++i) {
    const std::size_t off = filt.offset(i);
    std::vector<Rat> lower(x0.begin(), x0.begin() + static_cast<long>(off));
    for (std::size_t row = 0; row < filt.block_dim(i); ++row) {
      for (std::size_t col = 0; col < filt.block_dim(i); ++col) j(off + row, off + col) = f.block(i)(row, col);
      for (std::size_t v = 0; v < off; ++v) j(off + row, v) = f.tail(i)[row].derivative(v).evaluate(lower);
    }
  }
  return j;
}

}  // namespace nfp
