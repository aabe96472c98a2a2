#pragma once

// Exact fixed-point analysis of canonical-type maps. Each level is a linear
// system in its own variables given the lower ones; a singular consistent
// level introduces kernel parameters that are carried symbolically through
// the deeper levels, so the Empty / Unique / PositiveDimensional trichotomy
// is decided exactly.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nfp/canonical.hpp"
#include "nfp/group.hpp"
#include "nfp/matrix.hpp"
#include "nfp/multipoly.hpp"
#include "nfp/nielsen.hpp"
#include "nfp/numeric.hpp"
#include "nfp/reidemeister.hpp"

namespace nfp {

struct FixSetStructure {
  enum class Kind { Empty, Unique, PositiveDimensional };
  Kind kind = Kind::Empty;
  std::vector<Rat> point;                      // Unique
  std::size_t first_degenerate_level = 0;      // PositiveDimensional (0-based)
  std::vector<std::vector<Rat>> kernel_basis;  // ker(I - D) at that level
  // Parametrized solution: coordinate polynomials in the surviving free
  // parameters; evaluating at any parameter vector yields a fixed point.
  std::vector<MultiPoly> parametrized;
  std::size_t num_parameters = 0;

  std::vector<Rat> point_at(const std::vector<Rat>& params) const {
    if (params.size() != num_parameters) throw std::invalid_argument("parameter arity mismatch");
    return evaluate_vector(parametrized, params);
  }
};

namespace detail {

// Solve (I - D) x = rhs where rhs entries are polynomials in the current
// parameters. Returns per-coordinate solution polynomials, appending new
// parameters for the kernel directions. Constraints from zero rows must be
// identically zero (consistent), a nonzero constant (inconsistent), or
// affine in the parameters (eliminated exactly by substitution into
// everything solved so far).
struct LevelSolve {
  bool inconsistent = false;
  bool singular = false;
  std::vector<std::vector<Rat>> kernel_basis;
  std::vector<MultiPoly> solution;       // in the (possibly new) parameter arity
  std::vector<MultiPoly> substitution;   // old parameters -> polys in new parameters, when eliminated
  std::size_t new_num_params = 0;
};

inline LevelSolve solve_level(const RatMatrix& i_minus_d, std::vector<MultiPoly> rhs, std::size_t num_params) {
  const std::size_t k = i_minus_d.rows();
  LevelSolve out;

  // row echelon with full set of column pivots over Q, applied to rhs as well
  RatMatrix a = i_minus_d;
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < k && row < k; ++col) {
    std::size_t p = row;
    while (p < k && a(p, col) == 0) ++p;
    if (p == k) continue;
    if (p != row) {
      for (std::size_t j = 0; j < k; ++j) std::swap(a(row, j), a(p, j));
      std::swap(rhs[row], rhs[p]);
    }
    Rat piv = a(row, col);
    for (std::size_t j = 0; j < k; ++j) a(row, j) /= piv;
    rhs[row] *= Rat(1) / piv;
    for (std::size_t r = 0; r < k; ++r) {
      if (r == row || a(r, col) == 0) continue;
      Rat f = a(r, col);
      for (std::size_t j = 0; j < k; ++j) a(r, j) -= f * a(row, j);
      rhs[r] -= f * rhs[row];
    }
    pivot_col.push_back(col);
    ++row;
  }
  const std::size_t rank = row;

  std::vector<bool> is_pivot(k, false);
  for (std::size_t c : pivot_col) is_pivot[c] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < k; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);

  // constraints: rows rank..k-1 demand rhs == 0
  std::vector<MultiPoly> eliminations;  // identity on params, rewritten as constraints are consumed
  std::size_t cur_params = num_params;
  std::vector<MultiPoly> param_subst = identity_polys(num_params);
  std::vector<MultiPoly> constraints(rhs.begin() + static_cast<long>(rank), rhs.end());
  for (auto& c : constraints) {
    MultiPoly reduced = c.compose(param_subst);
    if (reduced.is_zero()) continue;
    if (reduced.is_constant()) {
      out.inconsistent = true;
      return out;
    }
    if (reduced.degree() > 1) {
      // a single monomial c * u_j^k = 0 still pins u_j = 0 exactly
      if (reduced.terms().size() == 1) {
        const auto& [mono, coef] = *reduced.terms().begin();
        std::size_t var = 0, used = 0;
        for (std::size_t v = 0; v < mono.size(); ++v)
          if (mono[v] != 0) {
            var = v;
            ++used;
          }
        if (used == 1) {
          std::vector<MultiPoly> sub = identity_polys(reduced.num_vars());
          sub[var] = MultiPoly(reduced.num_vars());
          for (auto& p : param_subst) p = p.compose(sub);
          continue;
        }
      }
      throw std::domain_error("fixed-point constraint is nonlinear in the kernel parameters; unsupported");
    }
    // affine: pick the highest-index parameter with nonzero coefficient
    std::size_t var = 0;
    Rat coef;
    bool found = false;
    for (std::size_t v = reduced.num_vars(); v-- > 0;) {
      MultiPoly dv = reduced.derivative(v);
      if (!dv.is_zero()) {
        var = v;
        coef = dv.constant_term();
        found = true;
        break;
      }
    }
    if (!found || coef == 0) {
      out.inconsistent = true;  // constant nonzero after all
      return out;
    }
    // u_var = -(reduced - coef * u_var) / coef, substituted into param_subst
    std::size_t nv = reduced.num_vars();
    MultiPoly expr = reduced - coef * MultiPoly::variable(nv, var);
    expr *= Rat(-1) / coef;
    std::vector<MultiPoly> sub = identity_polys(nv);
    sub[var] = expr;
    for (auto& p : param_subst) p = p.compose(sub);
  }

  // drop eliminated parameters: re-index the parameters actually used
  // (keep arity; unused parameters are harmless but we compact for clarity)
  out.substitution = param_subst;

  // kernel basis of (I - D) from the echelon form
  if (rank < k) {
    out.singular = true;
    for (std::size_t fc : free_cols) {
      std::vector<Rat> kv(k, Rat(0));
      kv[fc] = 1;
      for (std::size_t r = 0; r < rank; ++r) kv[pivot_col[r]] = -a(r, fc);
      out.kernel_basis.push_back(std::move(kv));
    }
  }

  // new parameters for the free columns
  const std::size_t added = free_cols.size();
  out.new_num_params = cur_params + added;
  std::vector<MultiPoly> rhs_in_new;
  for (std::size_t r = 0; r < rank; ++r)
    rhs_in_new.push_back(rhs[r].compose(param_subst).extended(out.new_num_params));

  out.solution.assign(k, MultiPoly(out.new_num_params));
  for (std::size_t idx = 0; idx < added; ++idx)
    out.solution[free_cols[idx]] = MultiPoly::variable(out.new_num_params, cur_params + idx);
  for (std::size_t r = 0; r < rank; ++r) {
    MultiPoly s = rhs_in_new[r];
    for (std::size_t idx = 0; idx < added; ++idx) {
      const Rat& c = a(r, free_cols[idx]);
      if (c != 0) s -= c * MultiPoly::variable(out.new_num_params, cur_params + idx);
    }
    out.solution[pivot_col[r]] = std::move(s);
  }
  return out;
}

}  // namespace detail

// Level-by-level exact solve of f(x) = x.
inline FixSetStructure solve_fixed_points(const CanonicalMap& f) {
  const Filtration& filt = f.filtration();
  FixSetStructure out;
  std::vector<MultiPoly> partial;  // solved coordinates as polys in parameters
  std::size_t num_params = 0;
  bool degenerate = false;
  std::size_t first_level = 0;
  std::vector<std::vector<Rat>> first_kernel;

  for (std::size_t i = 0; i < filt.levels(); ++i) {
    const std::size_t k = filt.block_dim(i);
    // rhs = tail_i evaluated at the partial solution
    std::vector<MultiPoly> rhs;
    rhs.reserve(k);
    std::vector<MultiPoly> lower(partial.begin(), partial.begin() + static_cast<long>(filt.offset(i)));
    for (auto& p : lower) p = p.extended(num_params);
    for (std::size_t r = 0; r < k; ++r) rhs.push_back(f.tail(i)[r].compose(lower).extended(num_params));

    RatMatrix imd = RatMatrix::identity(k) - f.block(i);
    detail::LevelSolve ls = detail::solve_level(imd, std::move(rhs), num_params);
    if (ls.inconsistent) {
      out.kind = FixSetStructure::Kind::Empty;
      return out;
    }
    // rewrite earlier coordinates through the parameter substitution
    if (num_params > 0) {
      for (auto& p : partial) p = p.compose(ls.substitution);
    }
    if (ls.singular && !degenerate) {
      degenerate = true;
      first_level = i;
      first_kernel = ls.kernel_basis;
    }
    for (auto& p : partial) p = p.extended(ls.new_num_params);
    for (auto& s : ls.solution) partial.push_back(std::move(s));
    num_params = ls.new_num_params;
  }

  // a parameter may have been eliminated later; count the ones that survive
  std::vector<bool> used(num_params, false);
  for (const auto& p : partial) {
    long mv = p.max_var();
    for (long v = 0; v <= mv; ++v)
      if (p.depends_on(static_cast<std::size_t>(v))) used[static_cast<std::size_t>(v)] = true;
  }
  std::size_t live = 0;
  for (bool b : used)
    if (b) ++live;

  if (live == 0) {
    out.kind = FixSetStructure::Kind::Unique;
    std::vector<Rat> zeros(num_params, Rat(0));
    out.point = evaluate_vector(partial, zeros);
    // exactness check
    std::vector<Rat> image = f.apply(out.point);
    if (image != out.point) throw std::logic_error("fixed-point solve produced a non-fixed point");
    out.parametrized = std::move(partial);
    for (auto& p : out.parametrized) p = p.truncated(0);
    out.num_parameters = 0;
    return out;
  }

  out.kind = FixSetStructure::Kind::PositiveDimensional;
  out.first_degenerate_level = first_level;
  out.kernel_basis = std::move(first_kernel);
  out.parametrized = std::move(partial);
  out.num_parameters = num_params;
  return out;
}

struct QuotientFixCount {
  bool uncountable = false;
  Count count;                     // when not uncountable
  Int nielsen_value;               // cross-checked against the class count
};

namespace detail {

// Walk the Reidemeister recursion; at a singular level, solve the
// consistency condition for an integer twist and probe the resulting maps
// for a positive-dimensional fixed set.
inline bool find_uncountable_witness(const GroupSpec& g, const CanonicalMap& twisted, std::size_t level) {
  if (level == g.filtration.levels()) return false;
  RatMatrix basis = g.level_basis(level);
  RatMatrix m_level = inverse(basis) * (RatMatrix::identity(basis.rows()) - twisted.block(level)) * basis;
  if (!is_integral(m_level))
    throw std::domain_error("endomorphism does not preserve the level " + std::to_string(level + 1) + " lattice");
  IntMatrix imf = to_integer(m_level);
  CokernelClasses classes = cokernel_classes(imf);
  if (classes.finite) {
    for (const auto& v : classes.representatives)
      if (find_uncountable_witness(g, compose_maps(g.level_element(level, v), twisted), level + 1)) return true;
    return false;
  }
  // singular level: try the twists v0 + offsets that make the level-i system
  // consistent for SOME assignment; probing v0 and kernel perturbations
  FixSetStructure s = solve_fixed_points(twisted);
  if (s.kind == FixSetStructure::Kind::PositiveDimensional) return true;
  const std::size_t k = g.filtration.block_dim(level);
  std::vector<long> probes{0, 1, -1, 2, -2};
  for (std::size_t j = 0; j < k; ++j) {
    for (long off : probes) {
      if (off == 0) continue;
      std::vector<Int> v(k, Int(0));
      v[j] = off;
      FixSetStructure t = solve_fixed_points(compose_maps(g.level_element(level, v), twisted));
      if (t.kind == FixSetStructure::Kind::PositiveDimensional) return true;
    }
  }
  return false;
}

}  // namespace detail

// Fixed points of the induced map on the quotient manifold: one per
// essential twisted class. R finite: solve each class representative's lift
// exactly, count the nonempty (necessarily unique) fixed sets; the count
// must equal the Nielsen number. R infinite: search the singular chains for
// a positive-dimensional fibre (uncountable fixed set); if none shows up the
// configuration is structurally impossible for valid inputs and an error is
// raised.
inline QuotientFixCount count_fixed_points_on_quotient(const GroupSpec& g, const EndoSpec& phi) {
  QuotientFixCount out;
  NielsenResult n = nielsen_average_invariant(g, phi);
  out.nielsen_value = n.value;
  ReidemeisterResult r = reidemeister_filtered(g, phi, true);
  if (r.count.is_finite()) {
    Int cnt(0);
    for (const auto& rep : r.representatives) {
      FixSetStructure s = solve_fixed_points(compose_maps(rep, phi.lift()));
      if (s.kind == FixSetStructure::Kind::PositiveDimensional) {
        out.uncountable = true;  // cannot happen when R is finite on consistent data
        return out;
      }
      if (s.kind == FixSetStructure::Kind::Unique) cnt += 1;
    }
    out.count = Count(cnt);
    if (Count(n.value) != out.count)
      throw std::domain_error("quotient fixed-point count " + out.count.str() + " differs from N = " +
                              n.value.get_str());
    return out;
  }
  if (detail::find_uncountable_witness(g, phi.lift(), 0)) {
    out.uncountable = true;
    return out;
  }
  throw std::domain_error("R is infinite but every probed fibre is finite; structurally impossible "
                          "for canonical-type data over an NR subgroup");
}

}  // namespace nfp
