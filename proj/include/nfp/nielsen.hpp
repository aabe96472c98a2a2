#pragma once

// Nielsen numbers: the product formula on NR groups, the averaging formulas
// over an invariant NR subgroup and over a net subgroup, the rational
// coset-twist matrices M^i, the Jacobian form of the average, and the
// determinant-invariance and N = R consistency checks.

#include <cstddef>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nfp/canonical.hpp"
#include "nfp/group.hpp"
#include "nfp/matrix.hpp"
#include "nfp/numeric.hpp"
#include "nfp/reidemeister.hpp"
#include "nfp/spectra.hpp"

namespace nfp {

struct CosetTerm {
  std::string rep_name;
  std::vector<Int> level_dets;  // det(I - A_i(alpha) F_i) per level, signed
  Int product_abs;              // prod |det(...)|
};

struct NielsenResult {
  Int value;                     // the Nielsen number
  std::vector<CosetTerm> terms;  // one per coset representative
  std::size_t index = 1;         // [Pi:K] or [Pi:K']

  Int term_sum() const {
    Int s(0);
    for (const auto& t : terms) s += t.product_abs;
    return s;
  }
};

// prod_i |det(I - F_i)|
inline Int nielsen_product(const std::vector<IntMatrix>& blocks) {
  Int p(1);
  for (const auto& f : blocks) {
    f.require_square();
    p *= abs_int(det(IntMatrix::identity(f.rows()) - f));
  }
  return p;
}

namespace detail {

inline CosetTerm coset_term(const NamedMap& rep, const CanonicalMap& lift) {
  CanonicalMap composed = compose_maps(rep.map, lift);
  CosetTerm t;
  t.rep_name = rep.name;
  t.product_abs = 1;
  for (std::size_t i = 0; i < composed.levels(); ++i) {
    Rat d = det(RatMatrix::identity(composed.block(i).rows()) - composed.block(i));
    if (!is_integer(d))
      throw std::domain_error("non-integer level determinant for coset '" + rep.name + "'");
    t.level_dets.push_back(to_int(d));
    t.product_abs *= abs_int(t.level_dets.back());
  }
  return t;
}

inline NielsenResult average_over(const std::vector<NamedMap>& reps, const CanonicalMap& lift) {
  if (reps.empty()) throw std::invalid_argument("empty coset representative list");
  NielsenResult r;
  r.index = reps.size();
  for (const auto& rep : reps) r.terms.push_back(coset_term(rep, lift));
  Int total = r.term_sum();
  Int idx(static_cast<long>(r.index));
  if (total % idx != 0)
    throw std::domain_error("averaging sum " + total.get_str() + " is not divisible by the index " +
                            idx.get_str() + "; input data is inconsistent");
  r.value = total / idx;
  return r;
}

}  // namespace detail

// N(f) = (1/[Pi:K]) sum_{alpha in Pi/K} prod_i |det(I - A_i(alpha) F_i)|,
// blocks taken from the linearisation of rho(alpha) ∘ lift. Requires the
// K-fully-invariant flag and an NR assertion or certification request.
inline NielsenResult nielsen_average_invariant(const GroupSpec& g, const EndoSpec& phi) {
  if (!g.hypotheses.k_fully_invariant)
    throw std::invalid_argument("averaging over Pi/K needs the K_fully_invariant flag");
  if (g.hypotheses.nr == HypothesisStatus::None)
    throw std::invalid_argument("averaging over Pi/K needs the NR hypothesis asserted or certified");
  if (phi.lift().filtration() != g.filtration) throw std::invalid_argument("lift filtration mismatch");
  return detail::average_over(g.coset_reps, phi.lift());
}

// Same average over Pi/K' for a net K'. The determinant products do not
// depend on the choice of the inner fully invariant K (see mi_matrix), so
// only the representative set changes.
inline NielsenResult nielsen_average_net(const GroupSpec& g, const EndoSpec& phi) {
  if (g.hypotheses.net == HypothesisStatus::None)
    throw std::invalid_argument("averaging over Pi/K' needs the net hypothesis asserted or certified");
  if (phi.lift().filtration() != g.filtration) throw std::invalid_argument("lift filtration mismatch");
  return detail::average_over(g.net_reps(), phi.lift());
}

// M^i for the twist tau_alpha ∘ phi at the given level: q = rho(alpha)∘lift,
// gamma_j = (level generator j)^m; the level-i coordinates of q∘rho(gamma_j)
// minus q give the integer columns lambda_{.j}, and M^i = (1/m) [lambda].
// Asserts |det(I - A_i(alpha) F_i)| = |det(I - M^i)|.
inline RatMatrix mi_matrix(const GroupSpec& g, const EndoSpec& phi, std::size_t level, const CanonicalMap& rep,
                           long m) {
  if (m <= 0) throw std::invalid_argument("power index m must be positive");
  const std::size_t k = g.filtration.block_dim(level);
  CanonicalMap q = compose_maps(rep, phi.lift());
  RatMatrix basis = g.level_basis(level);
  RatMatrix basis_inv = inverse(basis);
  RatMatrix lambda_ambient(k, k);
  for (std::size_t j = 0; j < k; ++j) {
    CanonicalMap gamma = power_map(g.generator(g.level_generators.at(level).at(j)), m);
    CanonicalMap c = compose_maps(q, gamma);
    // tau_alpha(phi(gamma_j^m)) must lie in Pi_level: trivial below, a pure
    // translation on the level itself
    for (std::size_t l = 0; l < level; ++l)
      if (c.block(l) != q.block(l) || c.tail(l) != q.tail(l))
        throw std::domain_error("power image leaves level " + std::to_string(level + 1) +
                                ": not trivial on level " + std::to_string(l + 1));
    if (c.block(level) != q.block(level))
      throw std::domain_error("power image does not translate level " + std::to_string(level + 1));
    for (std::size_t row = 0; row < k; ++row) {
      MultiPoly diff = c.tail(level)[row] - q.tail(level)[row];
      if (!diff.is_constant())
        throw std::domain_error("power image translation at level " + std::to_string(level + 1) +
                                " is not constant");
      lambda_ambient(row, j) = diff.constant_term();
    }
  }
  // coordinates w.r.t. the level generator basis must be integral
  RatMatrix lambda = basis_inv * lambda_ambient;
  if (!is_integral(lambda)) throw std::domain_error("power image coordinates are not integral");
  RatMatrix mi(k, k);
  for (std::size_t row = 0; row < k; ++row)
    for (std::size_t j = 0; j < k; ++j) mi(row, j) = lambda(row, j) / Rat(m);
  // determinant identity across the index-m power embedding
  Rat lhs = det(RatMatrix::identity(k) - q.block(level));
  Rat rhs = det(RatMatrix::identity(k) - mi);
  Rat la = lhs < 0 ? Rat(-lhs) : lhs;
  Rat ra = rhs < 0 ? Rat(-rhs) : rhs;
  if (la != ra)
    throw std::domain_error("M^i determinant identity fails at level " + std::to_string(level + 1));
  return mi;
}

struct JacobianRouteResult {
  NielsenResult result;
  std::vector<std::vector<Rat>> sample_points;
};

inline std::vector<Rat> random_rational_point(std::mt19937_64& rng, std::size_t dim) {
  std::uniform_int_distribution<long> num(-12, 12);
  std::uniform_int_distribution<long> den(1, 7);
  std::vector<Rat> x;
  x.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) x.push_back(make_rat(Int(num(rng)), Int(den(rng))));
  return x;
}

// N(f) = (1/[Pi:K]) sum_alpha |det(I - J(rho(alpha)∘p)_{x0})|; the
// determinant must be exactly the same rational at every sample point
// (canonical-type hypothesis), and the value must agree with the
// linearisation route.
inline JacobianRouteResult nielsen_via_jacobian(const GroupSpec& g, const EndoSpec& phi, std::size_t samples = 10,
                                                unsigned long seed = 20240901) {
  if (samples == 0) throw std::invalid_argument("need at least one sample point");
  std::mt19937_64 rng(seed);
  const std::size_t h = g.filtration.total_dim();
  JacobianRouteResult out;
  for (std::size_t s = 0; s < samples; ++s) out.sample_points.push_back(random_rational_point(rng, h));

  NielsenResult r;
  r.index = g.index();
  for (const auto& rep : g.coset_reps) {
    CanonicalMap composed = compose_maps(rep.map, phi.lift());
    Rat d0;
    for (std::size_t s = 0; s < out.sample_points.size(); ++s) {
      RatMatrix j = jacobian_at(composed, out.sample_points[s]);
      Rat d = det(RatMatrix::identity(h) - j);
      if (s == 0) {
        d0 = d;
      } else if (d != d0) {
        throw std::domain_error("det(I - J) depends on the sample point for coset '" + rep.name +
                                "': the representation is not of canonical type");
      }
    }
    if (!is_integer(d0)) throw std::domain_error("non-integer Jacobian determinant for coset '" + rep.name + "'");
    CosetTerm t;
    t.rep_name = rep.name;
    t.level_dets.push_back(to_int(d0));
    t.product_abs = abs_int(t.level_dets.back());
    r.terms.push_back(std::move(t));
  }
  Int total = r.term_sum();
  Int idx(static_cast<long>(r.index));
  if (total % idx != 0) throw std::domain_error("Jacobian-route averaging sum not divisible by the index");
  r.value = total / idx;

  NielsenResult lin = detail::average_over(g.coset_reps, phi.lift());
  if (lin.value != r.value)
    throw std::domain_error("Jacobian route value " + r.value.get_str() + " disagrees with linearisation route " +
                            lin.value.get_str());
  out.result = std::move(r);
  return out;
}

struct InvarianceCheckReport {
  bool ok = false;
  Int base_det;                       // det(I - X)
  std::vector<std::pair<std::vector<long>, Int>> checked;  // (v, det(I - A(v) X))
  std::string failure;
};

// det(I - A(v) X) = det(I - X) for all |v|_inf <= range, where A is the
// commuting-generator family v -> prod A_j^{v_j}. Preconditions checked:
// det(I - Phi) != 0, Phi(k v) integral, X A(kv) = A(Phi(kv)) X on the range,
// and each A(v) net (bounded certification; an Inconclusive verdict is
// accepted only with assume_net).
inline InvarianceCheckReport net_family_det_invariance(const IntMatrix& x, const std::vector<IntMatrix>& a_gens,
                                                       const RatMatrix& phi, long k, long range,
                                                       bool assume_net = false, long net_bound = 1) {
  x.require_square();
  phi.require_square();
  const std::size_t mdim = a_gens.size();
  if (phi.rows() != mdim) throw std::invalid_argument("Phi dimension must match the number of A-generators");
  if (k <= 0 || range < 0) throw std::invalid_argument("bad k or range");
  Rat dphi = det(RatMatrix::identity(mdim) - phi);
  if (dphi == 0) throw std::invalid_argument("Phi has 1 as an eigenvalue");
  for (const auto& gmat : a_gens)
    if (!is_unimodular(gmat)) throw std::invalid_argument("A-generator is not in SL/GL(n, Z)");
  for (std::size_t i = 0; i < mdim; ++i)
    for (std::size_t j = i + 1; j < mdim; ++j)
      if (!(a_gens[i] * a_gens[j] == a_gens[j] * a_gens[i]))
        throw std::invalid_argument("A-generators do not commute");

  auto a_of = [&](const std::vector<long>& v) {
    IntMatrix w = IntMatrix::identity(x.rows());
    for (std::size_t i = 0; i < mdim; ++i)
      if (v[i] != 0) w = w * pow(a_gens[i], v[i]);
    return w;
  };

  InvarianceCheckReport rep;
  rep.base_det = det(IntMatrix::identity(x.rows()) - x);

  std::vector<long> v(mdim, -range);
  auto advance = [&]() {
    std::size_t i = 0;
    while (i < mdim) {
      if (++v[i] <= range) return true;
      v[i] = -range;
      ++i;
    }
    return false;
  };

  if (mdim == 0) {
    rep.ok = true;
    return rep;
  }

  do {
    // net precondition per tested v
    IntMatrix av = a_of(v);
    Certification net = net_certify(av, net_bound);
    if (net.refuted()) {
      std::ostringstream os;
      os << "A(v) refuted as net at v = (";
      for (std::size_t i = 0; i < mdim; ++i) os << (i ? "," : "") << v[i];
      os << "): " << net.witness->str();
      rep.failure = os.str();
      return rep;
    }
    if (!net.certified() && !assume_net) {
      rep.failure = "netness of A(v) inconclusive and not asserted";
      return rep;
    }
    // commutation X A(kv) = A(Phi(kv)) X
    std::vector<long> kv(mdim);
    for (std::size_t i = 0; i < mdim; ++i) kv[i] = k * v[i];
    std::vector<Rat> kv_rat;
    for (long c : kv) kv_rat.emplace_back(c);
    std::vector<Rat> phikv = phi.apply(kv_rat);
    std::vector<long> phikv_int(mdim);
    for (std::size_t i = 0; i < mdim; ++i) {
      if (!is_integer(phikv[i])) {
        rep.failure = "Phi(k v) is not integral at the tested v";
        return rep;
      }
      Int c = to_int(phikv[i]);
      if (!c.fits_slong_p()) {
        rep.failure = "Phi(k v) exponent out of range";
        return rep;
      }
      phikv_int[i] = c.get_si();
    }
    if (!(x * a_of(kv) == a_of(phikv_int) * x)) {
      std::ostringstream os;
      os << "commutation X A(kv) = A(Phi(kv)) X fails at v = (";
      for (std::size_t i = 0; i < mdim; ++i) os << (i ? "," : "") << v[i];
      os << ")";
      rep.failure = os.str();
      return rep;
    }
    Int d = det(IntMatrix::identity(x.rows()) - av * x);
    rep.checked.emplace_back(v, d);
    if (d != rep.base_det) {
      std::ostringstream os;
      os << "det(I - A(v) X) = " << d.get_str() << " != det(I - X) = " << rep.base_det.get_str() << " at v = (";
      for (std::size_t i = 0; i < mdim; ++i) os << (i ? "," : "") << v[i];
      os << ")";
      rep.failure = os.str();
      return rep;
    }
  } while (advance());

  rep.ok = true;
  return rep;
}

struct NEqualsRReport {
  NielsenResult nielsen;
  Count reidemeister;
  bool r_finite = false;
  bool n_equals_r = false;  // meaningful when r_finite
  std::vector<std::string> notes;
};

// Computes N (averaging) and R (filtered recursion); when R is finite the
// two must agree, otherwise N is reported alongside R = infinity.
inline NEqualsRReport n_equals_r_check(const GroupSpec& g, const EndoSpec& phi) {
  NEqualsRReport rep;
  rep.nielsen = nielsen_average_invariant(g, phi);
  ReidemeisterResult r = reidemeister_filtered(g, phi, false);
  rep.reidemeister = r.count;
  rep.r_finite = r.count.is_finite();
  if (rep.r_finite) {
    rep.n_equals_r = Count(rep.nielsen.value) == r.count;
    if (!rep.n_equals_r)
      throw std::domain_error("R is finite but N = " + rep.nielsen.value.get_str() +
                              " differs from R = " + r.count.str() + "; input data is inconsistent");
  }
  return rep;
}

}  // namespace nfp
