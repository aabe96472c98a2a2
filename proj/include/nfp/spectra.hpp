#pragma once

// Spectral certification: eigenvalue root-of-unity obstructions for the
// NR and net properties, and the exponent bound used to build power
// subgroups. Full decision for rank >= 2 actions would need multiplicative
// relations among algebraic numbers; the searches here are bounded and
// certificate-producing, with Inconclusive as an honest verdict.

#include <cstdlib>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nfp/cyclotomic.hpp"
#include "nfp/intpoly.hpp"
#include "nfp/matrix.hpp"
#include "nfp/numeric.hpp"

namespace nfp {

struct RefutationWitness {
  std::size_t level = 0;           // 0-based level index (0 for single-matrix queries)
  std::vector<long> word;          // exponents over the level's generator list
  long order = 0;                  // Phi_order divides the word's char poly
  IntPoly char_poly_found;

  std::string str() const {
    std::ostringstream os;
    os << "level " << (level + 1) << ", word exponents (";
    for (std::size_t i = 0; i < word.size(); ++i) os << (i ? "," : "") << word[i];
    os << "), cyclotomic order " << order;
    return os.str();
  }
};

struct Certification {
  enum class Verdict { Certified, Refuted, Inconclusive };
  Verdict verdict = Verdict::Inconclusive;
  std::optional<RefutationWitness> witness;
  long bound = 0;        // search bound used when Inconclusive
  std::string method;

  bool certified() const { return verdict == Verdict::Certified; }
  bool refuted() const { return verdict == Verdict::Refuted; }

  std::string verdict_str() const {
    switch (verdict) {
      case Verdict::Certified: return "certified";
      case Verdict::Refuted: return "refuted";
      default: return "inconclusive up to bound " + std::to_string(bound);
    }
  }
};

struct SpectralLine {
  std::size_t level;
  std::vector<long> word;
  IntPoly char_poly;
  std::vector<long> cyclotomic_orders;  // nontrivial orders found
  bool reciprocal_spectrum;             // gcd(p, rev p) nontrivial: candidate modulus-1 eigenvalues
};

struct SpectralReport {
  std::vector<SpectralLine> lines;
  Certification certification;
};

namespace detail {

inline bool commute(const IntMatrix& a, const IntMatrix& b) { return a * b == b * a; }

inline SpectralLine analyse_word(std::size_t level, std::vector<long> word, const IntMatrix& w) {
  SpectralLine line;
  line.level = level;
  line.word = std::move(word);
  line.char_poly = char_poly(w);
  line.cyclotomic_orders = cyclotomic_factor_scan(line.char_poly, false);
  RatPoly g = gcd(to_rational(line.char_poly), to_rational(line.char_poly.reciprocal()));
  line.reciprocal_spectrum = g.degree() > 0;
  return line;
}

// enumerate exponent vectors e != 0 with sum |e_i| <= bound, first nonzero
// entry positive (a word and its inverse carry the same root-of-unity data)
inline void for_each_exponent_vector(std::size_t r, long bound, const std::function<void(const std::vector<long>&)>& fn) {
  std::vector<long> e(r, 0);
  std::function<void(std::size_t, long)> rec = [&](std::size_t pos, long budget) {
    if (pos == r) {
      bool nonzero = false, first_pos = false;
      for (long x : e)
        if (x != 0) {
          nonzero = true;
          first_pos = x > 0;
          break;
        }
      if (nonzero && first_pos) fn(e);
      return;
    }
    for (long v = -budget; v <= budget; ++v) {
      e[pos] = v;
      rec(pos + 1, budget - std::abs(v));
    }
    e[pos] = 0;
  };
  rec(0, bound);
}

}  // namespace detail

// NR query for one level: the abelianised conjugation action is generated by
// pairwise commuting unimodular matrices. A single generator G is decided
// exactly: some G^z has a nontrivial root-of-unity eigenvalue iff G itself
// does (lambda^z a root of unity forces lambda to be one). For rank >= 2 the
// words with |e|_1 <= word_bound are scanned.
inline Certification nr_certify_level(std::size_t level, const std::vector<IntMatrix>& generators, long word_bound,
                                      SpectralReport* report = nullptr) {
  std::vector<IntMatrix> gens;
  for (const auto& g : generators) {
    g.require_square();
    if (!is_unimodular(g)) throw std::invalid_argument("NR level action generator is not unimodular");
    if (g != IntMatrix::identity(g.rows())) gens.push_back(g);
  }
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      if (!detail::commute(gens[i], gens[j])) throw std::invalid_argument("NR level action generators do not commute");

  Certification cert;
  if (gens.empty()) {
    cert.verdict = Certification::Verdict::Certified;
    cert.method = "trivial action";
    if (report) report->certification = cert;
    return cert;
  }

  auto scan_word = [&](std::vector<long> word, const IntMatrix& w) -> bool {
    SpectralLine line = detail::analyse_word(level, std::move(word), w);
    bool hit = !line.cyclotomic_orders.empty();
    if (hit) {
      cert.verdict = Certification::Verdict::Refuted;
      cert.witness = RefutationWitness{level, line.word, line.cyclotomic_orders.front(), line.char_poly};
    }
    if (report) report->lines.push_back(std::move(line));
    return hit;
  };

  if (gens.size() == 1) {
    cert.method = "rank-1 exact";
    if (!scan_word({1}, gens[0])) cert.verdict = Certification::Verdict::Certified;
    if (report) report->certification = cert;
    return cert;
  }

  cert.method = "bounded word scan";
  cert.bound = word_bound;
  bool refuted = false;
  detail::for_each_exponent_vector(gens.size(), word_bound, [&](const std::vector<long>& e) {
    if (refuted) return;
    IntMatrix w = IntMatrix::identity(gens[0].rows());
    for (std::size_t i = 0; i < gens.size(); ++i)
      if (e[i] != 0) w = w * pow(gens[i], e[i]);
    refuted = scan_word(e, w);
  });
  if (!refuted) cert.verdict = Certification::Verdict::Inconclusive;
  if (report) report->certification = cert;
  return cert;
}

// All levels must certify; the first refutation wins.
inline Certification nr_certify(const std::vector<std::vector<IntMatrix>>& actions_per_level, long word_bound,
                                SpectralReport* report = nullptr) {
  if (actions_per_level.size() == 1) return nr_certify_level(0, actions_per_level[0], word_bound, report);
  Certification overall;
  overall.verdict = Certification::Verdict::Certified;
  overall.method = "per-level";
  for (std::size_t lvl = 0; lvl < actions_per_level.size(); ++lvl) {
    Certification c = nr_certify_level(lvl, actions_per_level[lvl], word_bound, report);
    if (c.refuted()) return c;
    if (!c.certified()) {
      overall = c;  // keep scanning for a refutation elsewhere
    }
  }
  return overall;
}

// Net query for a single matrix: (a) a nontrivial cyclotomic factor of the
// char poly refutes; (b) all roots real positive certifies (products of
// positive reals are never nontrivial roots of unity); otherwise eigenvalue
// products lambda_1^{e_1}...lambda_n^{e_n} are probed through Kronecker
// powers M^{e_1} (x) ... (x) M^{e_r} with sum |e_j| <= exponent_bound.
inline Certification net_certify(const IntMatrix& m, long exponent_bound, SpectralReport* report = nullptr) {
  m.require_square();
  Certification cert;
  SpectralLine base = detail::analyse_word(0, {1}, m);
  if (report) report->lines.push_back(base);
  if (!base.cyclotomic_orders.empty()) {
    cert.verdict = Certification::Verdict::Refuted;
    cert.witness = RefutationWitness{0, {1}, base.cyclotomic_orders.front(), base.char_poly};
    cert.method = "cyclotomic factor of char poly";
    if (report) report->certification = cert;
    return cert;
  }
  if (all_roots_real_positive(base.char_poly)) {
    cert.verdict = Certification::Verdict::Certified;
    cert.method = "all eigenvalues real positive (Sturm)";
    if (report) report->certification = cert;
    return cert;
  }

  const bool unimodular = is_unimodular(m);
  cert.method = "bounded Kronecker scan";
  cert.bound = exponent_bound;
  bool refuted = false;
  for (long r = 1; r <= exponent_bound && !refuted; ++r) {
    detail::for_each_exponent_vector(static_cast<std::size_t>(r), exponent_bound, [&](const std::vector<long>& e) {
      if (refuted) return;
      for (long x : e)
        if (x == 0) return;  // factors with exponent 0 collapse to smaller r
      if (!unimodular)
        for (long x : e)
          if (x < 0) return;
      IntMatrix w = pow(m, e[0]);
      for (std::size_t i = 1; i < e.size(); ++i) w = kronecker(w, pow(m, e[i]));
      SpectralLine line = detail::analyse_word(0, e, w);
      if (report) report->lines.push_back(line);
      if (!line.cyclotomic_orders.empty()) {
        refuted = true;
        cert.verdict = Certification::Verdict::Refuted;
        cert.witness = RefutationWitness{0, e, line.cyclotomic_orders.front(), line.char_poly};
      }
    });
  }
  if (!refuted) cert.verdict = Certification::Verdict::Inconclusive;
  if (report) report->certification = cert;
  return cert;
}

// Re-run the divisibility behind a refutation certificate.
inline bool reverify(const RefutationWitness& w) {
  return divides(cyclotomic(w.order), w.char_poly_found) && w.order >= 2;
}

// n = lcm{ d : phi(d) <= degree_bound }. Any multiple of the minimal
// exponent works in the power-subgroup construction, so this computable
// bound is valid.
inline Int wilking_exponent(long degree_bound) {
  if (degree_bound < 1) throw std::invalid_argument("degree bound must be >= 1");
  Int n(1);
  for (long d = 1; d <= 2 * degree_bound * degree_bound + 1; ++d) {
    if (euler_phi(d) > degree_bound) continue;
    Int dd(d);
    mpz_lcm(n.get_mpz_t(), n.get_mpz_t(), dd.get_mpz_t());
  }
  return n;
}

}  // namespace nfp
