#pragma once

// Group and endomorphism data for a torsion-free filtration realised by a
// canonical-type polynomial representation. The filtration always exhausts
// the group (poly-Z); the finite quotients of the averaging formulas enter
// through coset representative lists for Pi/K and optionally Pi/K'.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nfp/canonical.hpp"
#include "nfp/matrix.hpp"
#include "nfp/numeric.hpp"

namespace nfp {

// word in named generators: ordered list of (name, exponent)
using Word = std::vector<std::pair<std::string, long>>;

inline std::string word_str(const Word& w) {
  if (w.empty()) return "id";
  std::string s;
  for (const auto& [name, e] : w) {
    if (!s.empty()) s += "*";
    s += name;
    if (e != 1) s += "^" + std::to_string(e);
  }
  return s;
}

struct NamedMap {
  std::string name;
  CanonicalMap map;
};

enum class HypothesisStatus { None, Asserted, CertifyRequested };

struct Hypotheses {
  bool k_fully_invariant = false;
  HypothesisStatus nr = HypothesisStatus::None;
  HypothesisStatus net = HypothesisStatus::None;
  std::vector<std::size_t> nr_levels;  // 0-based levels carrying the K/N conjugation action
  long word_bound = 4;
  long exponent_bound = 2;
  std::vector<std::string> notes;
};

class GroupSpec {
 public:
  Filtration filtration;
  std::map<std::string, CanonicalMap> generators;        // name -> representation
  std::vector<std::vector<std::string>> level_generators;  // per level, k_i names forming the Z^{k_i} basis
  std::vector<NamedMap> coset_reps;                      // Pi/K, [0] = identity
  std::optional<std::vector<NamedMap>> net_coset_reps;   // Pi/K' when distinct from coset_reps
  std::vector<NamedMap> k_generators;                    // generating set of K
  Hypotheses hypotheses;
  bool filtration_exhausts_group = true;

  const CanonicalMap& generator(const std::string& name) const {
    auto it = generators.find(name);
    if (it == generators.end()) throw std::invalid_argument("unknown generator '" + name + "'");
    return it->second;
  }

  CanonicalMap resolve_word(const Word& w) const {
    CanonicalMap m = CanonicalMap::identity(filtration);
    for (const auto& [name, e] : w) m = compose_maps(m, power_map(generator(name), e));
    return m;
  }

  // group element with translation part v at the given level, built from the
  // level's generator basis (tails at deeper levels come along for free)
  CanonicalMap level_element(std::size_t level, const std::vector<Int>& v) const {
    if (level >= filtration.levels()) throw std::invalid_argument("level out of range");
    if (v.size() != filtration.block_dim(level)) throw std::invalid_argument("translation dimension mismatch");
    CanonicalMap m = CanonicalMap::identity(filtration);
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] == 0) continue;
      if (!v[j].fits_slong_p()) throw std::domain_error("translation exponent out of range");
      m = compose_maps(m, power_map(generator(level_generators.at(level).at(j)), v[j].get_si()));
    }
    return m;
  }

  std::size_t index() const { return coset_reps.size(); }

  const std::vector<NamedMap>& net_reps() const {
    return net_coset_reps.has_value() ? *net_coset_reps : coset_reps;
  }

  // Translation vectors of the level generators in ambient coordinates,
  // as matrix columns. The identity for a group whose level lattices are
  // standard; a finite-index sublattice basis for a subgroup presented in
  // the ambient coordinates.
  RatMatrix level_basis(std::size_t level) const {
    const std::size_t k = filtration.block_dim(level);
    RatMatrix s(k, k);
    for (std::size_t j = 0; j < k; ++j) {
      const CanonicalMap& g = generator(level_generators.at(level).at(j));
      for (std::size_t r = 0; r < k; ++r) {
        const MultiPoly& t = g.tail(level)[r];
        if (!t.is_constant())
          throw std::invalid_argument("generator '" + level_generators[level][j] +
                                      "' does not translate its own level by a constant");
        s(r, j) = t.constant_term();
      }
    }
    return s;
  }

  // structural sanity; throws on violation
  void validate() const {
    if (level_generators.size() != filtration.levels())
      throw std::invalid_argument("level generator table does not match filtration");
    for (std::size_t i = 0; i < filtration.levels(); ++i) {
      if (level_generators[i].size() != filtration.block_dim(i))
        throw std::invalid_argument("level " + std::to_string(i + 1) + " needs exactly " +
                                    std::to_string(filtration.block_dim(i)) + " generators");
      for (const auto& name : level_generators[i]) {
        const CanonicalMap& g = generator(name);
        // generator j of level i is trivial on all lower levels and acts as
        // a pure translation on its own level
        for (std::size_t l = 0; l < i; ++l)
          if (g.block(l) != RatMatrix::identity(filtration.block_dim(l)) || !all_zero(g.tail(l)))
            throw std::invalid_argument("generator '" + name + "' of level " + std::to_string(i + 1) +
                                        " acts nontrivially on level " + std::to_string(l + 1));
        if (g.block(i) != RatMatrix::identity(filtration.block_dim(i)))
          throw std::invalid_argument("generator '" + name + "' does not act as a translation on its own level");
      }
      // the translations span a finite-index sublattice (usually standard)
      RatMatrix s = level_basis(i);
      if (!is_integral(s) || det(s) == 0)
        throw std::invalid_argument("level " + std::to_string(i + 1) +
                                    " generator translations do not span a finite-index lattice");
    }
    for (const auto& [name, g] : generators) {
      ValidationReport rep = validate_canonical(g, true);
      if (!rep.ok()) throw std::invalid_argument("generator '" + name + "' is not a group element:\n" + rep.str());
    }
    if (coset_reps.empty()) throw std::invalid_argument("coset representative list is empty");
    if (!coset_reps.front().map.is_identity())
      throw std::invalid_argument("first coset representative must be the identity");
    for (const auto& r : coset_reps) {
      ValidationReport rep = validate_canonical(r.map, true);
      if (!rep.ok()) throw std::invalid_argument("coset rep '" + r.name + "' invalid:\n" + rep.str());
    }
  }

 private:
  static bool all_zero(const std::vector<MultiPoly>& v) {
    for (const auto& p : v)
      if (!p.is_zero()) return false;
    return true;
  }
};

// Endomorphism given by its polynomial homotopy lift; generator images are
// optional extra data used for equivariance validation.
class EndoSpec {
 public:
  explicit EndoSpec(CanonicalMap lift) : lift_(std::move(lift)) {}
  EndoSpec(CanonicalMap lift, std::map<std::string, CanonicalMap> images)
      : lift_(std::move(lift)), images_(std::move(images)) {}

  const CanonicalMap& lift() const { return lift_; }
  const std::map<std::string, CanonicalMap>& images() const { return images_; }

  std::vector<RatMatrix> linearisation_blocks() const { return linearisation(lift_); }

  // blocks must be integral on group levels
  std::vector<IntMatrix> integer_blocks() const {
    std::vector<IntMatrix> r;
    for (std::size_t i = 0; i < lift_.levels(); ++i) {
      if (!is_integral(lift_.block(i)))
        throw std::domain_error("linearisation block at level " + std::to_string(i + 1) + " is not integral");
      r.push_back(to_integer(lift_.block(i)));
    }
    return r;
  }

  // p ∘ rho(gamma) = rho(phi(gamma)) ∘ p for every declared generator image
  void validate_equivariance(const GroupSpec& g) const {
    ValidationReport rep = validate_canonical(lift_, false);
    if (!rep.ok()) throw std::invalid_argument("lift is not canonical-type:\n" + rep.str());
    for (const auto& [name, image] : images_) {
      const CanonicalMap& gamma = g.generator(name);
      ValidationReport irep = validate_canonical(image, true);
      if (!irep.ok()) throw std::invalid_argument("image of '" + name + "' is not a group element:\n" + irep.str());
      if (compose_maps(lift_, gamma) != compose_maps(image, lift_))
        throw std::invalid_argument("equivariance fails on generator '" + name + "'");
    }
  }

 private:
  CanonicalMap lift_;
  std::map<std::string, CanonicalMap> images_;
};

}  // namespace nfp
