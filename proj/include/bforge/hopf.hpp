#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bforge/relations.hpp"

namespace bforge {

/// Generators, relations, coproduct and counit of a parameter-dependent Hopf
/// algebra. Coproducts are stored in normal form.
struct HopfPresentation {
  RelationTable relations;
  std::vector<Tensor2> coproduct;  // by generator
  std::vector<Scalar> counit;      // by generator
  std::optional<std::vector<NCPoly>> antipode;

  const Basis& basis() const { return relations.basis(); }
  const ParamSpace& params() const { return relations.params(); }
  const Truncation& truncation() const { return relations.truncation(); }

  /// Validates sizes and the absence of 1 (x) 1 components; normalizes coproducts.
  static HopfPresentation build(RelationTable relations, std::vector<Tensor2> coproduct, std::vector<Scalar> counit);
};

/// One nonzero defect with its location.
struct DefectEntry {
  std::string location;                 // "pair [p_z,p_x]", "generator l_x", "triple (p_x,p_y,l_x)"
  std::vector<std::string> relations;   // relations / coproduct entries taking part
  std::vector<std::string> monomials;   // lowest-degree parameter monomials carrying a defect
  int lowest_degree = 0;
  std::size_t terms = 0;
  std::string value;                    // canonical text (possibly abbreviated)
};

struct DefectReport {
  std::string check;
  std::size_t items = 0;                // pairs / generators / triples examined
  std::vector<DefectEntry> defects;     // nonzero ones only
  std::vector<std::string> notes;
  bool passed() const { return defects.empty(); }
};

template <std::size_t K>
DefectEntry describe(const NCTensor<K>& defect, const Basis& basis, const ParamSpace& params, std::string location,
                     std::vector<std::string> relations, std::size_t max_terms = 12);

/// Normalizer plus memoized coproduct extension for one presentation.
class HopfEngine {
 public:
  explicit HopfEngine(const HopfPresentation& h);

  const HopfPresentation& presentation() const { return h_; }
  const Normalizer& normalizer() const { return norm_; }
  int order() const { return norm_.order(); }

  /// Delta extended as a unital algebra morphism, factors normalized.
  Tensor2 coproduct(const NCPoly& a, int order) const;
  Tensor2 coproduct(const NCPoly& a) const { return coproduct(a, order()); }
  /// Delta of a word, all terms of parameter degree <= budget.
  const Tensor2& coproduct_word(const Word& w, int budget) const;

  /// Delta(R_ji) - [Delta x_j, Delta x_i] for j > i.
  Tensor2 hom_defect(int j, int i) const;
  /// (Delta (x) id) Delta g - (id (x) Delta) Delta g.
  Tensor3 coassociativity_defect(int g) const;
  /// ((eps (x) id) Delta g - g, (id (x) eps) Delta g - g).
  std::pair<NCPoly, NCPoly> counit_defect(int g) const;
  /// eps extended multiplicatively.
  ParamPoly counit(const NCPoly& a) const;

 private:
  HopfPresentation h_;
  Normalizer norm_;
  mutable std::map<std::pair<Word, int>, Tensor2> memo_;
};

DefectReport presentation_jacobi_report(const HopfEngine& e);
DefectReport coproduct_hom_report(const HopfEngine& e);
DefectReport coassociativity_report(const HopfEngine& e);
DefectReport counit_report(const HopfEngine& e);

/// S applied to a, extended anti-multiplicatively (S(uv) = S(v)S(u)).
NCPoly apply_antipode(const Normalizer& norm, const std::vector<NCPoly>& s, const NCPoly& a, int order);
/// S_up applied to a, extended multiplicatively (S_up(uv) = S_up(u)S_up(v)).
NCPoly apply_hom_extension(const Normalizer& norm, const std::vector<NCPoly>& s, const NCPoly& a, int order);

struct AntipodeResult {
  std::vector<NCPoly> antipode;  // S(x_g) by generator
  DefectReport report;           // residuals of both antipode equations
  bool converged = false;
  int failing_order = -1;        // lowest parameter degree where the iteration did not settle
};

/// Fixed-point solve of S(g) = -m(S (x) id)(Delta g - g (x) 1), seeded with
/// S = -id and iterated order + 1 times; then both antipode residuals are
/// checked. `order` may not exceed the presentation order.
AntipodeResult solve_antipode(const HopfEngine& e, int order);

/// ((S_up (x) id) Delta g) = ((S (x) id) Delta g) and the mirrored identity for
/// every generator g, as tensors.
DefectReport class_f_check(const HopfEngine& e, const std::vector<NCPoly>& s, int order);

/// Parameter assignment applied to relations and coproducts. Throws
/// NonContracting when the specialized table is not contracting.
/// `params` must extend the presentation's parameters (same prefix); it
/// supplies names for parameters introduced by the substitution.
HopfPresentation specialize(const HopfPresentation& h, const Substitution& s, const ParamSpace& params);
HopfPresentation specialize(const HopfPresentation& h, const Substitution& s);

/// Parses "p=value" assignments. Unknown target parameters on the right-hand
/// side are appended to `params`.
Substitution parse_assignments(const std::vector<std::string>& assignments, ParamSpace& params,
                               const Truncation& tr);

}  // namespace bforge
