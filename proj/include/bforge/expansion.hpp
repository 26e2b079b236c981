#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "bforge/hopf.hpp"

namespace bforge {

/// Exponents (i, j, k) of t^i h^j z^k.
using MultiIndex = std::array<int, 3>;

std::string index_str(const MultiIndex& m);  // "101"

/// Taylor coefficients of the structure maps around the commutative,
/// cocommutative point. m(x_a, x_b) is the generator-degree-1 part of the
/// normal form of x_a x_b, Delta(x_a) is restricted to V (x) V; then
///   mu = m - m tau,  m^s = (m + m tau)/2,  delta = (id - tau) Delta,
///   Delta^s = (id + tau) Delta / 2.
/// m^s is keyed (a, b, c): coefficient of x_c in m^s(x_a, x_b);
/// Delta^s is keyed (a, b, c): coefficient of x_b (x) x_c in Delta^s(x_a).
struct CoefficientTable {
  Basis basis;
  ParamSpace params;
  std::array<int, 3> vars{};  // parameter indices of t, h, z
  std::map<MultiIndex, BracketTensor> mu;
  std::map<MultiIndex, SparseTensor<3>> ms;
  std::map<MultiIndex, CobracketTensor> delta;
  std::map<MultiIndex, SparseTensor<3>> ds;
  MultiIndex up_to{};

  BracketTensor mu_at(const MultiIndex& m) const;
  SparseTensor<3> ms_at(const MultiIndex& m) const;
  CobracketTensor delta_at(const MultiIndex& m) const;
  SparseTensor<3> ds_at(const MultiIndex& m) const;
  bool covers(const MultiIndex& m) const;
};

/// Coefficients for all multi-indices componentwise <= up_to (nonzero ones are
/// stored). `names` are the parameters playing the roles of t, h, z.
CoefficientTable extract_coefficients(const HopfPresentation& h, const MultiIndex& up_to,
                                      const std::array<std::string, 3>& names = {"t", "h", "z"});

/// Both sides of a composition identity on x_a (x) x_b, a < b. Keys are
/// (a, b, u, v) with u, v indexing V + C: 0 is the unit, generator g is g + 1.
struct IdentityComponent {
  std::string label;        // "z^2", "th", ...
  SparseTensor<4> lhs;
  SparseTensor<4> rhs;
  SparseTensor<4> defect;   // lhs - rhs
  bool ok() const { return defect.is_zero(); }
};

/// The four monomial components z^2, th, tz, hz of the first nontrivial order.
std::vector<IdentityComponent> verify_order2(const CoefficientTable& tbl);
/// The thz coefficient of the bialgebra identity, including the symmetric parts.
IdentityComponent verify_order3_thz(const CoefficientTable& tbl);

/// Defect in the generator-pair layout of algebra-core (u, v >= 1 shifted back);
/// terms involving the unit are returned separately.
SparseTensor<4> to_cocycle_layout(const SparseTensor<4>& d, SparseTensor<4>* unit_part = nullptr);

DefectReport identity_report(const std::string& check, const std::vector<IdentityComponent>& comps,
                             const Basis& basis, const ParamSpace& params);

// ------------------------------------------------------------ tangent fields

struct TangentField {
  Basis basis;
  ParamSpace params;
  int direction = 0;
  std::vector<std::string> base;              // the assignments, for reports
  RelationTable base_table;                   // relations at the base point, direction = 0
  std::map<std::pair<int, int>, NCPoly> mu;   // (later, earlier) -> d/d(direction) [x_later, x_earlier]
  std::map<int, Tensor2> delta;               // generator -> antisymmetrized V (x) V deviation
};

/// First derivative in `direction` at direction = 0 after applying `base`
/// (which may introduce parameters listed in `params`).
TangentField tangent_field(const HopfPresentation& h, const std::string& direction,
                           const std::vector<std::string>& base);

enum class CompareMode { Leading, Exact };

struct FieldEntry {
  bool is_delta = false;
  int a = 0, b = 0;      // mu(a, b) as written
  int g = 0;             // delta(g)
  std::string text;      // value expression as written
  bool exact = false;    // compare the full series even in leading mode
};

struct FieldExpectation {
  std::vector<FieldEntry> entries;
  bool no_delta = false;  // the field must have no delta components at all
};

struct FieldDiff {
  std::vector<std::string> missing;     // expected nonzero, actual zero
  std::vector<std::string> extra;       // actual nonzero, not expected (exact mode)
  std::vector<std::string> mismatched;
  std::size_t compared = 0;
  bool ok() const { return missing.empty() && extra.empty() && mismatched.empty(); }
};

/// Expected values are parsed and normalized with the base-point table.
FieldDiff compare_field(const TangentField& actual, const FieldExpectation& expected, CompareMode mode);

std::string field_str(const TangentField& f);

}  // namespace bforge
