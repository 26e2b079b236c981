#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bforge/error.hpp"
#include "bforge/param_poly.hpp"

namespace bforge {

inline constexpr int kDefaultCoreOrder = 6;

/// Ordered generator names; the order is the normal-ordering order.
class Basis {
 public:
  Basis() = default;
  explicit Basis(std::vector<std::string> names);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<int> find(std::string_view name) const;
  int index(std::string_view name) const;

  friend bool operator==(const Basis&, const Basis&) = default;

 private:
  std::vector<std::string> names_;
};

/// Sparse rank-R array of ParamPoly; absent keys are zero.
template <std::size_t R>
class SparseTensor {
 public:
  using Key = std::array<int, R>;

  void add(const Key& key, const ParamPoly& value) {
    if (value.is_zero()) return;
    auto [it, inserted] = entries_.try_emplace(key, value);
    if (!inserted) {
      it->second += value;
      if (it->second.is_zero()) entries_.erase(it);
    }
  }
  ParamPoly at(const Key& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? ParamPoly{} : it->second;
  }
  bool is_zero() const { return entries_.empty(); }
  const std::map<Key, ParamPoly>& entries() const { return entries_; }

  SparseTensor scaled(const Scalar& c) const {
    SparseTensor r;
    for (const auto& [k, v] : entries_) r.add(k, v.scaled(c));
    return r;
  }
  friend SparseTensor operator+(SparseTensor a, const SparseTensor& b) {
    for (const auto& [k, v] : b.entries_) a.add(k, v);
    return a;
  }
  friend SparseTensor operator-(SparseTensor a, const SparseTensor& b) {
    for (const auto& [k, v] : b.entries_) a.add(k, -v);
    return a;
  }
  friend bool operator==(const SparseTensor&, const SparseTensor&) = default;

 private:
  std::map<Key, ParamPoly> entries_;
};

/// Bracket constants C^k_ij keyed (i, j, k): [x_i, x_j] = sum_k C^k_ij x_k.
/// Stored raw; `from_relations` antisymmetrizes.
class BracketTensor {
 public:
  struct Relation {
    int left;
    int right;
    int result;
    ParamPoly coefficient;
  };

  BracketTensor() = default;
  explicit BracketTensor(Basis basis) : basis_(std::move(basis)) {}

  /// Writes C^k_ij = c and C^k_ji = -c for each relation (accumulating).
  static BracketTensor from_relations(Basis basis, const std::vector<Relation>& relations);

  const Basis& basis() const { return basis_; }
  ParamPoly at(int i, int j, int k) const { return entries_.at({i, j, k}); }
  void add_raw(int i, int j, int k, const ParamPoly& c) { entries_.add({i, j, k}, c); }
  const SparseTensor<3>& entries() const { return entries_; }
  bool is_zero() const { return entries_.is_zero(); }

  friend bool operator==(const BracketTensor&, const BracketTensor&) = default;

 private:
  Basis basis_;
  SparseTensor<3> entries_;
};

/// Cobracket constants D_i^jk keyed (i, j, k): delta(x_i) = sum_{j,k} D_i^jk x_j (x) x_k.
/// With x_j ^ x_k := x_j (x) x_k - x_k (x) x_j one relation entry D_i^jk = c
/// contributes c x_j ^ x_k.
class CobracketTensor {
 public:
  struct Relation {
    int source;
    int first;
    int second;
    ParamPoly coefficient;
  };

  CobracketTensor() = default;
  explicit CobracketTensor(Basis basis) : basis_(std::move(basis)) {}

  static CobracketTensor from_relations(Basis basis, const std::vector<Relation>& relations);

  const Basis& basis() const { return basis_; }
  ParamPoly at(int i, int j, int k) const { return entries_.at({i, j, k}); }
  void add_raw(int i, int j, int k, const ParamPoly& c) { entries_.add({i, j, k}, c); }
  const SparseTensor<3>& entries() const { return entries_; }
  bool is_zero() const { return entries_.is_zero(); }

  friend bool operator==(const CobracketTensor&, const CobracketTensor&) = default;

 private:
  Basis basis_;
  SparseTensor<3> entries_;
};

BracketTensor operator+(const BracketTensor& a, const BracketTensor& b);
CobracketTensor operator+(const CobracketTensor& a, const CobracketTensor& b);
BracketTensor scale(const BracketTensor& t, const ParamPoly& factor, int order = kNoTruncation);
CobracketTensor scale(const CobracketTensor& t, const ParamPoly& factor, int order = kNoTruncation);

struct LieBialgebraPair {
  BracketTensor bracket;
  CobracketTensor cobracket;
};

// Defect tensors. All are exactly zero iff the corresponding identity holds.

/// (i, j, k) -> C^k_ij + C^k_ji   (resp. D_i^jk + D_i^kj), i <= j.
SparseTensor<3> antisymmetry_defect(const BracketTensor& t);
SparseTensor<3> antisymmetry_defect(const CobracketTensor& t);

/// (i, j, k, l) -> J^l_ijk = sum_m C^m_ij C^l_mk + C^m_jk C^l_mi + C^m_ki C^l_mj.
SparseTensor<4> jacobi_defect(const BracketTensor& mu, int order = kDefaultCoreOrder);
/// (l, a, b, c) -> sum_m D_l^mc D_m^ab + D_l^ma D_m^bc + D_l^mb D_m^ca.
SparseTensor<4> cojacobi_defect(const CobracketTensor& delta, int order = kDefaultCoreOrder);
/// Bilinear cross term of the Jacobi sum of x*a + y*b (coefficient of x*y).
SparseTensor<4> mixed_jacobi_defect(const BracketTensor& a, const BracketTensor& b,
                                    int order = kDefaultCoreOrder);
/// Cross term of the co-Jacobi sum of x*a + y*b.
SparseTensor<4> mixed_cojacobi_defect(const CobracketTensor& a, const CobracketTensor& b,
                                      int order = kDefaultCoreOrder);

/// (i, j, a, b), i < j -> coefficient of x_a (x) x_b in
///   delta([x_i, x_j]) - x_i . delta(x_j) + x_j . delta(x_i),
/// where x . (u (x) v) = [x, u] (x) v + u (x) [x, v].
SparseTensor<4> cocycle_defect(const BracketTensor& mu, const CobracketTensor& delta,
                               int order = kDefaultCoreOrder);

struct FourPairReport {
  struct Item {
    std::string label;
    SparseTensor<4> defect;
    bool ok() const { return defect.is_zero(); }
  };
  std::vector<Item> lie;       // jacobi of mu_100, mu_001 and their cross term
  std::vector<Item> colie;     // co-jacobi of delta_010, delta_001 and their cross term
  std::vector<Item> cocycle;   // the four pairs
  bool satisfied() const;
};

FourPairReport check_four_pairs(const BracketTensor& mu_100, const BracketTensor& mu_001,
                                const CobracketTensor& delta_010, const CobracketTensor& delta_001,
                                int order = kDefaultCoreOrder);

struct DeformationFamily {
  BracketTensor mu;          // z1 * mu_001 + t * mu_100
  CobracketTensor delta;     // z2 * delta_001 + h * delta_010
  ParamSpace params;
  int z1 = 0, t = 0, z2 = 0, h = 0;
};

class HypothesisFailure : public Error {
 public:
  HypothesisFailure(const std::string& what, FourPairReport report)
      : Error(what), report_(std::move(report)) {}
  const FourPairReport& report() const { return report_; }

 private:
  FourPairReport report_;
};

/// Builds the two linear pencils; throws HypothesisFailure when the four-pair
/// check fails. Parameters are looked up (or appended) in `params`.
DeformationFamily build_family(const BracketTensor& mu_100, const BracketTensor& mu_001,
                               const CobracketTensor& delta_010, const CobracketTensor& delta_001,
                               ParamSpace params, const std::string& z1 = "z1",
                               const std::string& t = "t", const std::string& z2 = "z2",
                               const std::string& h = "h");

/// Nonzero scalar times a Laurent monomial in the parameters.
struct Scale {
  Scalar factor{1};
  std::array<int, kMaxParams> exponents{};

  static Scale of(Scalar c) { return Scale{std::move(c), {}}; }
  static Scale param(int index, int power = 1);
  Scale inverse() const;
  friend Scale operator*(const Scale& a, const Scale& b);
};

/// New basis a'_i = s_i a_i: C'^k_ij = (s_i s_j / s_k) C^k_ij,
/// D'_i^jk = (s_i / (s_j s_k)) D_i^jk. Throws on zero scale or on a negative
/// parameter power that does not divide out.
BracketTensor rescale_basis(const BracketTensor& t, const std::vector<Scale>& scales);
CobracketTensor rescale_basis(const CobracketTensor& t, const std::vector<Scale>& scales);
/// Applies the factor for pair (i, j) and V(x)V component (a, b) of a cocycle defect.
SparseTensor<4> rescale_cocycle_defect(const SparseTensor<4>& d, const std::vector<Scale>& scales);

BracketTensor substitute_params(const BracketTensor& t, const Substitution& s, int order = kNoTruncation);
CobracketTensor substitute_params(const CobracketTensor& t, const Substitution& s, int order = kNoTruncation);
template <std::size_t R>
SparseTensor<R> substitute_params(const SparseTensor<R>& t, const Substitution& s, int order = kNoTruncation) {
  SparseTensor<R> r;
  for (const auto& [k, v] : t.entries()) r.add(k, v.substituted(s, order));
  return r;
}

/// Collects the coefficient of the monomial `m` (exactly) in every entry.
template <std::size_t R>
SparseTensor<R> coefficient_tensor(const SparseTensor<R>& t, const Monomial& m, int nparams) {
  std::vector<int> params;
  std::vector<int> exps;
  for (int i = 0; i < nparams; ++i) {
    params.push_back(i);
    exps.push_back(m.exponent(i));
  }
  SparseTensor<R> r;
  for (const auto& [k, v] : t.entries()) r.add(k, v.coefficient_of(params, exps));
  return r;
}

/// Human-readable listing "C^{k}_{i j} = value" per nonzero entry.
std::string describe_defect(const SparseTensor<4>& d, const Basis& basis, const ParamSpace& params,
                            std::string_view layout);

}  // namespace bforge
