#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "bforge/nc_poly.hpp"

namespace bforge {

/// One input relation [x_left, x_right] = rhs.
struct RelationSpec {
  int left = 0;
  int right = 0;
  NCPoly rhs;
  std::string label;  // defaults to "[left,right]"
};

/// Commutation relations [x_j, x_i] = R_ji for j > i in the basis order. Pairs
/// that are absent commute. Every stored right-hand side is CONTRACTING and in
/// normal form.
class RelationTable {
 public:
  RelationTable() = default;

  /// Orients, rejects duplicate pairs and non-contracting right-hand sides,
  /// and normalizes every right-hand side with the table itself.
  static RelationTable build(Basis basis, ParamSpace params, const std::vector<RelationSpec>& relations,
                             Truncation tr = {});

  const Basis& basis() const { return basis_; }
  const ParamSpace& params() const { return params_; }
  const Truncation& truncation() const { return tr_; }
  int size() const { return basis_.size(); }

  /// R_ji for j > i; zero when the pair commutes.
  const NCPoly& rhs(int j, int i) const { return entries_[static_cast<std::size_t>(j * size() + i)].rhs; }
  bool has(int j, int i) const { return entries_[static_cast<std::size_t>(j * size() + i)].present; }
  /// Name of the relation as the user wrote it, e.g. "[p_z,p_x]".
  std::string label(int j, int i) const;
  /// True when the user wrote the relation as [x_i, x_j].
  bool reversed(int j, int i) const { return entries_[static_cast<std::size_t>(j * size() + i)].reversed; }
  /// The relation in the orientation it was written in.
  RelationSpec written(int j, int i) const;
  /// [x_a, x_b] for any a, b.
  NCPoly bracket(int a, int b) const;

  /// Copy with every right-hand side replaced (still oriented j > i). Used by
  /// specialization; re-checks CONTRACTING and renormalizes.
  RelationTable with_rhs(const std::vector<NCPoly>& oriented_rhs) const;
  std::vector<NCPoly> oriented_rhs() const;

  /// Same relations with a different truncation context (right-hand sides are
  /// truncated when the order shrinks).
  RelationTable with_truncation(Truncation tr) const;

 private:
  struct Entry {
    NCPoly rhs;
    std::string label;
    bool present = false;
    bool reversed = false;
  };
  void check_contracting_() const;
  void normalize_rhs_();

  Basis basis_;
  ParamSpace params_;
  Truncation tr_;
  std::vector<Entry> entries_;
};

/// PBW normal ordering by right multiplication with memoized partial products.
/// Not thread-safe (the memo is shared); use one instance per thread.
class Normalizer {
 public:
  explicit Normalizer(RelationTable table);

  const RelationTable& table() const { return table_; }
  int order() const { return table_.truncation().order; }

  template <std::size_t K>
  NCTensor<K> normalize(const NCTensor<K>& a) const {
    return normalize(a, order());
  }
  template <std::size_t K>
  NCTensor<K> normalize(const NCTensor<K>& a, int order) const;

  /// Product in the presented algebra, factorwise for tensors.
  template <std::size_t K>
  NCTensor<K> multiply(const NCTensor<K>& a, const NCTensor<K>& b) const {
    return multiply(a, b, order());
  }
  template <std::size_t K>
  NCTensor<K> multiply(const NCTensor<K>& a, const NCTensor<K>& b, int order) const;

  template <std::size_t K>
  NCTensor<K> commutator(const NCTensor<K>& a, const NCTensor<K>& b) const {
    return multiply(a, b) - multiply(b, a);
  }

  /// Normal form of u * w where u is sorted; all terms of parameter degree <= budget.
  NCPoly word_product(const Word& u, const Word& w, int budget) const;

  std::size_t memo_size() const { return memo_.size(); }

 private:
  struct Key {
    Word word;
    int generator;
    int budget;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return static_cast<std::size_t>(k.word.hash() * 31 + static_cast<std::uint64_t>(k.generator) * 1031 +
                                      static_cast<std::uint64_t>(k.budget));
    }
  };

  const NCPoly& mul_gen(const Word& u, int g, int budget) const;
  [[noreturn]] void cap_exceeded(int length) const;

  RelationTable table_;
  mutable std::unordered_map<Key, NCPoly, KeyHash> memo_;
  mutable std::vector<std::pair<int, int>> active_;
};

/// Independent rewriting route: repeatedly rewrites a randomly chosen
/// out-of-order adjacent pair of a randomly chosen term. Slow; for testing
/// strategy independence.
NCPoly normalize_with_strategy(const RelationTable& table, const NCPoly& a, std::mt19937_64& rng,
                               int order);

struct JacobiTriple {
  int a, b, c;
  NCPoly defect;
};

/// Normal form of [[a,b],c] + [[b,c],a] + [[c,a],b] for every triple a < b < c.
/// Only nonzero defects are returned.
std::vector<JacobiTriple> presentation_jacobi_defect(const Normalizer& norm);

// ---------------------------------------------------------------------------

namespace detail {

template <std::size_t K>
void accumulate_product(NCTensor<K>& out, const ParamPoly& c, const std::array<NCPoly, K>& parts, int order) {
  typename NCTensor<K>::Key key;
  auto rec = [&](auto&& self, std::size_t f, const ParamPoly& coef) -> void {
    if (f == K) {
      out.add(key, coef);
      return;
    }
    const int d = coef.min_degree();
    for (const auto& [w, wc] : parts[f].terms()) {
      if (d + wc.min_degree() > order) continue;
      key[f] = w[0];
      self(self, f + 1, ParamPoly::mul(coef, wc, order));
    }
  };
  rec(rec, 0, c);
}

}  // namespace detail

template <std::size_t K>
NCTensor<K> Normalizer::normalize(const NCTensor<K>& a, int order) const {
  NCTensor<K> out;
  for (const auto& [key, c] : a.terms()) {
    const int d = c.min_degree();
    if (d > order) continue;
    std::array<NCPoly, K> parts;
    for (std::size_t f = 0; f < K; ++f) parts[f] = word_product(Word{}, key[f], order - d);
    detail::accumulate_product(out, c.truncated(order), parts, order);
  }
  return out;
}

template <std::size_t K>
NCTensor<K> Normalizer::multiply(const NCTensor<K>& a, const NCTensor<K>& b, int order) const {
  NCTensor<K> out;
  for (const auto& [ka, ca] : a.terms()) {
    const int da = ca.min_degree();
    for (const auto& [kb, cb] : b.terms()) {
      const int d = da + cb.min_degree();
      if (d > order) continue;
      std::array<NCPoly, K> parts;
      for (std::size_t f = 0; f < K; ++f)
        parts[f] = ka[f].is_sorted() ? word_product(ka[f], kb[f], order - d)
                                     : word_product(Word{}, ka[f] * kb[f], order - d);
      detail::accumulate_product(out, ParamPoly::mul(ca, cb, order), parts, order);
    }
  }
  return out;
}

}  // namespace bforge
