#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <string>

#include "bforge/error.hpp"
#include "bforge/param_poly.hpp"
#include "bforge/structure.hpp"

namespace bforge {

inline constexpr int kMaxWordLength = 15;

/// Truncation context shared by every computation on one presentation.
struct Truncation {
  int order = 5;   // max total parameter degree kept
  int cap = 10;    // max generator-word length
  int slack = 2;   // extra parameter degree carried while dividing by parameter monomials
};

/// Word in the generator alphabet; the empty word is the unit.
class Word {
 public:
  constexpr Word() = default;
  static Word of(int generator) {
    Word w;
    w.push_back(generator);
    return w;
  }
  static Word from(std::initializer_list<int> gens) {
    Word w;
    for (int g : gens) w.push_back(g);
    return w;
  }

  int size() const { return length_; }
  bool empty() const { return length_ == 0; }
  int operator[](int i) const { return letters_[i]; }
  int back() const { return letters_[length_ - 1]; }

  void push_back(int g) {
    if (length_ >= kMaxWordLength) throw DegreeCapExceeded("word longer than the supported maximum");
    letters_[length_++] = static_cast<std::uint8_t>(g);
  }
  Word without_last() const {
    Word w = *this;
    w.letters_[--w.length_] = 0;
    return w;
  }
  Word appended(int g) const {
    Word w = *this;
    w.push_back(g);
    return w;
  }
  friend Word operator*(const Word& a, const Word& b) {
    Word w = a;
    for (int i = 0; i < b.size(); ++i) w.push_back(b[i]);
    return w;
  }
  Word reversed() const {
    Word w;
    for (int i = length_ - 1; i >= 0; --i) w.push_back(letters_[i]);
    return w;
  }
  bool is_sorted() const {
    for (int i = 1; i < length_; ++i)
      if (letters_[i - 1] > letters_[i]) return false;
    return true;
  }
  std::uint64_t hash() const {
    std::uint64_t h = 1469598103934665603ull ^ length_;
    for (int i = 0; i < length_; ++i) h = (h ^ letters_[i]) * 1099511628211ull;
    return h;
  }

  friend bool operator==(const Word& a, const Word& b) {
    return a.length_ == b.length_ && a.letters_ == b.letters_;
  }
  /// Shorter words first, then lexicographic in generator order.
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
    if (a.length_ != b.length_) return a.length_ <=> b.length_;
    return a.letters_ <=> b.letters_;
  }

  /// "p_x*l_z^2"; "1" for the unit.
  std::string str(const Basis& basis) const;

 private:
  std::array<std::uint8_t, kMaxWordLength> letters_{};
  std::uint8_t length_ = 0;
};

/// Finite sum of K-fold tensor words with ParamPoly coefficients. K = 1 is the
/// noncommutative polynomial, K = 2, 3 the tensor square and cube. Stores no
/// zero coefficients; multiplication acts factorwise.
template <std::size_t K>
class NCTensor {
 public:
  using Key = std::array<Word, K>;
  using Map = std::map<Key, ParamPoly>;

  NCTensor() = default;
  static NCTensor unit(ParamPoly c = ParamPoly(Scalar(1))) {
    NCTensor t;
    t.add(Key{}, c);
    return t;
  }
  static NCTensor term(const Key& key, ParamPoly c = ParamPoly(Scalar(1))) {
    NCTensor t;
    t.add(key, std::move(c));
    return t;
  }

  void add(const Key& key, const ParamPoly& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(key, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  void add(const NCTensor& other) {
    for (const auto& [k, c] : other.terms_) add(k, c);
  }
  void add_scaled(const NCTensor& other, const ParamPoly& factor, int order) {
    for (const auto& [k, c] : other.terms_) add(k, ParamPoly::mul(factor, c, order));
  }

  const Map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  ParamPoly coefficient(const Key& key) const {
    auto it = terms_.find(key);
    return it == terms_.end() ? ParamPoly{} : it->second;
  }
  int min_degree() const {
    int d = kNoTruncation;
    for (const auto& [k, c] : terms_) d = std::min(d, c.min_degree());
    return d;
  }
  int max_word_length() const {
    int m = 0;
    for (const auto& [k, c] : terms_)
      for (const auto& w : k) m = std::max(m, w.size());
    return m;
  }
  bool all_sorted() const {
    for (const auto& [k, c] : terms_)
      for (const auto& w : k)
        if (!w.is_sorted()) return false;
    return true;
  }

  NCTensor operator-() const {
    NCTensor r;
    for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
    return r;
  }
  friend NCTensor operator+(NCTensor a, const NCTensor& b) {
    a.add(b);
    return a;
  }
  friend NCTensor operator-(NCTensor a, const NCTensor& b) {
    for (const auto& [k, c] : b.terms_) a.add(k, -c);
    return a;
  }
  friend bool operator==(const NCTensor&, const NCTensor&) = default;

  NCTensor scaled(const ParamPoly& factor, int order = kNoTruncation) const {
    NCTensor r;
    r.add_scaled(*this, factor, order);
    return r;
  }
  NCTensor truncated(int order) const {
    NCTensor r;
    for (const auto& [k, c] : terms_) r.add(k, c.truncated(order));
    return r;
  }
  template <class F>
  NCTensor map_coefficients(F&& f) const {
    NCTensor r;
    for (const auto& [k, c] : terms_) r.add(k, f(c));
    return r;
  }
  template <class Pred>
  NCTensor filter(Pred&& keep) const {
    NCTensor r;
    for (const auto& [k, c] : terms_)
      if (keep(k)) r.terms_.emplace(k, c);
    return r;
  }

  /// Canonical expression text; factors joined by " (x) ".
  std::string str(const Basis& basis, const ParamSpace& params) const;

 private:
  Map terms_;
};

using NCPoly = NCTensor<1>;
using Tensor2 = NCTensor<2>;
using Tensor3 = NCTensor<3>;

inline NCPoly generator(int g, ParamPoly c = ParamPoly(Scalar(1))) { return NCPoly::term({Word::of(g)}, std::move(c)); }

/// Concatenation product in the free algebra (no rewriting), truncated.
template <std::size_t K>
NCTensor<K> multiply_free(const NCTensor<K>& a, const NCTensor<K>& b, const Truncation& tr, int order) {
  NCTensor<K> r;
  for (const auto& [ka, ca] : a.terms()) {
    const int da = ca.min_degree();
    for (const auto& [kb, cb] : b.terms()) {
      if (da + cb.min_degree() > order) continue;
      ParamPoly c = ParamPoly::mul(ca, cb, order);
      if (c.is_zero()) continue;
      typename NCTensor<K>::Key key;
      for (std::size_t f = 0; f < K; ++f) {
        key[f] = ka[f] * kb[f];
        if (key[f].size() > tr.cap)
          throw DegreeCapExceeded("product word length " + std::to_string(key[f].size()) +
                                  " exceeds generator-degree cap " + std::to_string(tr.cap));
      }
      r.add(key, c);
    }
  }
  return r;
}

/// Exact division of every coefficient by a parameter monomial.
template <std::size_t K>
NCTensor<K> divide_param(const NCTensor<K>& a, const Monomial& m) {
  NCTensor<K> r;
  for (const auto& [k, c] : a.terms()) {
    if (!c.divisible_by(m)) throw InexactDivision("coefficient is not divisible by the parameter monomial");
    r.add(k, c.divided(m));
  }
  return r;
}

template <std::size_t K>
NCTensor<K> substitute_params(const NCTensor<K>& a, const Substitution& s, int order) {
  return a.map_coefficients([&](const ParamPoly& c) { return c.substituted(s, order); });
}

/// Coefficient of direction^1 with direction removed (the derivative at direction = 0).
template <std::size_t K>
NCTensor<K> first_order_part(const NCTensor<K>& a, int param) {
  return a.map_coefficients([&](const ParamPoly& c) { return c.coefficient_of(param, 1); });
}

/// Drops all terms of total parameter degree > max_degree.
template <std::size_t K>
NCTensor<K> leading_part(const NCTensor<K>& a, int max_degree) {
  return a.truncated(max_degree);
}

/// Swaps the two factors of a tensor square.
Tensor2 flip(const Tensor2& a);

/// Restriction to V (x) V words, i.e. both factors single generators.
Tensor2 restrict_vv(const Tensor2& a);

/// Words of generator degree exactly `degree` only.
NCPoly homogeneous_part(const NCPoly& a, int degree);

enum class SeriesFn { Exp, Sinh, Cosh };

/// Taylor series of fn at arg in the free algebra, truncated at `order`. Every
/// term of arg must have parameter degree >= 1.
template <std::size_t K>
NCTensor<K> series_apply(SeriesFn fn, const NCTensor<K>& arg, const Truncation& tr, int order) {
  for (const auto& [k, c] : arg.terms())
    if (c.min_degree() < 1)
      throw SeriesDomainError("series argument has a term of parameter degree 0; the series would not terminate");
  NCTensor<K> result;
  NCTensor<K> power = NCTensor<K>::unit();
  Scalar factorial = 1;
  for (int n = 0; n <= order; ++n) {
    if (n > 0) {
      power = multiply_free(power, arg, tr, order);
      factorial *= Scalar(n);
    }
    if (power.is_zero()) break;
    const bool use = fn == SeriesFn::Exp || (fn == SeriesFn::Sinh ? n % 2 == 1 : n % 2 == 0);
    if (use) result.add_scaled(power, ParamPoly(factorial.inverse()), order);
  }
  return result;
}

}  // namespace bforge
