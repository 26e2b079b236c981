#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bforge/scalar.hpp"

namespace bforge {

inline constexpr int kMaxParams = 8;
inline constexpr int kNoTruncation = 1 << 20;

/// Exponent vector over at most kMaxParams commuting parameters, one byte each.
class Monomial {
 public:
  constexpr Monomial() = default;

  static Monomial of(int param, int exponent = 1);

  int exponent(int param) const { return static_cast<int>((bits_ >> (8 * param)) & 0xFFu); }
  Monomial with_exponent(int param, int exponent) const;
  int degree() const;
  bool is_one() const { return bits_ == 0; }
  std::uint64_t bits() const { return bits_; }

  bool divides(const Monomial& other) const;
  friend Monomial operator*(const Monomial& a, const Monomial& b);
  friend Monomial operator/(const Monomial& a, const Monomial& b);  // requires b | a
  static Monomial lcm(const Monomial& a, const Monomial& b);

  friend bool operator==(const Monomial&, const Monomial&) = default;
  /// Graded order: lower total degree first, then larger exponent of the
  /// earlier-declared parameter first.
  friend bool operator<(const Monomial& a, const Monomial& b);

 private:
  explicit constexpr Monomial(std::uint64_t bits) : bits_(bits) {}
  std::uint64_t bits_ = 0;
};

/// Ordered list of formal parameter names; indices key Monomial exponents.
class ParamSpace {
 public:
  ParamSpace() = default;
  explicit ParamSpace(std::vector<std::string> names);

  int size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(int index) const { return names_.at(index); }
  std::optional<int> find(std::string_view name) const;
  int index(std::string_view name) const;  // throws on unknown name
  int add(const std::string& name);        // returns index, existing or new

  friend bool operator==(const ParamSpace&, const ParamSpace&) = default;

 private:
  std::vector<std::string> names_;
};

class Substitution;

/// Polynomial in the commuting parameters with Scalar coefficients. Terms are
/// kept sorted by Monomial order with no zero coefficients. Truncation is an
/// explicit argument of the operations that need it.
class ParamPoly {
 public:
  using Term = std::pair<Monomial, Scalar>;

  ParamPoly() = default;
  ParamPoly(Scalar constant);  // NOLINT: constants promote
  ParamPoly(long constant) : ParamPoly(Scalar(constant)) {}  // NOLINT

  static ParamPoly monomial(Monomial m, Scalar c = 1);
  static ParamPoly param(int index) { return monomial(Monomial::of(index)); }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_one()); }
  Scalar constant_term() const;
  Scalar coefficient(const Monomial& m) const;
  /// Lowest total degree of a stored term; kNoTruncation for zero.
  int min_degree() const { return terms_.empty() ? kNoTruncation : terms_.front().first.degree(); }
  int max_degree() const { return terms_.empty() ? -1 : terms_.back().first.degree(); }

  ParamPoly operator-() const;
  ParamPoly& operator+=(const ParamPoly& o);
  ParamPoly& operator-=(const ParamPoly& o);
  friend ParamPoly operator+(ParamPoly a, const ParamPoly& b) { return a += b; }
  friend ParamPoly operator-(ParamPoly a, const ParamPoly& b) { return a -= b; }
  friend ParamPoly operator*(const ParamPoly& a, const ParamPoly& b) { return mul(a, b, kNoTruncation); }
  friend bool operator==(const ParamPoly&, const ParamPoly&);

  static ParamPoly mul(const ParamPoly& a, const ParamPoly& b, int order);
  /// Accumulates a*b (truncated) into *this.
  void add_product(const ParamPoly& a, const ParamPoly& b, int order);
  ParamPoly scaled(const Scalar& c) const;
  ParamPoly times_monomial(const Monomial& m, int order = kNoTruncation) const;
  ParamPoly truncated(int order) const;
  ParamPoly pow(int exponent, int order) const;

  bool divisible_by(const Monomial& m) const;
  /// Exact quotient; throws InexactDivision when some term is not divisible.
  ParamPoly divided(const Monomial& m) const;

  /// Terms with exponent `e` in parameter `param`, with that exponent removed.
  ParamPoly coefficient_of(int param, int e) const;
  /// Terms whose exponents in `params` equal `exps`; those exponents removed.
  ParamPoly coefficient_of(const std::vector<int>& params, const std::vector<int>& exps) const;

  ParamPoly substituted(const Substitution& s, int order) const;

  /// Canonical expression text, e.g. "t*h - 1/6*z2^2". Parses back.
  std::string str(const ParamSpace& space) const;
  /// Same, wrapped in parentheses unless it is a single factor-safe term.
  std::string factor_str(const ParamSpace& space) const;

 private:
  void normalize_();  // sort, merge equal monomials, drop zeros
  std::vector<Term> terms_;
};

std::string monomial_str(const Monomial& m, const ParamSpace& space);

/// parameter -> numerator / monomial-denominator. Applying it multiplies out
/// and then divides exactly; a non-polynomial result throws InexactDivision.
class Substitution {
 public:
  struct Image {
    ParamPoly numerator;
    Monomial denominator;
  };

  void set(int param, ParamPoly numerator, Monomial denominator = {});
  bool empty() const { return images_.empty(); }
  const std::map<int, Image>& images() const { return images_; }
  const Image* find(int param) const;

  /// True when every image is zero or a sum of terms of degree >= 1 with no
  /// denominator, i.e. substitution cannot lower the degree of a monomial.
  bool preserves_degree() const;

 private:
  std::map<int, Image> images_;
};

}  // namespace bforge
