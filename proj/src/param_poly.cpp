#include "bforge/param_poly.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "bforge/error.hpp"

namespace bforge {

// ---------------------------------------------------------------- Monomial

Monomial Monomial::of(int param, int exponent) { return Monomial{}.with_exponent(param, exponent); }

Monomial Monomial::with_exponent(int param, int exponent) const {
  if (param < 0 || param >= kMaxParams) throw Error("parameter index out of range");
  if (exponent < 0 || exponent > 255) throw Error("parameter exponent out of range");
  const int shift = 8 * param;
  std::uint64_t bits = bits_ & ~(std::uint64_t{0xFF} << shift);
  bits |= static_cast<std::uint64_t>(exponent) << shift;
  return Monomial(bits);
}

int Monomial::degree() const {
  int d = 0;
  for (int i = 0; i < kMaxParams; ++i) d += exponent(i);
  return d;
}

bool Monomial::divides(const Monomial& other) const {
  for (int i = 0; i < kMaxParams; ++i)
    if (exponent(i) > other.exponent(i)) return false;
  return true;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (int i = 0; i < kMaxParams; ++i) {
    const int e = a.exponent(i) + b.exponent(i);
    if (e) r = r.with_exponent(i, e);
  }
  return r;
}

Monomial operator/(const Monomial& a, const Monomial& b) {
  if (!b.divides(a)) throw InexactDivision("monomial is not divisible");
  return Monomial(a.bits_ - b.bits_);
}

Monomial Monomial::lcm(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (int i = 0; i < kMaxParams; ++i) {
    const int e = std::max(a.exponent(i), b.exponent(i));
    if (e) r = r.with_exponent(i, e);
  }
  return r;
}

bool operator<(const Monomial& a, const Monomial& b) {
  const int da = a.degree();
  const int db = b.degree();
  if (da != db) return da < db;
  for (int i = 0; i < kMaxParams; ++i) {
    const int ea = a.exponent(i);
    const int eb = b.exponent(i);
    if (ea != eb) return ea > eb;
  }
  return false;
}

std::string monomial_str(const Monomial& m, const ParamSpace& space) {
  std::string out;
  for (int i = 0; i < kMaxParams; ++i) {
    const int e = m.exponent(i);
    if (!e) continue;
    if (!out.empty()) out += "*";
    out += i < space.size() ? space.name(i) : "#" + std::to_string(i);
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out.empty() ? "1" : out;
}

// -------------------------------------------------------------- ParamSpace

ParamSpace::ParamSpace(std::vector<std::string> names) {
  for (auto& n : names) {
    if (find(n)) throw Error("duplicate parameter name '" + n + "'");
    add(n);
  }
}

std::optional<int> ParamSpace::find(std::string_view name) const {
  for (int i = 0; i < size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

int ParamSpace::index(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw Error("unknown parameter '" + std::string(name) + "'");
}

int ParamSpace::add(const std::string& name) {
  if (auto i = find(name)) return *i;
  if (size() >= kMaxParams) throw Error("too many parameters (max " + std::to_string(kMaxParams) + ")");
  names_.push_back(name);
  return size() - 1;
}

// --------------------------------------------------------------- ParamPoly

ParamPoly::ParamPoly(Scalar constant) {
  if (!constant.is_zero()) terms_.emplace_back(Monomial{}, std::move(constant));
}

ParamPoly ParamPoly::monomial(Monomial m, Scalar c) {
  ParamPoly p;
  if (!c.is_zero()) p.terms_.emplace_back(m, std::move(c));
  return p;
}

Scalar ParamPoly::constant_term() const { return coefficient(Monomial{}); }

Scalar ParamPoly::coefficient(const Monomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& t, const Monomial& k) { return t.first < k; });
  if (it != terms_.end() && it->first == m) return it->second;
  return Scalar{};
}

void ParamPoly::normalize_() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.first < b.first; });
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!out.empty() && out.back().first == t.first) {
      out.back().second += t.second;
    } else {
      if (!out.empty() && out.back().second.is_zero()) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().second.is_zero()) out.pop_back();
  terms_ = std::move(out);
}

ParamPoly ParamPoly::operator-() const {
  ParamPoly r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

ParamPoly& ParamPoly::operator+=(const ParamPoly& o) {
  if (o.terms_.empty()) return *this;
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && a->first < b->first)) {
      out.push_back(std::move(*a++));
    } else if (a == terms_.end() || b->first < a->first) {
      out.push_back(*b++);
    } else {
      Scalar s = a->second + b->second;
      if (!s.is_zero()) out.emplace_back(a->first, std::move(s));
      ++a;
      ++b;
    }
  }
  terms_ = std::move(out);
  return *this;
}

ParamPoly& ParamPoly::operator-=(const ParamPoly& o) { return *this += -o; }

bool operator==(const ParamPoly& a, const ParamPoly& b) { return a.terms_ == b.terms_; }

ParamPoly ParamPoly::mul(const ParamPoly& a, const ParamPoly& b, int order) {
  ParamPoly r;
  r.add_product(a, b, order);
  return r;
}

void ParamPoly::add_product(const ParamPoly& a, const ParamPoly& b, int order) {
  if (a.is_zero() || b.is_zero()) return;
  if (a.min_degree() + b.min_degree() > order) return;
  std::vector<Term> prod;
  prod.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& [ma, ca] : a.terms_) {
    const int da = ma.degree();
    for (const auto& [mb, cb] : b.terms_) {
      if (da + mb.degree() > order) break;  // b sorted by degree
      prod.emplace_back(ma * mb, ca * cb);
    }
  }
  if (prod.empty()) return;
  ParamPoly p;
  p.terms_ = std::move(prod);
  p.normalize_();
  *this += p;
}

ParamPoly ParamPoly::scaled(const Scalar& c) const {
  if (c.is_zero()) return {};
  ParamPoly r = *this;
  for (auto& t : r.terms_) t.second *= c;
  return r;
}

ParamPoly ParamPoly::times_monomial(const Monomial& m, int order) const {
  ParamPoly r;
  for (const auto& [mono, c] : terms_) {
    Monomial p = mono * m;
    if (p.degree() <= order) r.terms_.emplace_back(p, c);
  }
  r.normalize_();
  return r;
}

ParamPoly ParamPoly::truncated(int order) const {
  ParamPoly r;
  for (const auto& t : terms_) {
    if (t.first.degree() > order) break;
    r.terms_.push_back(t);
  }
  return r;
}

ParamPoly ParamPoly::pow(int exponent, int order) const {
  ParamPoly r(Scalar(1));
  for (int i = 0; i < exponent; ++i) r = mul(r, *this, order);
  return r;
}

bool ParamPoly::divisible_by(const Monomial& m) const {
  return std::all_of(terms_.begin(), terms_.end(), [&](const Term& t) { return m.divides(t.first); });
}

ParamPoly ParamPoly::divided(const Monomial& m) const {
  if (m.is_one()) return *this;
  ParamPoly r;
  r.terms_.reserve(terms_.size());
  for (const auto& [mono, c] : terms_) {
    if (!m.divides(mono)) throw InexactDivision("coefficient term is not divisible by the parameter monomial");
    r.terms_.emplace_back(mono / m, c);
  }
  r.normalize_();
  return r;
}

ParamPoly ParamPoly::coefficient_of(int param, int e) const {
  return coefficient_of(std::vector<int>{param}, std::vector<int>{e});
}

ParamPoly ParamPoly::coefficient_of(const std::vector<int>& params, const std::vector<int>& exps) const {
  ParamPoly r;
  for (const auto& [mono, c] : terms_) {
    bool match = true;
    Monomial rest = mono;
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (mono.exponent(params[i]) != exps[i]) {
        match = false;
        break;
      }
      rest = rest.with_exponent(params[i], 0);
    }
    if (match) r.terms_.emplace_back(rest, c);
  }
  r.normalize_();
  return r;
}

ParamPoly ParamPoly::substituted(const Substitution& s, int order) const {
  if (s.empty()) return truncated(order);
  ParamPoly result;
  for (const auto& [mono, c] : terms_) {
    ParamPoly num(c);
    Monomial kept;
    Monomial den;
    for (int i = 0; i < kMaxParams; ++i) {
      const int e = mono.exponent(i);
      if (!e) continue;
      if (const auto* img = s.find(i)) {
        for (int k = 0; k < e; ++k) den = den * img->denominator;
      }
    }
    const int work = order >= kNoTruncation ? kNoTruncation : order + den.degree();
    for (int i = 0; i < kMaxParams; ++i) {
      const int e = mono.exponent(i);
      if (!e) continue;
      if (const auto* img = s.find(i)) {
        num = mul(num, img->numerator.pow(e, work), work);
      } else {
        kept = kept.with_exponent(i, e);
      }
    }
    num = num.times_monomial(kept, work);
    if (!num.divisible_by(den))
      throw InexactDivision("substitution leaves a negative parameter power");
    result += num.divided(den).truncated(order);
  }
  return result;
}

std::string ParamPoly::str(const ParamSpace& space) const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [mono, c] : terms_) {
    std::string coeff = c.str();
    bool negative = false;
    if (c.is_real() && sgn(c.re()) < 0) {
      negative = true;
      coeff = (-c).str();
    } else if (sgn(c.re()) == 0 && sgn(c.im()) < 0) {
      negative = true;
      coeff = (-c).str();
    }
    std::string term;
    if (mono.is_one()) {
      term = coeff;
    } else if (coeff == "1") {
      term = monomial_str(mono, space);
    } else {
      term = coeff + "*" + monomial_str(mono, space);
    }
    if (first) {
      out = negative ? "-" + term : term;
      first = false;
    } else {
      out += negative ? " - " : " + ";
      out += term;
    }
  }
  return out;
}

std::string ParamPoly::factor_str(const ParamSpace& space) const {
  std::string s = str(space);
  if (terms_.size() <= 1 && s.find_first_of("+-", 1) == std::string::npos && s.front() != '-') return s;
  return "(" + s + ")";
}

// ------------------------------------------------------------ Substitution

void Substitution::set(int param, ParamPoly numerator, Monomial denominator) {
  images_[param] = Image{std::move(numerator), denominator};
}

const Substitution::Image* Substitution::find(int param) const {
  auto it = images_.find(param);
  return it == images_.end() ? nullptr : &it->second;
}

bool Substitution::preserves_degree() const {
  for (const auto& [p, img] : images_) {
    if (!img.denominator.is_one()) return false;
    if (!img.numerator.is_zero() && img.numerator.min_degree() < 1) return false;
  }
  return true;
}

}  // namespace bforge
