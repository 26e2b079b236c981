#include "bforge/parser.hpp"

#include <cctype>
#include <optional>

namespace bforge {

namespace {

enum class Tok { Number, ImagNumber, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Tensor, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

std::vector<Token> lex(std::string_view s, bool tensor_mode) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (i < s.size() && s[i] == '.') throw ParseError("decimal numbers are not exact; write a fraction", i);
      if (i < s.size() && s[i] == 'i' && (i + 1 == s.size() || !ident_char(s[i + 1]))) {
        out.push_back({Tok::ImagNumber, std::string(s.substr(start, i - start)), start});
        ++i;
      } else {
        if (i < s.size() && ident_start(s[i])) throw ParseError("juxtaposition is not allowed; use '*'", i);
        out.push_back({Tok::Number, std::string(s.substr(start, i - start)), start});
      }
      continue;
    }
    if (ident_start(c)) {
      while (i < s.size() && ident_char(s[i])) ++i;
      out.push_back({Tok::Ident, std::string(s.substr(start, i - start)), start});
      continue;
    }
    if (c == '(' && tensor_mode) {
      std::size_t j = i + 1;
      while (j < s.size() && std::isspace(static_cast<unsigned char>(s[j]))) ++j;
      if (j < s.size() && s[j] == 'x') {
        std::size_t k = j + 1;
        while (k < s.size() && std::isspace(static_cast<unsigned char>(s[k]))) ++k;
        if (k < s.size() && s[k] == ')') {
          out.push_back({Tok::Tensor, "(x)", start});
          i = k + 1;
          continue;
        }
      }
    }
    Tok k;
    switch (c) {
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      case '^': k = Tok::Caret; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      default: throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
    out.push_back({k, std::string(1, c), start});
    ++i;
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

/// num / den where num is exact for every term of parameter degree <= prec.
struct Fraction {
  NCPoly num;
  Monomial den;
  int prec = 0;
};

class Parser {
 public:
  Parser(std::string_view text, const Basis* basis, const ParamSpace& params, const Truncation& tr, bool tensor)
      : text_(text), toks_(lex(text, tensor)), basis_(basis), params_(params), tr_(tr),
        work_(tr.order + tr.slack) {}

  NCPoly parse_single() {
    Fraction f = expr();
    expect_end();
    return finish(f, 0);
  }

  Tensor2 parse_tensor() {
    Tensor2 out;
    bool first = true;
    for (;;) {
      Scalar sign = 1;
      if (!first) {
        if (peek().kind == Tok::Plus) {
          next();
        } else if (peek().kind == Tok::Minus) {
          next();
          sign = -1;
        } else {
          break;
        }
      }
      first = false;
      const std::size_t at = peek().pos;
      Fraction left = term();
      if (peek().kind != Tok::Tensor) throw ParseError("expected '(x)' in tensor term", peek().pos);
      next();
      Fraction right = term();
      // Combine the two sides into one tensor fraction.
      const Monomial den = left.den * right.den;
      Tensor2 num;
      for (const auto& [kl, cl] : left.num.terms())
        for (const auto& [kr, cr] : right.num.terms()) {
          ParamPoly c = ParamPoly::mul(cl, cr, work_);
          if (!c.is_zero()) num.add({kl[0], kr[0]}, c.scaled(sign));
        }
      const int prec = std::min({left.prec + right.num.min_degree(), right.prec + left.num.min_degree(), work_});
      out.add(resolve_tensor(num, den, prec, at));
    }
    expect_end();
    return out;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  void expect(Tok k, const char* what) {
    if (peek().kind != k) throw ParseError(std::string("expected ") + what, peek().pos);
    next();
  }
  void expect_end() {
    if (peek().kind != Tok::End) throw ParseError("unexpected '" + peek().text + "'", peek().pos);
  }

  Fraction exact(NCPoly p) const { return {p.truncated(work_), Monomial{}, work_}; }

  Fraction add(const Fraction& a, const Fraction& b, bool subtract) const {
    const Monomial l = Monomial::lcm(a.den, b.den);
    const Monomial ma = l / a.den;
    const Monomial mb = l / b.den;
    Fraction r;
    r.den = l;
    r.num = a.num.map_coefficients([&](const ParamPoly& c) { return c.times_monomial(ma, work_); });
    NCPoly bn = b.num.map_coefficients([&](const ParamPoly& c) { return c.times_monomial(mb, work_); });
    r.num = subtract ? r.num - bn : r.num + bn;
    r.prec = std::min({a.prec + ma.degree(), b.prec + mb.degree(), work_});
    return r;
  }

  Fraction mul(const Fraction& a, const Fraction& b) const {
    Fraction r;
    r.num = multiply_free(a.num, b.num, tr_free(), work_);
    r.den = a.den * b.den;
    r.prec = std::min({a.prec + b.num.min_degree(), b.prec + a.num.min_degree(), work_});
    return r;
  }

  // Products at parse time are not rewritten, so allow words up to the hard maximum.
  Truncation tr_free() const {
    Truncation t = tr_;
    t.cap = kMaxWordLength;
    return t;
  }

  Fraction divide(const Fraction& a, const Fraction& d, std::size_t at) const {
    if (d.num.is_zero()) throw ParseError("division by zero (or by a term beyond the truncation order)", at);
    if (d.num.size() != 1 || !d.num.terms().begin()->first[0].empty() ||
        d.num.terms().begin()->second.terms().size() != 1)
      throw ParseError("division is only defined by a scalar times a parameter monomial", at);
    const auto& [m, c] = d.num.terms().begin()->second.terms().front();
    if (d.prec < m.degree()) throw ParseError("divisor lies beyond the truncation order", at);
    Fraction r;
    const Scalar inv = c.inverse();
    r.num = a.num.map_coefficients([&](const ParamPoly& p) { return p.scaled(inv).times_monomial(d.den, work_); });
    r.den = a.den * m;
    r.prec = std::min(a.prec + d.den.degree(), work_);
    return r;
  }

  /// Divides out the pending denominator; terms beyond the precision are dropped.
  Fraction resolve(const Fraction& a, std::size_t at) const {
    if (a.den.is_one()) return {a.num.truncated(a.prec), Monomial{}, a.prec};
    Fraction r;
    try {
      r.num = divide_param(a.num.truncated(a.prec), a.den);
    } catch (const InexactDivision&) {
      throw InexactDivision("expression is not polynomial in the parameters: division by " +
                            monomial_str(a.den, params_) + " leaves a remainder at offset " + std::to_string(at));
    }
    r.prec = a.prec - a.den.degree();
    return r;
  }

  Tensor2 resolve_tensor(const Tensor2& num, const Monomial& den, int prec, std::size_t at) const {
    Tensor2 r;
    try {
      r = divide_param(num.truncated(prec), den);
    } catch (const InexactDivision&) {
      throw InexactDivision("tensor term is not polynomial in the parameters: division by " + monomial_str(den, params_) +
                            " leaves a remainder at offset " + std::to_string(at));
    }
    check_precision(prec - den.degree(), at);
    return r.truncated(tr_.order);
  }

  void check_precision(int prec, std::size_t at) const {
    if (prec < tr_.order)
      throw InexactDivision("parameter division consumes more than the truncation slack (" + std::to_string(tr_.slack) +
                            "): result is exact only to degree " + std::to_string(prec) + " at offset " +
                            std::to_string(at));
  }

  NCPoly finish(const Fraction& f, std::size_t at) const {
    Fraction r = resolve(f, at);
    check_precision(r.prec, at);
    return r.num.truncated(tr_.order);
  }

  Fraction expr() {
    Fraction acc = term();
    for (;;) {
      if (peek().kind == Tok::Plus) {
        next();
        acc = add(acc, term(), false);
      } else if (peek().kind == Tok::Minus) {
        next();
        acc = add(acc, term(), true);
      } else {
        return acc;
      }
    }
  }

  Fraction term() {
    Fraction acc = unary();
    for (;;) {
      if (peek().kind == Tok::Star) {
        next();
        acc = mul(acc, unary());
      } else if (peek().kind == Tok::Slash) {
        const std::size_t at = next().pos;
        acc = divide(acc, unary(), at);
      } else {
        return acc;
      }
    }
  }

  Fraction unary() {
    if (peek().kind == Tok::Minus) {
      next();
      Fraction f = unary();
      f.num = -f.num;
      return f;
    }
    if (peek().kind == Tok::Plus) {
      next();
      return unary();
    }
    return power();
  }

  Fraction power() {
    Fraction base = primary();
    if (peek().kind != Tok::Caret) return base;
    next();
    if (peek().kind != Tok::Number) throw ParseError("exponent must be a natural number", peek().pos);
    const Token& e = next();
    if (e.text.size() > 3) throw ParseError("exponent too large", e.pos);
    const int n = std::stoi(e.text);
    Fraction r = exact(NCPoly::unit());
    for (int k = 0; k < n; ++k) r = mul(r, base);
    return r;
  }

  Fraction primary() {
    const Token& t = next();
    switch (t.kind) {
      case Tok::Number:
        return exact(NCPoly::unit(ParamPoly(Scalar(mpq_class(mpz_class(t.text))))));
      case Tok::ImagNumber:
        return exact(NCPoly::unit(ParamPoly(Scalar(0, mpq_class(mpz_class(t.text))))));
      case Tok::LParen: {
        Fraction f = expr();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::Ident:
        return identifier(t);
      case Tok::End:
        throw ParseError("unexpected end of expression", t.pos);
      default:
        throw ParseError("unexpected '" + t.text + "'", t.pos);
    }
  }

  Fraction identifier(const Token& t) {
    if (t.text == "exp" || t.text == "sinh" || t.text == "cosh") {
      const SeriesFn fn = t.text == "exp" ? SeriesFn::Exp : t.text == "sinh" ? SeriesFn::Sinh : SeriesFn::Cosh;
      expect(Tok::LParen, "'(' after function name");
      const std::size_t at = peek().pos;
      Fraction arg = resolve(expr(), at);
      expect(Tok::RParen, "')'");
      try {
        return {series_apply(fn, arg.num, tr_free(), arg.prec), Monomial{}, arg.prec};
      } catch (const SeriesDomainError& e) {
        throw SeriesDomainError(std::string(e.what()) + " (argument at offset " + std::to_string(at) + ")");
      }
    }
    if (t.text == "i") return exact(NCPoly::unit(ParamPoly(Scalar::imaginary_unit())));
    if (basis_) {
      if (auto g = basis_->find(t.text)) return exact(generator(*g));
    }
    if (auto p = params_.find(t.text)) return exact(NCPoly::unit(ParamPoly::param(*p)));
    if (!basis_) throw ParseError("unknown parameter '" + t.text + "'", t.pos);
    throw ParseError("unknown identifier '" + t.text + "'", t.pos);
  }

  std::string_view text_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Basis* basis_;
  const ParamSpace& params_;
  Truncation tr_;
  int work_;
};

}  // namespace

NCPoly parse_expr(std::string_view text, const Basis& basis, const ParamSpace& params, const Truncation& tr) {
  return Parser(text, &basis, params, tr, false).parse_single();
}

Tensor2 parse_tensor_expr(std::string_view text, const Basis& basis, const ParamSpace& params,
                          const Truncation& tr) {
  return Parser(text, &basis, params, tr, true).parse_tensor();
}

ParamPoly parse_param_expr(std::string_view text, const ParamSpace& params, const Truncation& tr) {
  NCPoly p = Parser(text, nullptr, params, tr, false).parse_single();
  return p.coefficient({Word{}});
}

Scalar parse_scalar(std::string_view text) {
  ParamPoly p = parse_param_expr(text, ParamSpace{}, Truncation{});
  if (!p.is_constant()) throw ParseError("expected a scalar");
  return p.constant_term();
}

}  // namespace bforge
