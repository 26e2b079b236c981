#include "bforge/nc_poly.hpp"

namespace bforge {

std::string Word::str(const Basis& basis) const {
  if (empty()) return "1";
  std::string out;
  int i = 0;
  while (i < length_) {
    int j = i;
    while (j < length_ && letters_[j] == letters_[i]) ++j;
    if (!out.empty()) out += "*";
    out += basis.name(letters_[i]);
    if (j - i > 1) out += "^" + std::to_string(j - i);
    i = j;
  }
  return out;
}

namespace {

// Splits a coefficient into (negative?, factor text) for "a - b" style joins.
std::pair<bool, std::string> coefficient_text(const ParamPoly& c, const ParamSpace& params) {
  if (c.terms().size() == 1) {
    std::string s = c.str(params);
    if (s.front() == '-') return {true, s.substr(1)};
    return {false, s};
  }
  return {false, "(" + c.str(params) + ")"};
}

}  // namespace

template <std::size_t K>
std::string NCTensor<K>::str(const Basis& basis, const ParamSpace& params) const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [key, c] : terms_) {
    auto [negative, coeff] = coefficient_text(c, params);
    std::string body;
    for (std::size_t f = 0; f < K; ++f) {
      std::string factor = key[f].str(basis);
      if (f == 0) {
        if (key[f].empty())
          factor = coeff;
        else if (coeff != "1")
          factor = coeff + "*" + factor;
      }
      if (f > 0) body += " (x) ";
      body += factor;
    }
    if (first) {
      out = negative ? "-" + body : body;
      first = false;
    } else {
      out += negative ? " - " : " + ";
      out += body;
    }
  }
  return out;
}

template class NCTensor<1>;
template class NCTensor<2>;
template class NCTensor<3>;

Tensor2 flip(const Tensor2& a) {
  Tensor2 r;
  for (const auto& [k, c] : a.terms()) r.add({k[1], k[0]}, c);
  return r;
}

Tensor2 restrict_vv(const Tensor2& a) {
  return a.filter([](const Tensor2::Key& k) { return k[0].size() == 1 && k[1].size() == 1; });
}

NCPoly homogeneous_part(const NCPoly& a, int degree) {
  return a.filter([degree](const NCPoly::Key& k) { return k[0].size() == degree; });
}

}  // namespace bforge
