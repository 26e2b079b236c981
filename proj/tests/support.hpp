#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "bforge/cli.hpp"
#include "bforge/document.hpp"
#include "bforge/parser.hpp"

namespace testing {

using namespace bforge;

inline std::string data_path(const std::string& rel) { return std::string(BFORGE_TEST_DATA) + "/" + rel; }
inline std::string fixture(const std::string& name) { return data_path("fixtures/" + name); }

inline const Document& paper() {
  static const Document d = load_document("@paper-corrected");
  return d;
}

inline NCPoly poly(const std::string& text, const Basis& b, const ParamSpace& p, Truncation tr = {}) {
  return parse_expr(text, b, p, tr);
}
inline Tensor2 tensor(const std::string& text, const Basis& b, const ParamSpace& p, Truncation tr = {}) {
  return parse_tensor_expr(text, b, p, tr);
}
inline ParamPoly pp(const std::string& text, const ParamSpace& p, Truncation tr = {}) {
  return parse_param_expr(text, p, tr);
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

inline CliResult cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

// Dense brute-force versions of the Lie-theoretic sums, written directly from
// the index formulas with no sparsity tricks.
inline ParamPoly C(const BracketTensor& t, int i, int j, int k) { return t.at(i, j, k); }
inline ParamPoly D(const CobracketTensor& t, int i, int j, int k) { return t.at(i, j, k); }

inline ParamPoly dense_jacobi(const BracketTensor& mu, int i, int j, int k, int l) {
  ParamPoly s;
  const int n = mu.basis().size();
  for (int m = 0; m < n; ++m) {
    s += C(mu, i, j, m) * C(mu, m, k, l);
    s += C(mu, j, k, m) * C(mu, m, i, l);
    s += C(mu, k, i, m) * C(mu, m, j, l);
  }
  return s;
}

inline bool dense_jacobi_zero(const BracketTensor& mu) {
  const int n = mu.basis().size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          if (!dense_jacobi(mu, i, j, k, l).is_zero()) return false;
  return true;
}

// Coefficient of x_a (x) x_b in delta([x_i,x_j]) - x_i.delta(x_j) + x_j.delta(x_i).
inline ParamPoly dense_cocycle(const BracketTensor& mu, const CobracketTensor& dl, int i, int j, int a, int b) {
  const int n = mu.basis().size();
  ParamPoly s;
  for (int k = 0; k < n; ++k) s += C(mu, i, j, k) * D(dl, k, a, b);
  for (int u = 0; u < n; ++u) {
    // x_i . (x_u (x) x_b) contributes [x_i,x_u]_a (x) x_b
    s -= D(dl, j, u, b) * C(mu, i, u, a);
    s -= D(dl, j, a, u) * C(mu, i, u, b);
    s += D(dl, i, u, b) * C(mu, j, u, a);
    s += D(dl, i, a, u) * C(mu, j, u, b);
  }
  return s;
}

inline bool dense_cocycle_zero(const BracketTensor& mu, const CobracketTensor& dl) {
  const int n = mu.basis().size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          if (!dense_cocycle(mu, dl, i, j, a, b).is_zero()) return false;
  return true;
}

}  // namespace testing
