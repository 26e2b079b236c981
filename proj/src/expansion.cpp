#include "bforge/expansion.hpp"

#include <functional>
#include <set>

#include "bforge/parser.hpp"

namespace bforge {

std::string index_str(const MultiIndex& m) {
  return std::to_string(m[0]) + std::to_string(m[1]) + std::to_string(m[2]);
}

bool CoefficientTable::covers(const MultiIndex& m) const {
  return m[0] <= up_to[0] && m[1] <= up_to[1] && m[2] <= up_to[2];
}

namespace {

template <class T>
T lookup(const std::map<MultiIndex, T>& map, const MultiIndex& m, const CoefficientTable& tbl, T empty) {
  if (!tbl.covers(m)) throw Error("coefficient " + index_str(m) + " was not extracted (bound " + index_str(tbl.up_to) + ")");
  auto it = map.find(m);
  return it == map.end() ? empty : it->second;
}

// Splits c by the exponents of the three role parameters and calls
// f(index, remaining coefficient) for every index inside the bound.
template <class F>
void split_terms(const ParamPoly& c, const std::array<int, 3>& vars, const MultiIndex& up_to, F&& f) {
  std::map<MultiIndex, ParamPoly> parts;
  for (const auto& [m, s] : c.terms()) {
    MultiIndex idx{};
    Monomial rest = m;
    bool inside = true;
    for (int r = 0; r < 3; ++r) {
      idx[r] = m.exponent(vars[r]);
      rest = rest.with_exponent(vars[r], 0);
      if (idx[r] > up_to[r]) inside = false;
    }
    if (inside) parts[idx] += ParamPoly::monomial(rest, s);
  }
  for (const auto& [idx, p] : parts) f(idx, p);
}

}  // namespace

BracketTensor CoefficientTable::mu_at(const MultiIndex& m) const { return lookup(mu, m, *this, BracketTensor(basis)); }
SparseTensor<3> CoefficientTable::ms_at(const MultiIndex& m) const { return lookup(ms, m, *this, SparseTensor<3>{}); }
CobracketTensor CoefficientTable::delta_at(const MultiIndex& m) const {
  return lookup(delta, m, *this, CobracketTensor(basis));
}
SparseTensor<3> CoefficientTable::ds_at(const MultiIndex& m) const { return lookup(ds, m, *this, SparseTensor<3>{}); }

CoefficientTable extract_coefficients(const HopfPresentation& h, const MultiIndex& up_to,
                                      const std::array<std::string, 3>& names) {
  CoefficientTable tbl;
  tbl.basis = h.basis();
  tbl.params = h.params();
  tbl.up_to = up_to;
  for (int r = 0; r < 3; ++r) {
    const auto idx = tbl.params.find(names[r]);
    if (!idx) throw Error("coefficient extraction needs a parameter named '" + names[r] + "'");
    tbl.vars[r] = *idx;
  }
  const int n = tbl.basis.size();
  const Scalar half = Scalar(mpq_class(1, 2));
  auto mu_of = [&](const MultiIndex& m) -> BracketTensor& { return tbl.mu.try_emplace(m, tbl.basis).first->second; };
  auto delta_of = [&](const MultiIndex& m) -> CobracketTensor& {
    return tbl.delta.try_emplace(m, tbl.basis).first->second;
  };

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      const NCPoly lin = homogeneous_part(h.relations.bracket(a, b), 1);
      for (const auto& [w, c] : lin.terms()) {
        const int k = w[0][0];
        split_terms(c, tbl.vars, up_to, [&](const MultiIndex& idx, const ParamPoly& p) {
          mu_of(idx).add_raw(a, b, k, p);
          // m(x_a, x_b) is nonzero only for a > b; m^s is half the bracket of the sorted pair.
          tbl.ms[idx].add({a, b, k}, (a > b ? p : -p).scaled(half));
        });
      }
    }

  for (int g = 0; g < n; ++g) {
    const Tensor2 vv = restrict_vv(h.coproduct[static_cast<std::size_t>(g)]);
    const Tensor2 anti = vv - flip(vv);
    const Tensor2 sym = (vv + flip(vv)).scaled(ParamPoly(half));
    for (const auto& [k, c] : anti.terms())
      split_terms(c, tbl.vars, up_to, [&](const MultiIndex& idx, const ParamPoly& p) {
        delta_of(idx).add_raw(g, k[0][0], k[1][0], p);
      });
    for (const auto& [k, c] : sym.terms())
      split_terms(c, tbl.vars, up_to, [&](const MultiIndex& idx, const ParamPoly& p) {
        tbl.ds[idx].add({g, k[0][0], k[1][0]}, p);
      });
  }

  std::erase_if(tbl.mu, [](const auto& kv) { return kv.second.is_zero(); });
  std::erase_if(tbl.ms, [](const auto& kv) { return kv.second.is_zero(); });
  std::erase_if(tbl.delta, [](const auto& kv) { return kv.second.is_zero(); });
  std::erase_if(tbl.ds, [](const auto& kv) { return kv.second.is_zero(); });
  return tbl;
}

// ------------------------------------------------------ composition evaluator

namespace {

// Elements of V + C are indexed with 0 for the unit and g + 1 for generator g.
using Vec = std::map<int, ParamPoly>;
using Pair = std::map<std::array<int, 2>, ParamPoly>;
using Prod = std::function<Vec(int, int)>;
using Cop = std::function<Pair(int)>;

Prod unit_product() {
  return [](int u, int v) -> Vec {
    if (u == 0) return {{v, ParamPoly(1)}};
    if (v == 0) return {{u, ParamPoly(1)}};
    return {};
  };
}

Prod bracket_product(const BracketTensor& mu) {
  return [mu](int u, int v) -> Vec {
    Vec r;
    if (u == 0 || v == 0) return r;
    for (const auto& [k, c] : mu.entries().entries())
      if (k[0] == u - 1 && k[1] == v - 1) r[k[2] + 1] += c;
    return r;
  };
}

Prod symmetric_product(const SparseTensor<3>& ms) {
  return [ms](int u, int v) -> Vec {
    Vec r;
    if (u == 0 || v == 0) return r;
    for (const auto& [k, c] : ms.entries())
      if (k[0] == u - 1 && k[1] == v - 1) r[k[2] + 1] += c;
    return r;
  };
}

Cop unit_coproduct() {
  return [](int x) -> Pair { return {{{x, 0}, ParamPoly(1)}, {{0, x}, ParamPoly(1)}}; };
}

Cop cobracket_coproduct(const CobracketTensor& delta) {
  return [delta](int x) -> Pair {
    Pair r;
    for (const auto& [k, c] : delta.entries().entries())
      if (k[0] == x - 1) r[{k[1] + 1, k[2] + 1}] += c;
    return r;
  };
}

Cop symmetric_coproduct(const SparseTensor<3>& ds) {
  return [ds](int x) -> Pair {
    Pair r;
    for (const auto& [k, c] : ds.entries())
      if (k[0] == x - 1) r[{k[1] + 1, k[2] + 1}] += c;
    return r;
  };
}

struct Side {
  std::vector<std::pair<Prod, Prod>> outer;  // sum of P1 (x) P2
  std::vector<std::pair<Cop, Cop>> inner;    // sum of Q1 (x) Q2
};

// (sum P1 (x) P2) o (id (x) tau (x) id) o (sum Q1 (x) Q2) on x_a (x) x_b, a < b.
void evaluate(const Side& side, int n, SparseTensor<4>& out) {
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (const auto& [q1, q2] : side.inner) {
        const Pair left = q1(a + 1);
        const Pair right = q2(b + 1);
        for (const auto& [pq, c1] : left)
          for (const auto& [rs, c2] : right) {
            const ParamPoly c = c1 * c2;
            if (c.is_zero()) continue;
            for (const auto& [p1, p2] : side.outer) {
              const Vec l = p1(pq[0], rs[0]);
              if (l.empty()) continue;
              const Vec r = p2(pq[1], rs[1]);
              for (const auto& [u, cu] : l)
                for (const auto& [v, cv] : r) out.add({a, b, u, v}, c * cu * cv);
            }
          }
      }
}

// delta o mu on x_a (x) x_b, a < b.
void evaluate_lhs(const CobracketTensor& delta, const BracketTensor& mu, SparseTensor<4>& out) {
  for (const auto& [k, c] : mu.entries().entries()) {
    if (k[0] >= k[1]) continue;
    for (const auto& [d, cd] : delta.entries().entries())
      if (d[0] == k[2]) out.add({k[0], k[1], d[1] + 1, d[2] + 1}, c * cd);
  }
}

IdentityComponent finish(std::string label, SparseTensor<4> lhs, SparseTensor<4> rhs) {
  IdentityComponent c;
  c.label = std::move(label);
  c.defect = lhs - rhs;
  c.lhs = std::move(lhs);
  c.rhs = std::move(rhs);
  return c;
}

Side cocycle_side(const BracketTensor& mu, const CobracketTensor& delta) {
  Side s;
  s.outer = {{unit_product(), bracket_product(mu)}, {bracket_product(mu), unit_product()}};
  s.inner = {{unit_coproduct(), cobracket_coproduct(delta)}, {cobracket_coproduct(delta), unit_coproduct()}};
  return s;
}

}  // namespace

std::vector<IdentityComponent> verify_order2(const CoefficientTable& tbl) {
  const int n = tbl.basis.size();
  struct Spec {
    const char* label;
    MultiIndex mu;
    MultiIndex delta;
  };
  const Spec specs[] = {{"z^2", {0, 0, 1}, {0, 0, 1}},
                        {"th", {1, 0, 0}, {0, 1, 0}},
                        {"tz", {1, 0, 0}, {0, 0, 1}},
                        {"hz", {0, 0, 1}, {0, 1, 0}}};
  std::vector<IdentityComponent> out;
  for (const auto& s : specs) {
    const BracketTensor mu = tbl.mu_at(s.mu);
    const CobracketTensor delta = tbl.delta_at(s.delta);
    SparseTensor<4> lhs, rhs;
    evaluate_lhs(delta, mu, lhs);
    evaluate(cocycle_side(mu, delta), n, rhs);
    out.push_back(finish(s.label, std::move(lhs), std::move(rhs)));
  }
  return out;
}

IdentityComponent verify_order3_thz(const CoefficientTable& tbl) {
  const int n = tbl.basis.size();
  const MultiIndex i001{0, 0, 1}, i010{0, 1, 0}, i100{1, 0, 0}, i110{1, 1, 0}, i101{1, 0, 1}, i011{0, 1, 1};

  SparseTensor<4> lhs;
  evaluate_lhs(tbl.delta_at(i001), tbl.mu_at(i110), lhs);
  evaluate_lhs(tbl.delta_at(i010), tbl.mu_at(i101), lhs);
  evaluate_lhs(tbl.delta_at(i110), tbl.mu_at(i001), lhs);
  evaluate_lhs(tbl.delta_at(i011), tbl.mu_at(i100), lhs);

  const Prod m0 = unit_product();
  const Cop d0 = unit_coproduct();
  auto mu = [&](const MultiIndex& m) { return bracket_product(tbl.mu_at(m)); };
  auto ms = [&](const MultiIndex& m) { return symmetric_product(tbl.ms_at(m)); };
  auto de = [&](const MultiIndex& m) { return cobracket_coproduct(tbl.delta_at(m)); };
  auto ds = [&](const MultiIndex& m) { return symmetric_coproduct(tbl.ds_at(m)); };

  std::vector<Side> sides;
  sides.push_back({{{m0, mu(i110)}, {mu(i110), m0}}, {{d0, de(i001)}, {de(i001), d0}}});
  sides.push_back({{{m0, mu(i101)},
                    {mu(i101), m0},
                    {ms(i001), mu(i100)},
                    {mu(i001), ms(i100)},
                    {ms(i100), mu(i001)},
                    {mu(i100), ms(i001)}},
                   {{d0, de(i010)}, {de(i010), d0}}});
  sides.push_back({{{m0, mu(i100)}, {mu(i100), m0}},
                   {{d0, de(i011)},
                    {de(i011), d0},
                    {ds(i001), de(i010)},
                    {de(i001), ds(i010)},
                    {ds(i010), de(i001)},
                    {de(i010), ds(i001)}}});
  sides.push_back({{{m0, mu(i001)}, {mu(i001), m0}}, {{d0, de(i110)}, {de(i110), d0}}});

  SparseTensor<4> rhs;
  for (const auto& s : sides) evaluate(s, n, rhs);
  return finish("thz", std::move(lhs), std::move(rhs));
}

SparseTensor<4> to_cocycle_layout(const SparseTensor<4>& d, SparseTensor<4>* unit_part) {
  SparseTensor<4> r;
  for (const auto& [k, c] : d.entries()) {
    if (k[2] == 0 || k[3] == 0) {
      if (unit_part) unit_part->add(k, c);
      continue;
    }
    r.add({k[0], k[1], k[2] - 1, k[3] - 1}, c);
  }
  return r;
}

DefectReport identity_report(const std::string& check, const std::vector<IdentityComponent>& comps,
                             const Basis& basis, const ParamSpace& params) {
  DefectReport rep;
  rep.check = check;
  const int n = basis.size();
  rep.items = comps.size() * static_cast<std::size_t>(n * (n - 1) / 2);
  for (const auto& comp : comps) {
    std::map<std::pair<int, int>, Tensor2> by_pair;
    for (const auto& [k, c] : comp.defect.entries()) {
      auto word = [](int u) { return u == 0 ? Word{} : Word::of(u - 1); };
      by_pair[{k[0], k[1]}].add({word(k[2]), word(k[3])}, c);
    }
    for (const auto& [p, t] : by_pair)
      rep.defects.push_back(describe(t, basis, params,
                                     "component " + comp.label + " on " + basis.name(p.first) + " (x) " +
                                         basis.name(p.second),
                                     {}));
  }
  return rep;
}

// ------------------------------------------------------------ tangent fields

TangentField tangent_field(const HopfPresentation& h, const std::string& direction,
                           const std::vector<std::string>& base) {
  TangentField f;
  f.params = h.params();
  f.basis = h.basis();
  f.base = base;
  const Truncation& tr = h.truncation();
  const Substitution s = parse_assignments(base, f.params, tr);
  const auto d = f.params.find(direction);
  if (!d) throw Error("unknown direction parameter '" + direction + "'");
  if (s.find(*d)) throw Error("the base point fixes the direction parameter '" + direction + "'");
  f.direction = *d;
  const HopfPresentation hb = specialize(h, s, f.params);
  Substitution zero;
  zero.set(*d, ParamPoly{});
  f.base_table = specialize(hb, zero).relations;

  const int n = f.basis.size();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      NCPoly v = first_order_part(hb.relations.rhs(j, i), *d);
      if (!v.is_zero()) f.mu.emplace(std::make_pair(j, i), std::move(v));
    }
  for (int g = 0; g < n; ++g) {
    const Tensor2 vv = restrict_vv(hb.coproduct[static_cast<std::size_t>(g)]);
    Tensor2 v = first_order_part(vv - flip(vv), *d);
    if (!v.is_zero()) f.delta.emplace(g, std::move(v));
  }
  return f;
}

namespace {

template <std::size_t K>
int max_degree(const NCTensor<K>& t) {
  int d = -1;
  for (const auto& [k, c] : t.terms()) d = std::max(d, c.max_degree());
  return d;
}

template <std::size_t K>
void compare_one(const std::string& what, const NCTensor<K>& actual, const NCTensor<K>& expected, bool full,
                 const TangentField& f, FieldDiff& diff) {
  ++diff.compared;
  if (!expected.is_zero() && actual.is_zero()) {
    diff.missing.push_back(what + ": expected " + expected.str(f.basis, f.params) + ", field component is zero");
    return;
  }
  const NCTensor<K> got = full || expected.is_zero() ? actual : actual.truncated(max_degree(expected));
  if (got != expected)
    diff.mismatched.push_back(what + ": expected " + expected.str(f.basis, f.params) + ", got " +
                              got.str(f.basis, f.params));
}

}  // namespace

FieldDiff compare_field(const TangentField& f, const FieldExpectation& expected, CompareMode mode) {
  FieldDiff diff;
  const Normalizer norm(f.base_table);
  const Truncation& tr = f.base_table.truncation();
  std::set<std::pair<int, int>> seen_mu;
  std::set<int> seen_delta;
  for (const auto& e : expected.entries) {
    const bool full = mode == CompareMode::Exact || e.exact;
    if (e.is_delta) {
      const Tensor2 want = norm.normalize(parse_tensor_expr(e.text, f.basis, f.params, tr));
      auto it = f.delta.find(e.g);
      compare_one("delta(" + f.basis.name(e.g) + ")", it == f.delta.end() ? Tensor2{} : it->second, want, full, f,
                  diff);
      seen_delta.insert(e.g);
    } else {
      if (e.a == e.b) throw Error("mu(" + f.basis.name(e.a) + "," + f.basis.name(e.b) + ") is not a valid entry");
      NCPoly want = norm.normalize(parse_expr(e.text, f.basis, f.params, tr));
      const auto key = std::make_pair(std::max(e.a, e.b), std::min(e.a, e.b));
      if (e.a < e.b) want = -want;
      auto it = f.mu.find(key);
      NCPoly got = it == f.mu.end() ? NCPoly{} : it->second;
      // Report in the orientation the entry was written in.
      if (e.a < e.b) {
        got = -got;
        want = -want;
      }
      compare_one("mu(" + f.basis.name(e.a) + "," + f.basis.name(e.b) + ")", got, want, full, f, diff);
      seen_mu.insert(key);
    }
  }
  if (mode == CompareMode::Exact)
    for (const auto& [k, v] : f.mu)
      if (!seen_mu.count(k))
        diff.extra.push_back("mu(" + f.basis.name(k.first) + "," + f.basis.name(k.second) + ") = " +
                             v.str(f.basis, f.params));
  for (const auto& [g, v] : f.delta)
    if (expected.no_delta || (mode == CompareMode::Exact && !seen_delta.count(g)))
      diff.extra.push_back("delta(" + f.basis.name(g) + ") = " + v.str(f.basis, f.params));
  return diff;
}

std::string field_str(const TangentField& f) {
  std::string out;
  for (const auto& [k, v] : f.mu)
    out += "mu(" + f.basis.name(k.first) + "," + f.basis.name(k.second) + ") = " + v.str(f.basis, f.params) + "\n";
  for (const auto& [g, v] : f.delta) out += "delta(" + f.basis.name(g) + ") = " + v.str(f.basis, f.params) + "\n";
  if (out.empty()) out = "(zero field)\n";
  return out;
}

}  // namespace bforge
