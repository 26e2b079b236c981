#include "bforge/hopf.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "bforge/parser.hpp"

namespace bforge {

namespace {

std::string gen_label(const Basis& b, int g) { return "Delta " + b.name(g); }

Tensor2 tensor_of(const NCPoly& left, const Word& right, const ParamPoly& c, int order) {
  Tensor2 out;
  for (const auto& [k, lc] : left.terms()) out.add({k[0], right}, ParamPoly::mul(lc, c, order));
  return out;
}

Tensor2 tensor_of(const Word& left, const NCPoly& right, const ParamPoly& c, int order) {
  Tensor2 out;
  for (const auto& [k, rc] : right.terms()) out.add({left, k[0]}, ParamPoly::mul(c, rc, order));
  return out;
}

template <class F>
auto located(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const DegreeCapExceeded& e) {
    throw DegreeCapExceeded(where + ": " + e.what());
  } catch (const NonContracting& e) {
    throw NonContracting(where + ": " + e.what());
  }
}

}  // namespace

HopfPresentation HopfPresentation::build(RelationTable relations, std::vector<Tensor2> coproduct,
                                         std::vector<Scalar> counit) {
  const int n = relations.size();
  if (static_cast<int>(coproduct.size()) != n) throw Error("coproduct table must cover every generator");
  if (static_cast<int>(counit.size()) != n) throw Error("counit table must cover every generator");
  HopfPresentation h;
  Normalizer norm(relations);
  for (int g = 0; g < n; ++g) {
    if (!coproduct[g].coefficient({Word{}, Word{}}).is_zero())
      throw Error("coproduct of " + relations.basis().name(g) + " has a component on 1 (x) 1");
    coproduct[g] = norm.normalize(coproduct[g]);
  }
  h.relations = std::move(relations);
  h.coproduct = std::move(coproduct);
  h.counit = std::move(counit);
  return h;
}

template <std::size_t K>
DefectEntry describe(const NCTensor<K>& defect, const Basis& basis, const ParamSpace& params, std::string location,
                     std::vector<std::string> relations, std::size_t max_terms) {
  DefectEntry e;
  e.location = std::move(location);
  e.relations = std::move(relations);
  e.terms = defect.size();
  e.lowest_degree = defect.min_degree();
  std::set<Monomial, bool (*)(const Monomial&, const Monomial&)> lowest(
      [](const Monomial& a, const Monomial& b) { return a < b; });
  for (const auto& [k, c] : defect.terms())
    for (const auto& [m, s] : c.terms())
      if (m.degree() == e.lowest_degree) lowest.insert(m);
  for (const auto& m : lowest) e.monomials.push_back(monomial_str(m, params));
  if (defect.size() <= max_terms) {
    e.value = defect.str(basis, params);
  } else {
    NCTensor<K> head;
    std::size_t n = 0;
    for (const auto& [k, c] : defect.terms()) {
      if (n++ == max_terms) break;
      head.add(k, c);
    }
    e.value = head.str(basis, params) + " + ... (" + std::to_string(defect.size()) + " terms)";
  }
  return e;
}

template DefectEntry describe<1>(const NCPoly&, const Basis&, const ParamSpace&, std::string, std::vector<std::string>,
                                 std::size_t);
template DefectEntry describe<2>(const Tensor2&, const Basis&, const ParamSpace&, std::string,
                                 std::vector<std::string>, std::size_t);
template DefectEntry describe<3>(const Tensor3&, const Basis&, const ParamSpace&, std::string,
                                 std::vector<std::string>, std::size_t);

// -------------------------------------------------------------- HopfEngine

HopfEngine::HopfEngine(const HopfPresentation& h) : h_(h), norm_(h.relations) {}

const Tensor2& HopfEngine::coproduct_word(const Word& w, int budget) const {
  const auto key = std::pair{w, budget};
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  Tensor2 r;
  if (w.empty()) {
    r = Tensor2::unit();
  } else {
    const Tensor2& head = coproduct_word(w.without_last(), budget);
    r = norm_.multiply(head, h_.coproduct[w.back()], budget);
  }
  return memo_.emplace(key, std::move(r)).first->second;
}

Tensor2 HopfEngine::coproduct(const NCPoly& a, int order) const {
  Tensor2 out;
  for (const auto& [k, c] : a.terms()) {
    const int budget = order - c.min_degree();
    if (budget < 0) continue;
    if (k[0].is_sorted()) {
      out.add_scaled(coproduct_word(k[0], budget), c, order);
    } else {
      Tensor2 acc = Tensor2::unit();
      for (int p = 0; p < k[0].size(); ++p) acc = norm_.multiply(acc, h_.coproduct[k[0][p]], budget);
      out.add_scaled(acc, c, order);
    }
  }
  return out;
}

Tensor2 HopfEngine::hom_defect(int j, int i) const {
  const Tensor2& dj = h_.coproduct[j];
  const Tensor2& di = h_.coproduct[i];
  return coproduct(h_.relations.rhs(j, i)) - norm_.commutator(dj, di);
}

Tensor3 HopfEngine::coassociativity_defect(int g) const {
  const int order = this->order();
  Tensor3 out;
  for (const auto& [k, c] : h_.coproduct[g].terms()) {
    const int budget = order - c.min_degree();
    for (const auto& [a, ca] : coproduct_word(k[0], budget).terms())
      out.add({a[0], a[1], k[1]}, ParamPoly::mul(c, ca, order));
    for (const auto& [b, cb] : coproduct_word(k[1], budget).terms())
      out.add({k[0], b[0], b[1]}, -ParamPoly::mul(c, cb, order));
  }
  return out;
}

ParamPoly HopfEngine::counit(const NCPoly& a) const {
  ParamPoly out;
  for (const auto& [k, c] : a.terms()) {
    Scalar e = 1;
    for (int p = 0; p < k[0].size() && !e.is_zero(); ++p) e *= h_.counit[k[0][p]];
    out += c.scaled(e);
  }
  return out;
}

std::pair<NCPoly, NCPoly> HopfEngine::counit_defect(int g) const {
  NCPoly left = -generator(g);
  NCPoly right = -generator(g);
  for (const auto& [k, c] : h_.coproduct[g].terms()) {
    left.add({k[1]}, c * counit(NCPoly::term({k[0]})));
    right.add({k[0]}, c * counit(NCPoly::term({k[1]})));
  }
  return {left, right};
}

// ----------------------------------------------------------------- reports

DefectReport presentation_jacobi_report(const HopfEngine& e) {
  const auto& rel = e.presentation().relations;
  const Basis& b = rel.basis();
  DefectReport r;
  r.check = "jacobi";
  const int n = rel.size();
  r.items = static_cast<std::size_t>(n * (n - 1) * (n - 2) / 6);
  for (auto& t : presentation_jacobi_defect(e.normalizer())) {
    std::vector<std::string> labels;
    for (auto [x, y] : {std::pair{t.b, t.a}, std::pair{t.c, t.b}, std::pair{t.c, t.a}})
      if (rel.has(x, y)) labels.push_back(rel.label(x, y));
    r.defects.push_back(describe(t.defect, b, rel.params(),
                                 "triple (" + b.name(t.a) + "," + b.name(t.b) + "," + b.name(t.c) + ")", labels));
  }
  return r;
}

DefectReport coproduct_hom_report(const HopfEngine& e) {
  const auto& rel = e.presentation().relations;
  const Basis& b = rel.basis();
  DefectReport r;
  r.check = "hom";
  const int n = rel.size();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      ++r.items;
      Tensor2 d = located("pair " + rel.label(j, i), [&] { return e.hom_defect(j, i); });
      if (d.is_zero()) continue;
      r.defects.push_back(describe(d, b, rel.params(), "pair " + rel.label(j, i),
                                   {rel.label(j, i), gen_label(b, j), gen_label(b, i)}));
    }
  return r;
}

DefectReport coassociativity_report(const HopfEngine& e) {
  const auto& rel = e.presentation().relations;
  const Basis& b = rel.basis();
  DefectReport r;
  r.check = "coassoc";
  for (int g = 0; g < rel.size(); ++g) {
    ++r.items;
    Tensor3 d = located("generator " + b.name(g), [&] { return e.coassociativity_defect(g); });
    if (!d.is_zero()) r.defects.push_back(describe(d, b, rel.params(), "generator " + b.name(g), {gen_label(b, g)}));
  }
  return r;
}

DefectReport counit_report(const HopfEngine& e) {
  const auto& h = e.presentation();
  const auto& rel = h.relations;
  const Basis& b = rel.basis();
  DefectReport r;
  r.check = "counit";
  for (int g = 0; g < rel.size(); ++g) {
    auto [left, right] = e.counit_defect(g);
    r.items += 2;
    if (!left.is_zero())
      r.defects.push_back(describe(left, b, rel.params(), "(eps (x) id) Delta " + b.name(g), {gen_label(b, g)}));
    if (!right.is_zero())
      r.defects.push_back(describe(right, b, rel.params(), "(id (x) eps) Delta " + b.name(g), {gen_label(b, g)}));
  }
  for (int j = 0; j < rel.size(); ++j)
    for (int i = 0; i < j; ++i) {
      if (!rel.has(j, i)) continue;
      ++r.items;
      const ParamPoly eps = e.counit(rel.rhs(j, i)) -
                            ParamPoly(h.counit[j] * h.counit[i] - h.counit[i] * h.counit[j]);
      if (!eps.is_zero())
        r.defects.push_back(describe(NCPoly::unit(eps), b, rel.params(), "eps of relation " + rel.label(j, i),
                                     {rel.label(j, i)}));
    }
  return r;
}

// ---------------------------------------------------------------- antipode

NCPoly apply_antipode(const Normalizer& norm, const std::vector<NCPoly>& s, const NCPoly& a, int order) {
  NCPoly out;
  for (const auto& [k, c] : a.terms()) {
    const int d = c.min_degree();
    if (d > order) continue;
    NCPoly acc = NCPoly::unit();
    for (int p = k[0].size() - 1; p >= 0; --p) acc = norm.multiply(acc, s[k[0][p]], order - d);
    out.add_scaled(acc, c, order);
  }
  return out;
}

NCPoly apply_hom_extension(const Normalizer& norm, const std::vector<NCPoly>& s, const NCPoly& a, int order) {
  NCPoly out;
  for (const auto& [k, c] : a.terms()) {
    const int d = c.min_degree();
    if (d > order) continue;
    NCPoly acc = NCPoly::unit();
    for (int p = 0; p < k[0].size(); ++p) acc = norm.multiply(acc, s[k[0][p]], order - d);
    out.add_scaled(acc, c, order);
  }
  return out;
}

namespace {

// m(S (x) id) t  resp.  m(id (x) S) t
NCPoly contract_left(const Normalizer& norm, const std::vector<NCPoly>& s, const Tensor2& t, int order) {
  NCPoly out;
  for (const auto& [k, c] : t.terms()) {
    if (c.min_degree() > order) continue;
    NCPoly sl = apply_antipode(norm, s, NCPoly::term({k[0]}, c), order);
    out.add(norm.multiply(sl, NCPoly::term({k[1]}), order));
  }
  return out;
}

NCPoly contract_right(const Normalizer& norm, const std::vector<NCPoly>& s, const Tensor2& t, int order) {
  NCPoly out;
  for (const auto& [k, c] : t.terms()) {
    if (c.min_degree() > order) continue;
    NCPoly sr = apply_antipode(norm, s, NCPoly::term({k[1]}, c), order);
    out.add(norm.multiply(NCPoly::term({k[0]}), sr, order));
  }
  return out;
}

}  // namespace

AntipodeResult solve_antipode(const HopfEngine& e, int order) {
  const auto& h = e.presentation();
  const Normalizer& norm = e.normalizer();
  if (order > e.order()) throw Error("antipode order exceeds the presentation truncation order");
  const int n = h.relations.size();
  const Basis& b = h.basis();

  std::vector<Tensor2> rest(n);
  for (int g = 0; g < n; ++g) {
    rest[g] = h.coproduct[g].truncated(order);
    rest[g].add({Word::of(g), Word{}}, ParamPoly(-1));
  }

  AntipodeResult res;
  std::vector<NCPoly> s(n);
  for (int g = 0; g < n; ++g) s[g] = -generator(g);
  for (int iter = 0; iter <= order + 1; ++iter) {
    std::vector<NCPoly> next(n);
    for (int g = 0; g < n; ++g) {
      next[g] = NCPoly::unit(ParamPoly(h.counit[g])) - contract_left(norm, s, rest[g], order);
      next[g] = next[g].truncated(order);
    }
    if (next == s) {
      res.converged = true;
      break;
    }
    if (iter == order + 1) {
      int lowest = kNoTruncation;
      for (int g = 0; g < n; ++g) lowest = std::min(lowest, (next[g] - s[g]).min_degree());
      res.failing_order = lowest;
    }
    s = std::move(next);
  }
  res.antipode = s;

  res.report.check = "antipode";
  if (!res.converged)
    res.report.notes.push_back("fixed-point iteration did not settle at parameter degree " +
                               std::to_string(res.failing_order));
  for (int g = 0; g < n; ++g) {
    const Tensor2 cop = h.coproduct[g].truncated(order);
    const NCPoly unit_eps = NCPoly::unit(ParamPoly(h.counit[g]));
    NCPoly left = contract_left(norm, s, cop, order) - unit_eps;
    NCPoly right = contract_right(norm, s, cop, order) - unit_eps;
    res.report.items += 2;
    if (!left.is_zero())
      res.report.defects.push_back(
          describe(left, b, h.params(), "m(S (x) id) Delta " + b.name(g), {gen_label(b, g)}));
    if (!right.is_zero())
      res.report.defects.push_back(
          describe(right, b, h.params(), "m(id (x) S) Delta " + b.name(g), {gen_label(b, g)}));
  }
  return res;
}

DefectReport class_f_check(const HopfEngine& e, const std::vector<NCPoly>& s, int order) {
  const auto& h = e.presentation();
  const Normalizer& norm = e.normalizer();
  const Basis& b = h.basis();
  DefectReport r;
  r.check = "class-f";
  for (int g = 0; g < h.relations.size(); ++g) {
    Tensor2 left;
    Tensor2 right;
    for (const auto& [k, c] : h.coproduct[g].terms()) {
      if (c.min_degree() > order) continue;
      const NCPoly wl = NCPoly::term({k[0]});
      const NCPoly wr = NCPoly::term({k[1]});
      left.add(tensor_of(apply_hom_extension(norm, s, wl, order), k[1], c, order));
      left.add(tensor_of(apply_antipode(norm, s, wl, order), k[1], -c, order));
      right.add(tensor_of(k[0], apply_hom_extension(norm, s, wr, order), c, order));
      right.add(tensor_of(k[0], apply_antipode(norm, s, wr, order), -c, order));
    }
    r.items += 2;
    if (!left.is_zero())
      r.defects.push_back(describe(left, b, h.params(), "(S_up (x) id) Delta " + b.name(g), {gen_label(b, g)}));
    if (!right.is_zero())
      r.defects.push_back(describe(right, b, h.params(), "(id (x) S_up) Delta " + b.name(g), {gen_label(b, g)}));
  }
  return r;
}

// ---------------------------------------------------------- specialization

HopfPresentation specialize(const HopfPresentation& h, const Substitution& s, const ParamSpace& params) {
  const ParamSpace& old = h.params();
  if (params.size() < old.size()) throw Error("specialization parameter space must extend the original");
  for (int i = 0; i < old.size(); ++i)
    if (params.name(i) != old.name(i)) throw Error("specialization parameter space must extend the original");
  const Truncation& tr = h.truncation();
  const int n = h.relations.size();
  std::vector<RelationSpec> specs;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      if (!h.relations.has(j, i)) continue;
      RelationSpec w = h.relations.written(j, i);
      w.rhs = substitute_params(w.rhs, s, tr.order);
      specs.push_back(std::move(w));
    }
  RelationTable rel = RelationTable::build(h.basis(), params, specs, tr);
  std::vector<Tensor2> cop;
  for (const auto& c : h.coproduct) cop.push_back(substitute_params(c, s, tr.order));
  HopfPresentation out = HopfPresentation::build(std::move(rel), std::move(cop), h.counit);
  if (h.antipode) {
    std::vector<NCPoly> sp;
    for (const auto& a : *h.antipode) sp.push_back(substitute_params(a, s, tr.order));
    out.antipode = std::move(sp);
  }
  return out;
}

HopfPresentation specialize(const HopfPresentation& h, const Substitution& s) { return specialize(h, s, h.params()); }

Substitution parse_assignments(const std::vector<std::string>& assignments, ParamSpace& params,
                               const Truncation& tr) {
  Substitution s;
  std::vector<std::pair<int, std::string>> pending;
  for (const auto& a : assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw ParseError("assignment '" + a + "' must have the form name=value");
    auto trim = [](std::string x) {
      const auto f = x.find_first_not_of(" \t");
      const auto l = x.find_last_not_of(" \t");
      return f == std::string::npos ? std::string() : x.substr(f, l - f + 1);
    };
    const std::string name = trim(a.substr(0, eq));
    const std::string value = trim(a.substr(eq + 1));
    const auto idx = params.find(name);
    if (!idx) throw ParseError("assignment to unknown parameter '" + name + "'");
    for (const auto& [p, v] : pending)
      if (p == *idx) throw ParseError("parameter '" + name + "' assigned twice");
    // Fresh identifiers on the right-hand side become new parameters.
    for (std::size_t i = 0; i < value.size();) {
      if (std::isalpha(static_cast<unsigned char>(value[i])) || value[i] == '_') {
        std::size_t j = i;
        while (j < value.size() && (std::isalnum(static_cast<unsigned char>(value[j])) || value[j] == '_')) ++j;
        const std::string id = value.substr(i, j - i);
        const bool numeric_i = i > 0 && std::isdigit(static_cast<unsigned char>(value[i - 1])) && id == "i";
        if (!numeric_i && id != "i" && id != "exp" && id != "sinh" && id != "cosh") params.add(id);
        i = j;
      } else {
        ++i;
      }
    }
    pending.emplace_back(*idx, value);
  }
  for (const auto& [p, v] : pending) s.set(p, parse_param_expr(v, params, tr));
  return s;
}

}  // namespace bforge
