#include "bforge/document.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "bforge/parser.hpp"

namespace bforge {

namespace detail {
extern const char* const kPaperCorrected;
extern const char* const kPaperVerbatim;
}  // namespace detail

namespace {

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return s != "i" && s != "exp" && s != "sinh" && s != "cosh";
}

const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
  return j.at(key);
}

std::string as_string(const Json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where + ": expected a string");
  return j.get<std::string>();
}

std::vector<std::string> string_list(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected a list of strings");
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(as_string(e, where));
  return out;
}

int generator_index(const Basis& b, const Json& j, const std::string& where) {
  const std::string name = as_string(j, where);
  const auto idx = b.find(name);
  if (!idx) throw ParseError(where + ": unknown generator '" + name + "'");
  return *idx;
}

std::array<int, 2> generator_pair(const Basis& b, const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw ParseError(where + ": expected a pair of generators");
  return {generator_index(b, j[0], where), generator_index(b, j[1], where)};
}

// Expression errors are prefixed with their location in the document.
template <class F>
auto in_context(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw ParseError(where + ": " + e.what());
  } catch (const InexactDivision& e) {
    throw InexactDivision(where + ": " + e.what());
  } catch (const SeriesDomainError& e) {
    throw SeriesDomainError(where + ": " + e.what());
  }
}

Composition parse_composition(const std::string& name, const Json& j, const Basis& basis, const ParamSpace& params,
                              const Truncation& tr) {
  const std::string where = "composition " + name;
  Composition c;
  c.name = name;
  const std::string kind = as_string(member(j, "kind", where), where);
  if (kind != "bracket" && kind != "cobracket") throw ParseError(where + ": kind must be 'bracket' or 'cobracket'");
  c.is_cobracket = kind == "cobracket";
  const Json& entries = member(j, "entries", where);
  if (!entries.is_array()) throw ParseError(where + ": entries must be a list");
  std::vector<BracketTensor::Relation> br;
  std::vector<CobracketTensor::Relation> co;
  for (const auto& e : entries) {
    const std::string text = as_string(member(e, "coefficient", where), where);
    ParamPoly coef = in_context(where, [&] { return parse_param_expr(text, params, tr); });
    if (c.is_cobracket) {
      const int src = generator_index(basis, member(e, "lower", where), where);
      const auto up = generator_pair(basis, member(e, "upper", where), where);
      co.push_back({src, up[0], up[1], std::move(coef)});
    } else {
      const auto low = generator_pair(basis, member(e, "lower", where), where);
      const int res = generator_index(basis, member(e, "upper", where), where);
      br.push_back({low[0], low[1], res, std::move(coef)});
    }
  }
  if (c.is_cobracket)
    c.cobracket = CobracketTensor::from_relations(basis, co);
  else
    c.bracket = BracketTensor::from_relations(basis, br);
  return c;
}

HopfPresentation parse_presentation(const Json& j, const Basis& basis, const ParamSpace& params,
                                    const Truncation& tr) {
  const std::string where = "presentation";
  const Json& brackets = member(j, "brackets", where);
  if (!brackets.is_array()) throw ParseError(where + ": brackets must be a list");

  // Structure first: generator names and duplicate pairs.
  std::set<std::pair<int, int>> seen;
  for (const auto& b : brackets) {
    const int l = generator_index(basis, member(b, "left", where), where);
    const int r = generator_index(basis, member(b, "right", where), where);
    const std::string label = "[" + basis.name(l) + "," + basis.name(r) + "]";
    if (l == r) throw ParseError(where + ": relation " + label + " brackets a generator with itself");
    if (!seen.emplace(std::max(l, r), std::min(l, r)).second)
      throw ParseError(where + ": duplicate relation for the pair " + label);
  }
  if (j.contains("coproducts") && !j.at("coproducts").is_object())
    throw ParseError(where + ": coproducts must be an object keyed by generator");
  if (j.contains("counit") && !j.at("counit").is_object())
    throw ParseError(where + ": counit must be an object keyed by generator");
  for (const char* key : {"coproducts", "counit", "antipode"})
    if (j.contains(key))
      for (const auto& [g, v] : j.at(key).items())
        if (!basis.find(g)) throw ParseError(where + "." + key + ": unknown generator '" + g + "'");

  std::vector<RelationSpec> specs;
  for (const auto& b : brackets) {
    RelationSpec s;
    s.left = basis.index(b.at("left").get<std::string>());
    s.right = basis.index(b.at("right").get<std::string>());
    s.label = "[" + basis.name(s.left) + "," + basis.name(s.right) + "]";
    const std::string text = as_string(member(b, "rhs", where), where);
    s.rhs = in_context("relation " + s.label, [&] { return parse_expr(text, basis, params, tr); });
    specs.push_back(std::move(s));
  }
  RelationTable table = RelationTable::build(basis, params, specs, tr);

  const int n = basis.size();
  std::vector<Tensor2> cop(static_cast<std::size_t>(n));
  std::vector<Scalar> eps(static_cast<std::size_t>(n), Scalar(0));
  for (int g = 0; g < n; ++g) {
    const std::string& name = basis.name(g);
    if (j.contains("coproducts") && j.at("coproducts").contains(name)) {
      const std::string text = as_string(j.at("coproducts").at(name), "coproduct of " + name);
      cop[static_cast<std::size_t>(g)] =
          in_context("coproduct of " + name, [&] { return parse_tensor_expr(text, basis, params, tr); });
    } else {
      cop[static_cast<std::size_t>(g)] = Tensor2::term({Word::of(g), Word{}}) + Tensor2::term({Word{}, Word::of(g)});
    }
    if (j.contains("counit") && j.at("counit").contains(name)) {
      const Json& v = j.at("counit").at(name);
      const std::string text = v.is_number_integer() ? std::to_string(v.get<long>()) : as_string(v, "counit");
      eps[static_cast<std::size_t>(g)] = in_context("counit of " + name, [&] { return parse_scalar(text); });
    }
  }
  HopfPresentation h = HopfPresentation::build(std::move(table), std::move(cop), std::move(eps));
  if (j.contains("antipode")) {
    const Json& a = j.at("antipode");
    if (!a.is_object()) throw ParseError(where + ": antipode must be an object keyed by generator");
    std::vector<NCPoly> s(static_cast<std::size_t>(n));
    for (int g = 0; g < n; ++g) {
      const std::string& name = basis.name(g);
      if (!a.contains(name)) throw ParseError(where + ": antipode of " + name + " is missing");
      const std::string text = as_string(a.at(name), "antipode of " + name);
      s[static_cast<std::size_t>(g)] =
          in_context("antipode of " + name, [&] { return parse_expr(text, basis, params, tr); });
    }
    h.antipode = std::move(s);
  }
  return h;
}

}  // namespace

const Composition* Document::find(const std::string& n) const {
  for (const auto& c : compositions)
    if (c.name == n) return &c;
  return nullptr;
}

const Composition& Document::composition(const std::string& n) const {
  if (const Composition* c = find(n)) return *c;
  throw ParseError("document has no composition named '" + n + "'");
}

std::vector<std::string> embedded_datasets() { return {"paper-corrected", "paper-verbatim"}; }

std::string read_source(const std::string& ref) {
  if (!ref.empty() && ref[0] == '@') {
    const std::string name = ref.substr(1);
    if (name == "paper-corrected") return detail::kPaperCorrected;
    if (name == "paper-verbatim") return detail::kPaperVerbatim;
    throw ParseError("unknown embedded dataset '" + name + "' (available: @paper-corrected, @paper-verbatim)");
  }
  std::ifstream in(ref, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + ref + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Json load_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

Truncation resolve_settings(const Json& doc, const SettingsOverride& o) {
  Truncation tr;
  if (doc.contains("settings")) {
    const Json& s = doc.at("settings");
    auto get = [&](const char* key, int& out) {
      if (!s.contains(key)) return;
      if (!s.at(key).is_number_integer()) throw ParseError(std::string("settings.") + key + " must be an integer");
      out = s.at(key).get<int>();
    };
    get("order", tr.order);
    get("cap", tr.cap);
    get("slack", tr.slack);
  }
  if (o.order) tr.order = *o.order;
  if (o.cap) tr.cap = *o.cap;
  if (o.slack) tr.slack = *o.slack;
  if (tr.order < 0) throw ParseError("order must be nonnegative");
  if (tr.cap < 1 || tr.cap > kMaxWordLength)
    throw ParseError("generator-degree cap must lie in 1.." + std::to_string(kMaxWordLength));
  if (tr.slack < 0) throw ParseError("slack must be nonnegative");
  return tr;
}

Document parse_document(const Json& j, const SettingsOverride& o) {
  if (!j.is_object()) throw ParseError("document must be a JSON object");
  const std::string schema = as_string(member(j, "schema", "document"), "schema");
  if (schema != kSchema) throw ParseError("unsupported schema '" + schema + "' (expected " + kSchema + ")");
  Document d;
  d.name = j.contains("name") ? as_string(j.at("name"), "name") : "";
  if (j.contains("notes")) d.notes = string_list(j.at("notes"), "notes");
  d.tr = resolve_settings(j, o);

  const auto params = string_list(member(j, "parameters", "document"), "parameters");
  const auto gens = string_list(member(j, "generators", "document"), "generators");
  if (params.size() > static_cast<std::size_t>(kMaxParams))
    throw ParseError("at most " + std::to_string(kMaxParams) + " parameters are supported");
  std::set<std::string> names;
  for (const auto& p : params) {
    if (!is_identifier(p)) throw ParseError("invalid parameter name '" + p + "'");
    if (!names.insert(p).second) throw ParseError("identifier '" + p + "' declared twice");
  }
  for (const auto& g : gens) {
    if (!is_identifier(g)) throw ParseError("invalid generator name '" + g + "'");
    if (!names.insert(g).second) throw ParseError("identifier '" + g + "' declared twice");
  }
  if (gens.size() > 255) throw ParseError("too many generators");
  d.params = ParamSpace(params);
  d.basis = Basis(gens);

  if (j.contains("compositions")) {
    const Json& cs = j.at("compositions");
    if (!cs.is_object()) throw ParseError("compositions must be an object keyed by name");
    for (const auto& [name, c] : cs.items()) d.compositions.push_back(parse_composition(name, c, d.basis, d.params, d.tr));
  }
  if (j.contains("presentation")) d.presentation = parse_presentation(j.at("presentation"), d.basis, d.params, d.tr);
  return d;
}

Document load_document(const std::string& ref, const SettingsOverride& o) {
  return parse_document(load_json(read_source(ref)), o);
}

std::string expr_text(const NCPoly& p, const Basis& basis, const ParamSpace& params) { return p.str(basis, params); }
std::string expr_text(const Tensor2& p, const Basis& basis, const ParamSpace& params) { return p.str(basis, params); }

Json emit_composition(const Composition& c, const Basis& basis, const ParamSpace& params) {
  Json j;
  j["kind"] = c.is_cobracket ? "cobracket" : "bracket";
  Json entries = Json::array();
  // One entry per antisymmetric pair, in the orientation with the larger index first.
  const SparseTensor<3>& t = c.is_cobracket ? c.cobracket.entries() : c.bracket.entries();
  for (const auto& [k, v] : t.entries()) {
    if (c.is_cobracket) {
      const bool canonical = k[1] > k[2] || (k[1] == k[2]);
      const ParamPoly mirror = c.cobracket.at(k[0], k[2], k[1]);
      if (!canonical && mirror == -v) continue;
      entries.push_back({{"lower", basis.name(k[0])},
                         {"upper", {basis.name(k[1]), basis.name(k[2])}},
                         {"coefficient", v.str(params)}});
    } else {
      const bool canonical = k[0] > k[1] || (k[0] == k[1]);
      const ParamPoly mirror = c.bracket.at(k[1], k[0], k[2]);
      if (!canonical && mirror == -v) continue;
      entries.push_back({{"lower", {basis.name(k[0]), basis.name(k[1])}},
                         {"upper", basis.name(k[2])},
                         {"coefficient", v.str(params)}});
    }
  }
  j["entries"] = std::move(entries);
  return j;
}

Json emit_document(const Document& d) {
  Json j;
  j["schema"] = kSchema;
  j["name"] = d.name;
  j["notes"] = d.notes;
  j["parameters"] = d.params.names();
  j["generators"] = d.basis.names();
  j["settings"] = {{"order", d.tr.order}, {"cap", d.tr.cap}, {"slack", d.tr.slack}};
  Json cs = Json::object();
  for (const auto& c : d.compositions) cs[c.name] = emit_composition(c, d.basis, d.params);
  j["compositions"] = std::move(cs);
  if (d.presentation) {
    const HopfPresentation& h = *d.presentation;
    Json p;
    Json brackets = Json::array();
    const int n = d.basis.size();
    for (int jj = 0; jj < n; ++jj)
      for (int i = 0; i < jj; ++i) {
        if (!h.relations.has(jj, i)) continue;
        const RelationSpec w = h.relations.written(jj, i);
        brackets.push_back({{"left", d.basis.name(w.left)},
                            {"right", d.basis.name(w.right)},
                            {"rhs", expr_text(w.rhs, d.basis, d.params)}});
      }
    p["brackets"] = std::move(brackets);
    Json cop = Json::object();
    Json eps = Json::object();
    for (int g = 0; g < n; ++g) {
      cop[d.basis.name(g)] = expr_text(h.coproduct[static_cast<std::size_t>(g)], d.basis, d.params);
      eps[d.basis.name(g)] = h.counit[static_cast<std::size_t>(g)].str();
    }
    p["coproducts"] = std::move(cop);
    p["counit"] = std::move(eps);
    if (h.antipode) {
      Json s = Json::object();
      for (int g = 0; g < n; ++g) s[d.basis.name(g)] = expr_text((*h.antipode)[static_cast<std::size_t>(g)], d.basis, d.params);
      p["antipode"] = std::move(s);
    }
    j["presentation"] = std::move(p);
  }
  return j;
}

ExpectationFile parse_expectation(const Json& j, const Basis& basis) {
  const std::string where = "expectation";
  const std::string schema = as_string(member(j, "schema", where), "schema");
  if (schema != kSchema) throw ParseError("unsupported schema '" + schema + "' (expected " + kSchema + ")");
  if (as_string(member(j, "kind", where), "kind") != "tangent-expectation")
    throw ParseError(where + ": kind must be 'tangent-expectation'");
  ExpectationFile f;
  if (j.contains("name")) f.name = as_string(j.at("name"), "name");
  if (j.contains("direction")) f.direction = as_string(j.at("direction"), "direction");
  if (j.contains("at")) f.at = string_list(j.at("at"), "at");
  if (j.contains("mode")) {
    const std::string m = as_string(j.at("mode"), "mode");
    if (m != "leading" && m != "exact") throw ParseError(where + ": mode must be 'leading' or 'exact'");
    f.mode = m == "exact" ? CompareMode::Exact : CompareMode::Leading;
  }
  if (j.contains("no_delta")) f.expectation.no_delta = j.at("no_delta").get<bool>();
  const Json& entries = member(j, "entries", where);
  if (!entries.is_array()) throw ParseError(where + ": entries must be a list");
  for (const auto& e : entries) {
    FieldEntry fe;
    if (e.contains("mu")) {
      const auto p = generator_pair(basis, e.at("mu"), where);
      fe.a = p[0];
      fe.b = p[1];
      if (fe.a == fe.b) throw ParseError(where + ": mu entry pairs a generator with itself");
    } else if (e.contains("delta")) {
      fe.is_delta = true;
      fe.g = generator_index(basis, e.at("delta"), where);
    } else {
      throw ParseError(where + ": every entry needs 'mu' or 'delta'");
    }
    fe.text = as_string(member(e, "value", where), where);
    if (e.contains("exact")) fe.exact = e.at("exact").get<bool>();
    f.expectation.entries.push_back(std::move(fe));
  }
  return f;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ------------------------------------------------------------------ reports

bool Report::passed() const {
  for (const auto& c : checks)
    if (!c.passed()) return false;
  return true;
}

std::string render_text(const Report& r) {
  std::ostringstream os;
  os << "bforge " << r.command << "\n";
  if (r.settings)
    os << "settings: order " << r.settings->order << ", cap " << r.settings->cap << ", slack " << r.settings->slack
       << "\n";
  for (const auto& n : r.notes) os << "note: " << n << "\n";
  for (const auto& s : r.sections) {
    os << "\n" << s.title << "\n";
    for (const auto& l : s.lines) os << "  " << l << "\n";
  }
  if (!r.checks.empty()) os << "\n";
  for (const auto& c : r.checks) {
    os << (c.passed() ? "[pass] " : "[FAIL] ") << c.check << ": " << c.items << " items, " << c.defects.size()
       << " nonzero\n";
    for (const auto& d : c.defects) {
      os << "  " << d.location;
      if (!d.relations.empty()) {
        os << " (";
        for (std::size_t i = 0; i < d.relations.size(); ++i) os << (i ? ", " : "") << d.relations[i];
        os << ")";
      }
      os << "\n    lowest degree " << d.lowest_degree << ":";
      for (const auto& m : d.monomials) os << " " << m;
      os << "\n    " << d.value << "\n";
    }
    for (const auto& n : c.notes) os << "  note: " << n << "\n";
  }
  os << "\nresult: " << (r.passed() ? "pass" : "FAIL") << "\n";
  return os.str();
}

Json render_json(const Report& r) {
  Json j;
  j["schema"] = kSchema;
  j["command"] = r.command;
  if (r.settings) j["settings"] = {{"order", r.settings->order}, {"cap", r.settings->cap}, {"slack", r.settings->slack}};
  j["notes"] = r.notes;
  Json sections = Json::array();
  for (const auto& s : r.sections) sections.push_back({{"title", s.title}, {"lines", s.lines}});
  j["sections"] = std::move(sections);
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json cj;
    cj["check"] = c.check;
    cj["items"] = c.items;
    cj["passed"] = c.passed();
    Json defects = Json::array();
    for (const auto& d : c.defects)
      defects.push_back({{"location", d.location},
                         {"relations", d.relations},
                         {"lowest_degree", d.lowest_degree},
                         {"monomials", d.monomials},
                         {"terms", d.terms},
                         {"value", d.value}});
    cj["defects"] = std::move(defects);
    cj["notes"] = c.notes;
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  j["passed"] = r.passed();
  return j;
}

DefectReport antisymmetry_report(const std::string& check, const SparseTensor<3>& d, bool cobracket,
                                 const Basis& basis, const ParamSpace& params) {
  DefectReport rep;
  rep.check = check;
  const int n = basis.size();
  rep.items = static_cast<std::size_t>(n * (n + 1) / 2);
  std::map<std::pair<int, int>, NCPoly> by_pair;
  std::map<int, SparseTensor<3>> by_source;
  for (const auto& [k, v] : d.entries()) {
    if (cobracket)
      by_pair[{k[1], k[2]}].add({Word::of(k[0])}, v);
    else
      by_pair[{k[0], k[1]}].add({Word::of(k[2])}, v);
  }
  for (const auto& [p, t] : by_pair)
    rep.defects.push_back(describe(t, basis, params,
                                   (cobracket ? "upper pair (" : "pair (") + basis.name(p.first) + "," +
                                       basis.name(p.second) + ")",
                                   {}));
  return rep;
}

DefectReport jacobi_report(const std::string& check, const SparseTensor<4>& d, const Basis& basis,
                           const ParamSpace& params) {
  DefectReport rep;
  rep.check = check;
  const int n = basis.size();
  rep.items = static_cast<std::size_t>(n * n * n);
  std::map<std::array<int, 3>, NCPoly> by;
  for (const auto& [k, v] : d.entries()) by[{k[0], k[1], k[2]}].add({Word::of(k[3])}, v);
  for (const auto& [t, p] : by)
    rep.defects.push_back(describe(p, basis, params,
                                   "triple (" + basis.name(t[0]) + "," + basis.name(t[1]) + "," + basis.name(t[2]) + ")",
                                   {}));
  return rep;
}

DefectReport cojacobi_report(const std::string& check, const SparseTensor<4>& d, const Basis& basis,
                             const ParamSpace& params) {
  DefectReport rep;
  rep.check = check;
  rep.items = static_cast<std::size_t>(basis.size());
  std::map<int, Tensor3> by;
  for (const auto& [k, v] : d.entries()) by[k[0]].add({Word::of(k[1]), Word::of(k[2]), Word::of(k[3])}, v);
  for (const auto& [g, t] : by) rep.defects.push_back(describe(t, basis, params, "generator " + basis.name(g), {}));
  return rep;
}

DefectReport cocycle_report(const std::string& check, const SparseTensor<4>& d, const Basis& basis,
                            const ParamSpace& params) {
  DefectReport rep;
  rep.check = check;
  const int n = basis.size();
  rep.items = static_cast<std::size_t>(n * (n - 1) / 2);
  std::map<std::pair<int, int>, Tensor2> by;
  for (const auto& [k, v] : d.entries()) by[{k[0], k[1]}].add({Word::of(k[2]), Word::of(k[3])}, v);
  for (const auto& [p, t] : by)
    rep.defects.push_back(
        describe(t, basis, params, "pair [" + basis.name(p.first) + "," + basis.name(p.second) + "]", {}));
  return rep;
}

}  // namespace bforge
