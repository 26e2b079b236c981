#include "bforge/cli.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "bforge/document.hpp"

namespace bforge {

namespace {

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

void write_text(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
}

std::string render(const Report& r, const std::string& format) {
  return format == "json" ? dump(render_json(r)) : render_text(r);
}

std::string mu_line(const std::string& name, int a, int b, const NCPoly& v, const Basis& basis,
                    const ParamSpace& params) {
  return name + "(" + basis.name(a) + "," + basis.name(b) + ") = " + v.str(basis, params);
}

// Bracket-type tensor (C^k_ab keyed (a, b, k)) as lines "name(x_b,x_a) = ..." for b > a.
std::vector<std::string> product_lines(const std::string& name, const SparseTensor<3>& t, const Basis& basis,
                                       const ParamSpace& params) {
  std::map<std::pair<int, int>, NCPoly> by;
  for (const auto& [k, v] : t.entries())
    if (k[0] > k[1]) by[{k[0], k[1]}].add({Word::of(k[2])}, v);
  std::vector<std::string> out;
  for (const auto& [p, v] : by) out.push_back(mu_line(name, p.first, p.second, v, basis, params));
  return out;
}

// Coproduct-type tensor (keyed (g, a, b)) as lines "name(x_g) = ...".
std::vector<std::string> coproduct_lines(const std::string& name, const SparseTensor<3>& t, const Basis& basis,
                                         const ParamSpace& params) {
  std::map<int, Tensor2> by;
  for (const auto& [k, v] : t.entries()) by[k[0]].add({Word::of(k[1]), Word::of(k[2])}, v);
  std::vector<std::string> out;
  for (const auto& [g, v] : by) out.push_back(name + "(" + basis.name(g) + ") = " + v.str(basis, params));
  return out;
}

DefectReport pair_item(const std::string& check, const SparseTensor<4>& d, const Basis& basis,
                       const ParamSpace& params) {
  return cocycle_report(check, d, basis, params);
}

// ------------------------------------------------------------------ check

Report cmd_check(const Document& d, const std::string& which, const std::vector<std::string>& names) {
  Report r;
  const int order = d.tr.order;
  auto brackets = [&] {
    std::vector<const Composition*> v;
    for (const auto& c : d.compositions)
      if (!c.is_cobracket) v.push_back(&c);
    return v;
  };
  auto cobrackets = [&] {
    std::vector<const Composition*> v;
    for (const auto& c : d.compositions)
      if (c.is_cobracket) v.push_back(&c);
    return v;
  };
  auto named = [&](const std::string& n, bool cobracket) -> const Composition& {
    const Composition& c = d.composition(n);
    if (c.is_cobracket != cobracket)
      throw ParseError("composition '" + n + "' is not a " + (cobracket ? "cobracket" : "bracket"));
    return c;
  };
  auto lie = [&](const Composition& c) {
    r.checks.push_back(antisymmetry_report("antisymmetry(" + c.name + ")", antisymmetry_defect(c.bracket), false,
                                           d.basis, d.params));
    r.checks.push_back(jacobi_report("jacobi(" + c.name + ")", jacobi_defect(c.bracket, order), d.basis, d.params));
  };
  auto colie = [&](const Composition& c) {
    r.checks.push_back(antisymmetry_report("antisymmetry(" + c.name + ")", antisymmetry_defect(c.cobracket), true,
                                           d.basis, d.params));
    r.checks.push_back(
        cojacobi_report("cojacobi(" + c.name + ")", cojacobi_defect(c.cobracket, order), d.basis, d.params));
  };

  if (which == "lie" || which == "colie") {
    const bool co = which == "colie";
    std::vector<const Composition*> targets;
    if (names.empty())
      targets = co ? cobrackets() : brackets();
    else
      for (const auto& n : names) targets.push_back(&named(n, co));
    if (targets.empty()) throw ParseError("document has no " + std::string(co ? "cobracket" : "bracket") + " compositions");
    for (const auto* c : targets) co ? colie(*c) : lie(*c);
  } else if (which == "bialgebra") {
    std::vector<std::pair<const Composition*, const Composition*>> pairs;
    if (names.empty()) {
      for (const auto* m : brackets())
        for (const auto* c : cobrackets()) pairs.emplace_back(m, c);
    } else if (names.size() == 2) {
      pairs.emplace_back(&named(names[0], false), &named(names[1], true));
    } else {
      throw ParseError("check bialgebra takes a bracket and a cobracket composition name");
    }
    if (pairs.empty()) throw ParseError("document has no bracket/cobracket pair");
    std::set<std::string> done;
    for (const auto& [m, c] : pairs) {
      if (done.insert(m->name).second) lie(*m);
      if (done.insert(c->name).second) colie(*c);
    }
    for (const auto& [m, c] : pairs)
      r.checks.push_back(pair_item("cocycle(" + m->name + ", " + c->name + ")",
                                   cocycle_defect(m->bracket, c->cobracket, order), d.basis, d.params));
  } else {
    std::vector<std::string> n = names;
    if (n.empty()) n = {"mu_100", "mu_001", "delta_010", "delta_001"};
    if (n.size() != 4) throw ParseError("check four-pairs takes four composition names (mu_100 mu_001 delta_010 delta_001)");
    const FourPairReport fp = check_four_pairs(named(n[0], false).bracket, named(n[1], false).bracket,
                                               named(n[2], true).cobracket, named(n[3], true).cobracket, order);
    for (const auto& it : fp.lie) r.checks.push_back(jacobi_report(it.label, it.defect, d.basis, d.params));
    for (const auto& it : fp.colie) r.checks.push_back(cojacobi_report(it.label, it.defect, d.basis, d.params));
    for (const auto& it : fp.cocycle) r.checks.push_back(pair_item(it.label, it.defect, d.basis, d.params));
  }
  return r;
}

// ------------------------------------------------------------------ family

struct FamilyResult {
  Report report;
  std::optional<Document> document;
};

FamilyResult cmd_family(const Document& d, const std::vector<std::string>& comps, const std::vector<std::string>& pnames) {
  FamilyResult out;
  Report& r = out.report;
  if (comps.size() != 4) throw ParseError("--compositions takes four names");
  if (pnames.size() != 4) throw ParseError("--names takes four parameter names");
  const auto& mu100 = d.composition(comps[0]);
  const auto& mu001 = d.composition(comps[1]);
  const auto& de010 = d.composition(comps[2]);
  const auto& de001 = d.composition(comps[3]);
  if (mu100.is_cobracket || mu001.is_cobracket || !de010.is_cobracket || !de001.is_cobracket)
    throw ParseError("family needs two bracket and two cobracket compositions");
  const int order = d.tr.order;
  DeformationFamily fam;
  try {
    fam = build_family(mu100.bracket, mu001.bracket, de010.cobracket, de001.cobracket, d.params, pnames[0], pnames[1],
                       pnames[2], pnames[3]);
  } catch (const HypothesisFailure& e) {
    r.notes.push_back(std::string("refused: ") + e.what());
    for (const auto& it : e.report().lie) r.checks.push_back(jacobi_report(it.label, it.defect, d.basis, d.params));
    for (const auto& it : e.report().colie) r.checks.push_back(cojacobi_report(it.label, it.defect, d.basis, d.params));
    for (const auto& it : e.report().cocycle) r.checks.push_back(pair_item(it.label, it.defect, d.basis, d.params));
    return out;
  }
  const ParamSpace& ps = fam.params;
  const Composition mf{"mu_family", false, fam.mu, {}};
  const Composition df{"delta_family", true, {}, fam.delta};
  r.sections.push_back({"family bracket", product_lines("mu", fam.mu.entries(), d.basis, ps)});
  r.sections.push_back({"family cobracket", coproduct_lines("delta", fam.delta.entries(), d.basis, ps)});

  const SparseTensor<4> total = cocycle_defect(fam.mu, fam.delta, order);
  r.checks.push_back(pair_item("cocycle(mu_family, delta_family)", total, d.basis, ps));
  r.checks.push_back(jacobi_report("jacobi(mu_family)", jacobi_defect(fam.mu, order), d.basis, ps));
  r.checks.push_back(cojacobi_report("cojacobi(delta_family)", cojacobi_defect(fam.delta, order), d.basis, ps));

  // The monomial split: coefficient of each parameter pair equals the pairwise defect.
  const FourPairReport fp = check_four_pairs(mu100.bracket, mu001.bracket, de010.cobracket, de001.cobracket, order);
  const std::array<std::pair<int, int>, 4> monos{{{fam.t, fam.h}, {fam.z1, fam.h}, {fam.t, fam.z2}, {fam.z1, fam.z2}}};
  SparseTensor<4> split = total;
  for (std::size_t k = 0; k < 4; ++k) {
    const Monomial m = Monomial::of(monos[k].first) * Monomial::of(monos[k].second);
    SparseTensor<4> scaled;
    for (const auto& [key, v] : fp.cocycle[k].defect.entries()) scaled.add(key, v.times_monomial(m));
    split = split - scaled;
  }
  r.checks.push_back(pair_item("split(cocycle(mu_family, delta_family))", split, d.basis, ps));

  Document doc = d;
  doc.params = ps;
  doc.presentation.reset();
  doc.compositions = {mu100, mu001, de010, de001, mf, df};
  doc.notes.push_back("mu_family = " + pnames[0] + "*" + comps[1] + " + " + pnames[1] + "*" + comps[0] +
                      ", delta_family = " + pnames[2] + "*" + comps[3] + " + " + pnames[3] + "*" + comps[2]);
  out.document = std::move(doc);
  return out;
}

// ------------------------------------------------------------------ hopf

Report cmd_hopf(const Document& d, const std::vector<std::string>& requested) {
  if (!d.presentation) throw ParseError("document has no presentation block");
  static const std::vector<std::string> all{"jacobi", "hom", "coassoc", "counit", "antipode", "class-f"};
  std::set<std::string> want;
  for (const auto& c : requested)
    for (const auto& x : split_list(c)) {
      if (x == "all") {
        want.insert(all.begin(), all.end());
      } else if (std::find(all.begin(), all.end(), x) != all.end()) {
        want.insert(x);
      } else {
        throw ParseError("unknown check '" + x + "' (jacobi, hom, coassoc, counit, antipode, class-f, all)");
      }
    }
  if (want.empty()) want.insert(all.begin(), all.end());

  Report r;
  HopfEngine e(*d.presentation);
  const Basis& b = d.basis;
  const ParamSpace& ps = d.presentation->params();
  if (want.count("jacobi")) r.checks.push_back(presentation_jacobi_report(e));
  if (want.count("hom")) r.checks.push_back(coproduct_hom_report(e));
  if (want.count("coassoc")) r.checks.push_back(coassociativity_report(e));
  if (want.count("counit")) r.checks.push_back(counit_report(e));
  if (want.count("antipode") || want.count("class-f")) {
    AntipodeResult a = solve_antipode(e, e.order());
    if (want.count("antipode")) {
      Section s{"antipode", {}};
      for (int g = 0; g < b.size(); ++g)
        s.lines.push_back("S(" + b.name(g) + ") = " + a.antipode[static_cast<std::size_t>(g)].str(b, ps));
      r.sections.push_back(std::move(s));
      r.checks.push_back(a.report);
      if (d.presentation->antipode) {
        DefectReport cmp;
        cmp.check = "antipode vs document";
        cmp.items = static_cast<std::size_t>(b.size());
        for (int g = 0; g < b.size(); ++g) {
          const NCPoly diff = e.normalizer().normalize((*d.presentation->antipode)[static_cast<std::size_t>(g)]) -
                              a.antipode[static_cast<std::size_t>(g)];
          if (!diff.is_zero()) cmp.defects.push_back(describe(diff, b, ps, "generator " + b.name(g), {"S"}));
        }
        r.checks.push_back(std::move(cmp));
      }
    }
    if (want.count("class-f")) r.checks.push_back(class_f_check(e, a.antipode, e.order()));
  }
  return r;
}

// ------------------------------------------------------------------ specialize

std::vector<std::string> presentation_lines(const HopfPresentation& h, std::vector<std::string>& coproducts) {
  const Basis& b = h.basis();
  const ParamSpace& ps = h.params();
  std::vector<std::string> rel;
  for (int j = 0; j < b.size(); ++j)
    for (int i = 0; i < j; ++i) {
      if (h.relations.rhs(j, i).is_zero()) continue;
      const RelationSpec w = h.relations.written(j, i);
      rel.push_back("[" + b.name(w.left) + "," + b.name(w.right) + "] = " + w.rhs.str(b, ps));
    }
  for (int g = 0; g < b.size(); ++g) {
    const Tensor2 prim = Tensor2::term({Word::of(g), Word{}}) + Tensor2::term({Word{}, Word::of(g)});
    const Tensor2& c = h.coproduct[static_cast<std::size_t>(g)];
    if (c != prim) coproducts.push_back("Delta " + b.name(g) + " = " + c.str(b, ps));
  }
  return rel;
}

struct SpecializeResult {
  Report report;
  Document document;
};

SpecializeResult cmd_specialize(const Document& d, const std::vector<std::string>& sets) {
  if (sets.empty()) throw ParseError("specialize needs at least one --set assignment");
  ParamSpace ps = d.params;
  const Substitution s = parse_assignments(sets, ps, d.tr);
  SpecializeResult out{{}, d};
  Document& doc = out.document;
  doc.params = ps;
  for (auto& c : doc.compositions) {
    if (c.is_cobracket)
      c.cobracket = substitute_params(c.cobracket, s, d.tr.order);
    else
      c.bracket = substitute_params(c.bracket, s, d.tr.order);
  }
  doc.notes.push_back("specialized: " + join(sets, ", "));
  if (d.presentation) {
    doc.presentation = specialize(*d.presentation, s, ps);
    std::vector<std::string> cop;
    out.report.sections.push_back({"nonzero relations", presentation_lines(*doc.presentation, cop)});
    out.report.sections.push_back({"non-primitive coproducts", cop});
  }
  return out;
}

// ------------------------------------------------------------------ expand

Report cmd_expand(const Document& d, const std::vector<std::string>& at, const std::string& up_to,
                  const std::string& roles) {
  if (!d.presentation) throw ParseError("document has no presentation block");
  HopfPresentation h = *d.presentation;
  if (!at.empty()) {
    ParamSpace ps = d.params;
    const Substitution s = parse_assignments(at, ps, d.tr);
    h = specialize(h, s, ps);
  }
  const auto bound = split_list(up_to);
  if (bound.size() != 3) throw ParseError("--up-to takes three exponents i,j,k");
  MultiIndex m{};
  for (int k = 0; k < 3; ++k) {
    try {
      m[k] = std::stoi(bound[static_cast<std::size_t>(k)]);
    } catch (const std::exception&) {
      throw ParseError("--up-to takes three exponents i,j,k");
    }
    if (m[k] < 0) throw ParseError("--up-to exponents must be nonnegative");
  }
  const auto role = split_list(roles);
  if (role.size() != 3) throw ParseError("--roles takes three parameter names");
  const CoefficientTable tbl = extract_coefficients(h, m, {role[0], role[1], role[2]});
  const ParamSpace& ps = tbl.params;
  const Basis& b = tbl.basis;

  Report r;
  for (const auto& [idx, t] : tbl.mu) r.sections.push_back({"mu_" + index_str(idx), product_lines("mu_" + index_str(idx), t.entries(), b, ps)});
  for (const auto& [idx, t] : tbl.ms) r.sections.push_back({"ms_" + index_str(idx), product_lines("ms_" + index_str(idx), t, b, ps)});
  for (const auto& [idx, t] : tbl.delta)
    r.sections.push_back({"delta_" + index_str(idx), coproduct_lines("delta_" + index_str(idx), t.entries(), b, ps)});
  for (const auto& [idx, t] : tbl.ds) r.sections.push_back({"ds_" + index_str(idx), coproduct_lines("ds_" + index_str(idx), t, b, ps)});

  if (tbl.covers({1, 1, 1})) {
    r.checks.push_back(identity_report("first order identity", verify_order2(tbl), b, ps));
    r.checks.push_back(identity_report("thz identity", {verify_order3_thz(tbl)}, b, ps));
  } else {
    r.notes.push_back("identities skipped: they need coefficients up to 1,1,1");
  }
  return r;
}

// ------------------------------------------------------------------ tangent

Report cmd_tangent(const Document& d, std::string direction, std::vector<std::string> at, const std::string& expect,
                   std::string mode) {
  if (!d.presentation) throw ParseError("document has no presentation block");
  std::optional<ExpectationFile> fx;
  if (!expect.empty()) {
    fx = parse_expectation(load_json(read_source(expect)), d.basis);
    if (direction.empty()) direction = fx->direction;
    if (at.empty()) at = fx->at;
    if (mode.empty()) mode = fx->mode == CompareMode::Exact ? "exact" : "leading";
  }
  if (direction.empty()) throw ParseError("tangent needs --direction (or an expectation naming one)");
  if (mode.empty()) mode = "leading";

  Report r;
  const TangentField f = tangent_field(*d.presentation, direction, at);
  Section s{"field d/d" + direction + " at " + direction + "=0" + (at.empty() ? "" : ", " + join(at, ", ")), {}};
  std::stringstream ss(field_str(f));
  for (std::string line; std::getline(ss, line);) s.lines.push_back(line);
  r.sections.push_back(std::move(s));
  if (fx) {
    const FieldDiff diff = compare_field(f, fx->expectation, mode == "exact" ? CompareMode::Exact : CompareMode::Leading);
    DefectReport c;
    c.check = "tangent " + (fx->name.empty() ? expect : fx->name) + " (" + mode + ")";
    c.items = diff.compared;
    auto add = [&](const std::vector<std::string>& v, const std::string& kind) {
      for (const auto& msg : v) {
        DefectEntry e;
        const auto colon = msg.find(": ");
        const auto eq = msg.find(" = ");
        const auto cut = std::min(colon, eq);
        e.location = kind + " " + msg.substr(0, cut);
        e.value = cut == std::string::npos ? msg : msg.substr(cut + 2);
        c.defects.push_back(std::move(e));
      }
    };
    add(diff.missing, "missing");
    add(diff.mismatched, "mismatched");
    add(diff.extra, "extra");
    r.checks.push_back(std::move(c));
  }
  return r;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact verification of Lie bialgebras, their deformation families and Hopf presentations", "bforge"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  int order = 5, cap = 10, slack = 2;
  std::string format = "text", output;
  auto* o_order = app.add_option("--order", order, "Truncation order in the parameters (default 5)")
                      ->check(CLI::NonNegativeNumber);
  auto* o_cap = app.add_option("--cap", cap, "Generator-degree cap (default 10)")->check(CLI::Range(1, kMaxWordLength));
  auto* o_slack = app.add_option("--slack", slack, "Extra order carried through divisions (default 2)")
                      ->check(CLI::NonNegativeNumber);
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--output", output, "Write the report (or emitted document) to PATH");

  std::string file, which, up_to = "1,1,2", roles = "t,h,z", direction, expect, mode;
  std::vector<std::string> names, checks, sets, at;
  std::vector<std::string> comps{"mu_100", "mu_001", "delta_010", "delta_001"};
  std::string pnames = "z1,t,z2,h";

  auto* check = app.add_subcommand("check", "Lie, co-Lie, bialgebra and four-pair checks of compositions");
  check->add_option("file", file, "Document path or @dataset")->required();
  check->add_option("which", which)->required()->check(CLI::IsMember({"lie", "colie", "bialgebra", "four-pairs"}));
  check->add_option("names", names, "Composition names");

  auto* family = app.add_subcommand("family", "Build and verify the two-parameter deformation family");
  family->add_option("file", file)->required();
  family->add_option("--compositions", comps, "mu_100 mu_001 delta_010 delta_001 names")->expected(4)->delimiter(',');
  family->add_option("--names", pnames, "Parameter names z1,t,z2,h");

  auto* hopf = app.add_subcommand("hopf", "Hopf axioms of a presentation");
  hopf->add_option("file", file)->required();
  hopf->add_option("--checks", checks, "jacobi|hom|coassoc|counit|antipode|class-f|all")->delimiter(',');

  auto* spec = app.add_subcommand("specialize", "Substitute parameters and emit the presentation");
  spec->add_option("file", file)->required();
  spec->add_option("--set", sets, "Assignment p=value")->required()->delimiter(',');

  auto* expand = app.add_subcommand("expand", "Coefficient tables and the low-order deformation identities");
  expand->add_option("file", file)->required();
  expand->add_option("--up-to", up_to, "Exponent bound i,j,k for t^i h^j z^k");
  expand->add_option("--at", at, "Assignment applied first, e.g. z1=z")->delimiter(',');
  expand->add_option("--roles", roles, "Parameters playing t,h,z");

  auto* tangent = app.add_subcommand("tangent", "First-order tangent field along a parameter");
  tangent->add_option("file", file)->required();
  tangent->add_option("--direction", direction, "Parameter to differentiate in");
  tangent->add_option("--at", at, "Base point assignment")->delimiter(',');
  tangent->add_option("--expect", expect, "Expectation fixture to compare against");
  tangent->add_option("--mode", mode, "leading|exact")->check(CLI::IsMember({"leading", "exact"}));

  for (auto* sub : {check, family, hopf, spec, expand, tangent}) sub->fallthrough();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitPass;
    }
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    SettingsOverride so;
    if (o_order->count()) so.order = order;
    if (o_cap->count()) so.cap = cap;
    if (o_slack->count()) so.slack = slack;
    const Document d = load_document(file, so);
    const std::string echo = join(args, " ");

    auto finish = [&](Report r, const Document& doc) {
      r.command = echo;
      r.settings = doc.tr;
      r.notes.insert(r.notes.begin(), doc.notes.begin(), doc.notes.end());
      return r;
    };

    if (*check || *hopf || *expand || *tangent) {
      Report r;
      if (*check) r = cmd_check(d, which, names);
      if (*hopf) r = cmd_hopf(d, checks);
      if (*expand) r = cmd_expand(d, at, up_to, roles);
      if (*tangent) r = cmd_tangent(d, direction, at, expect, mode);
      r = finish(std::move(r), d);
      write_text(render(r, format), output, out);
      return r.passed() ? kExitPass : kExitDefect;
    }
    if (*family) {
      FamilyResult fr = cmd_family(d, comps, split_list(pnames));
      Report r = finish(std::move(fr.report), d);
      if (fr.document && !output.empty()) {
        write_text(dump(emit_document(*fr.document)), output, out);
        out << render(r, format);
      } else if (fr.document) {
        out << dump(emit_document(*fr.document));
        err << render_text(r);
      } else {
        out << render(r, format);
      }
      return fr.document && r.passed() ? kExitPass : kExitDefect;
    }
    SpecializeResult sr = cmd_specialize(d, sets);
    Report r = finish(std::move(sr.report), sr.document);
    if (!output.empty()) {
      write_text(dump(emit_document(sr.document)), output, out);
      out << render(r, format);
    } else {
      out << dump(emit_document(sr.document));
    }
    return kExitPass;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace bforge
