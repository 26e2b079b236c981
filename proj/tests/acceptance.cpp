// One line per acceptance criterion. Every comparison is exact; runtime limits
// are wall-clock seconds measured around the computation they name.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "bforge/expansion.hpp"
#include "bforge/hopf.hpp"
#include "support.hpp"

using namespace bforge;
using testing::paper;

namespace {

constexpr double kFourPairSeconds = 1.0;
constexpr double kFamilySeconds = 1.0;
constexpr double kHopfSeconds = 60.0;

struct Outcome {
  bool ok = true;
  std::vector<std::string> notes;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back(what);
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3fs", s);
  return buf;
}

const Basis& B() { return paper().basis; }
const HopfPresentation& H() { return *paper().presentation; }

// ---------------------------------------------------------------- 1

Outcome four_pairs() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto& mu100 = paper().composition("mu_100").bracket;
  const auto& mu001 = paper().composition("mu_001").bracket;
  const auto& d010 = paper().composition("delta_010").cobracket;
  const auto& d001 = paper().composition("delta_001").cobracket;
  const FourPairReport r = check_four_pairs(mu100, mu001, d010, d001);
  const double dt = seconds_since(t0);
  for (const auto* items : {&r.lie, &r.colie, &r.cocycle})
    for (const auto& it : *items) o.require(it.ok(), it.label + " nonzero");
  o.require(r.cocycle.size() == 4, "expected four cocycle pairs");
  // brute-force index sums
  o.require(testing::dense_jacobi_zero(mu100) && testing::dense_jacobi_zero(mu001) &&
                testing::dense_jacobi_zero(mu100 + mu001),
            "dense jacobi oracle nonzero");
  for (const auto* m : {&mu100, &mu001})
    for (const auto* d : {&d010, &d001})
      o.require(testing::dense_cocycle_zero(*m, *d), "dense cocycle oracle nonzero");
  o.require(dt < kFourPairSeconds, "runtime " + fmt_seconds(dt));
  o.notes.push_back("runtime " + fmt_seconds(dt));
  return o;
}

// ---------------------------------------------------------------- 2

Outcome family() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto& mu100 = paper().composition("mu_100").bracket;
  const auto& mu001 = paper().composition("mu_001").bracket;
  const auto& d010 = paper().composition("delta_010").cobracket;
  const auto& d001 = paper().composition("delta_001").cobracket;
  const DeformationFamily fam = build_family(mu100, mu001, d010, d001, paper().params);
  const SparseTensor<4> total = cocycle_defect(fam.mu, fam.delta);
  o.require(total.is_zero(), "family cocycle defect nonzero");
  o.require(testing::dense_cocycle_zero(fam.mu, fam.delta), "dense oracle on the family nonzero");

  // each parameter pair carries exactly the matching pairwise defect
  const std::vector<std::tuple<Monomial, const BracketTensor*, const CobracketTensor*>> parts = {
      {Monomial::of(fam.t) * Monomial::of(fam.h), &mu100, &d010},
      {Monomial::of(fam.z1) * Monomial::of(fam.h), &mu001, &d010},
      {Monomial::of(fam.t) * Monomial::of(fam.z2), &mu100, &d001},
      {Monomial::of(fam.z1) * Monomial::of(fam.z2), &mu001, &d001},
  };
  SparseTensor<4> rebuilt;
  for (const auto& [mono, m, d] : parts) {
    const SparseTensor<4> piece = coefficient_tensor(total, mono, fam.params.size());
    o.require(piece == cocycle_defect(*m, *d), "monomial piece differs from its pairwise defect");
    for (const auto& [k, v] : piece.entries()) rebuilt.add(k, v.times_monomial(mono));
  }
  o.require(rebuilt == total, "the four pieces do not rebuild the family defect");
  const double dt = seconds_since(t0);
  o.require(dt < kFamilySeconds, "runtime " + fmt_seconds(dt));
  o.notes.push_back("runtime " + fmt_seconds(dt));
  return o;
}

// ---------------------------------------------------------------- 3

void require_report(Outcome& o, const DefectReport& r, std::size_t items) {
  o.require(r.passed(), r.check + ": " + std::to_string(r.defects.size()) + " defect(s)");
  for (const auto& d : r.defects) o.notes.push_back("  " + d.location + " degree " + std::to_string(d.lowest_degree));
  if (items) o.require(r.items == items, r.check + " examined " + std::to_string(r.items));
}

Outcome hopf() {
  Outcome o;
  o.require(H().truncation().order == 5 && H().truncation().cap == 10, "dataset settings are not N=5, G=10");
  const auto t0 = std::chrono::steady_clock::now();
  const HopfEngine e(H());
  require_report(o, presentation_jacobi_report(e), 0);
  require_report(o, coproduct_hom_report(e), 15);
  require_report(o, coassociativity_report(e), 6);
  require_report(o, counit_report(e), 0);
  const AntipodeResult s = solve_antipode(e, 5);
  o.require(s.converged, "antipode did not converge");
  require_report(o, s.report, 0);
  require_report(o, class_f_check(e, s.antipode, 5), 0);
  const double dt = seconds_since(t0);
  o.require(dt < kHopfSeconds, "runtime " + fmt_seconds(dt));
  o.notes.push_back("runtime " + fmt_seconds(dt));
  return o;
}

// ---------------------------------------------------------------- 4

struct Boundary {
  std::string name;
  std::vector<std::string> assignments;
  std::map<std::string, std::string> relations;  // every nonzero relation, as written
  std::map<std::string, std::string> coproducts;  // generators not listed are primitive
};

void check_boundary(Outcome& o, const Boundary& b) {
  ParamSpace ps = H().params();
  const Substitution s = parse_assignments(b.assignments, ps, H().truncation());
  const HopfPresentation sp = specialize(H(), s, ps);
  const int n = B().size();
  std::map<std::string, NCPoly> got;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i)
      if (!sp.relations.rhs(j, i).is_zero()) got[sp.relations.label(j, i)] = sp.relations.written(j, i).rhs;
  for (const auto& [label, text] : b.relations) {
    const auto it = got.find(label);
    if (it == got.end()) {
      o.require(false, b.name + ": " + label + " missing");
      continue;
    }
    o.require(it->second == testing::poly(text, B(), ps, H().truncation()), b.name + ": " + label + " differs");
  }
  for (const auto& [label, p] : got)
    o.require(b.relations.count(label) == 1, b.name + ": unexpected " + label + " = " + p.str(B(), ps));
  for (int gen = 0; gen < n; ++gen) {
    const std::string name = B().name(gen);
    const auto it = b.coproducts.find(name);
    const Tensor2 want = it != b.coproducts.end()
                             ? testing::tensor(it->second, B(), ps, H().truncation())
                             : Tensor2::term({Word::of(gen), Word{}}) + Tensor2::term({Word{}, Word::of(gen)});
    o.require(sp.coproduct[gen] == want, b.name + ": Delta " + name + " differs");
  }
}

Outcome boundaries() {
  Outcome o;
  const std::string dpy = "exp(-(z/2)*p_x) (x) p_y + p_y (x) exp((z/2)*p_x)";
  const std::string dpz = "exp(-(z/2)*p_x) (x) p_z + p_z (x) exp((z/2)*p_x)";
  const std::vector<Boundary> cases = {
      {"z1=z2=0",
       {"z1=0", "z2=0"},
       {{"[l_z,l_x]", "t*l_z"},
        {"[p_y,l_x]", "-t*p_y - i*h^3*t^2*l_z"},
        {"[l_y,l_x]", "t*l_y"},
        {"[p_z,l_x]", "-t*p_z + i*h^2*t*l_y"}},
       {{"l_x", "l_x (x) 1 + 1 (x) l_x - i*h*l_y (x) l_z"}}},
      {"t=h=0 diagonal", {"t=0", "h=0", "z1=z", "z2=z"}, {{"[p_z,p_x]", "i*z*p_y"}}, {{"p_y", dpy}, {"p_z", dpz}}},
      {"t=0 diagonal",
       {"t=0", "z1=z", "z2=z"},
       {{"[p_z,p_x]", "i*z*p_y"}},
       {{"p_y", dpy},
        {"p_z", dpz},
        {"l_x", "l_x (x) cosh(z*h*l_z) + 1 (x) l_x - i*(1/z)*l_y (x) sinh(z*h*l_z)"},
        {"l_y", "l_y (x) cosh(z*h*l_z) + 1 (x) l_y + i*z*l_x (x) sinh(z*h*l_z)"}}},
      {"h=0 diagonal",
       {"h=0", "z1=z", "z2=z"},
       {{"[p_z,p_x]", "i*z*p_y"},
        {"[l_z,l_x]", "t*l_z"},
        {"[p_y,l_x]", "-t*p_y"},
        {"[l_y,l_x]", "t*l_y"},
        {"[p_z,l_x]", "-t*p_z"}},
       {{"p_y", dpy}, {"p_z", dpz}}},
  };
  for (const auto& c : cases) check_boundary(o, c);
  return o;
}

// ---------------------------------------------------------------- 5

FieldExpectation expectation(const std::string& file) {
  return parse_expectation(load_json(read_source(testing::fixture(file))), B()).expectation;
}

Outcome tangent() {
  Outcome o;
  const TangentField v = tangent_field(H(), "h", {"z1=z", "z2=z"});
  const TangentField w = tangent_field(H(), "t", {"z1=z", "z2=z"});
  const TangentField v0 = tangent_field(H(), "h", {"z1=0", "z2=0"});
  const TangentField w0 = tangent_field(H(), "t", {"z1=0", "z2=0"});
  auto compare = [&](const char* label, const TangentField& f, const char* file, CompareMode mode) {
    const FieldDiff d = compare_field(f, expectation(file), mode);
    o.require(d.ok(), std::string(label) + ": " + std::to_string(d.missing.size()) + " missing, " +
                          std::to_string(d.extra.size()) + " extra, " + std::to_string(d.mismatched.size()) +
                          " mismatched");
    o.require(d.compared > 0, std::string(label) + ": nothing compared");
  };
  compare("V leading", v, "v-deformed.json", CompareMode::Leading);
  compare("W leading", w, "w-deformed.json", CompareMode::Leading);
  compare("V at z=0", v0, "v-classical.json", CompareMode::Exact);
  compare("W at z=0", w0, "w-classical.json", CompareMode::Exact);
  o.require(w.delta.empty() && w0.delta.empty(), "the t-direction field has delta components");

  // setting z = 0 in the deformed fields gives the classical ones
  auto limit = [](const TangentField& f, const TangentField& f0) {
    Substitution s;
    s.set(f.params.index("z"), ParamPoly{});
    std::map<std::pair<int, int>, NCPoly> mu;
    for (const auto& [k, p] : f.mu)
      if (NCPoly q = substitute_params(p, s, kNoTruncation); !q.is_zero()) mu.emplace(k, q);
    std::map<int, Tensor2> delta;
    for (const auto& [k, p] : f.delta)
      if (Tensor2 q = substitute_params(p, s, kNoTruncation); !q.is_zero()) delta.emplace(k, q);
    return mu == f0.mu && delta == f0.delta;
  };
  o.require(limit(v, v0), "z -> 0 limit of V differs from the classical field");
  o.require(limit(w, w0), "z -> 0 limit of W differs from the classical field");
  return o;
}

// ---------------------------------------------------------------- 6

std::string first_difference(const SparseTensor<3>& got, const SparseTensor<3>& want) {
  for (const auto& [k, v] : got.entries())
    if (want.at(k) != v)
      return "(" + B().name(k[0]) + ";" + B().name(k[1]) + "," + B().name(k[2]) + ") extracted " + v.str(paper().params) +
             ", expected " + want.at(k).str(paper().params);
  for (const auto& [k, v] : want.entries())
    if (got.at(k) != v)
      return "(" + B().name(k[0]) + ";" + B().name(k[1]) + "," + B().name(k[2]) + ") extracted " +
             got.at(k).str(paper().params) + ", expected " + v.str(paper().params);
  return "";
}

Outcome identities() {
  Outcome o;
  ParamSpace ps = H().params();
  const Substitution s = parse_assignments({"z1=z", "z2=z"}, ps, H().truncation());
  const HopfPresentation diag = specialize(H(), s, ps);
  const CoefficientTable t = extract_coefficients(diag, {1, 1, 1});
  for (const auto& c : verify_order2(t)) o.require(c.ok(), "component " + c.label + " nonzero");
  o.require(verify_order3_thz(t).ok(), "thz identity nonzero");

  const BracketTensor mu001 = t.mu_at({0, 0, 1});
  o.require(mu001 == paper().composition("mu_001").bracket, "extracted mu_001 differs from the dataset");
  const CobracketTensor d001 = t.delta_at({0, 0, 1});
  const auto& want = paper().composition("delta_001").cobracket;
  if (d001 != want) o.require(false, "extracted delta_001 differs: " + first_difference(d001.entries(), want.entries()));
  return o;
}

// ---------------------------------------------------------------- 7

Outcome properties(const char* binary) {
  Outcome o;
  if (!binary) {
    o.require(false, "property_tests binary not given");
    return o;
  }
  const std::string cmd = std::string("\"") + binary + "\" --minimal > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  o.require(rc == 0, "property_tests exited with " + std::to_string(rc));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"four-pair hypothesis on the reference compositions", four_pairs},
      {"family cocycle vanishes and splits into the four pairs", family},
      {"hopf verification at N=5, G=10", hopf},
      {"boundary specializations", boundaries},
      {"tangent fields", tangent},
      {"deformation identities and extracted first-order data", identities},
      {"property suites", [&] { return properties(argc > 1 ? argv[1] : nullptr); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::cout << "criterion " << i + 1 << ": " << (o.ok ? "PASS" : "FAIL") << "  " << criteria[i].first << "\n";
    for (const auto& n : o.notes) std::cout << "    " << n << "\n";
    failed += o.ok ? 0 : 1;
  }
  std::cout << (failed ? std::to_string(failed) + " criterion(s) failed" : std::string("all criteria passed")) << "\n";
  return failed ? 1 : 0;
}
