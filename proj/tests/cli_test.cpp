#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "support.hpp"

using namespace bforge;
using testing::cli;
using testing::fixture;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("bforge-test-" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("documents re-emit as a fixed point") {
  for (const std::string ref : {std::string("@paper-corrected"), fixture("abelian.json"), fixture("corrupted.json"),
                                fixture("sign-flipped.json")}) {
    CAPTURE(ref);
    const Document d = load_document(ref);
    const std::string once = dump(emit_document(d));
    const Document again = parse_document(load_json(once));
    CHECK(dump(emit_document(again)) == once);
    CHECK(again.basis == d.basis);
    CHECK(again.params == d.params);
    CHECK(again.compositions.size() == d.compositions.size());
    for (std::size_t i = 0; i < d.compositions.size(); ++i) {
      CHECK(again.compositions[i].bracket == d.compositions[i].bracket);
      CHECK(again.compositions[i].cobracket == d.compositions[i].cobracket);
    }
    REQUIRE(again.presentation.has_value() == d.presentation.has_value());
    if (d.presentation) {
      CHECK(again.presentation->relations.oriented_rhs() == d.presentation->relations.oriented_rhs());
      CHECK(again.presentation->coproduct == d.presentation->coproduct);
      CHECK(again.presentation->counit == d.presentation->counit);
    }
  }
}

TEST_CASE("input validation") {
  SUBCASE("the verbatim transcription is rejected for its duplicate key") {
    CHECK_THROWS_WITH_AS(load_document("@paper-verbatim"), doctest::Contains("duplicate relation"), Error);
    const auto r = cli({"hopf", "@paper-verbatim"});
    CHECK(r.code == kExitInputError);
    CHECK(contains(r.err, "[p_y,l_x]"));
  }
  SUBCASE("embedded datasets") {
    const auto names = embedded_datasets();
    CHECK(std::find(names.begin(), names.end(), "paper-corrected") != names.end());
    CHECK_THROWS_AS(read_source("@nope"), Error);
  }
  SUBCASE("malformed documents") {
    Json doc = load_json(read_source(fixture("abelian.json")));
    Json bad = doc;
    bad["schema"] = "other/2";
    CHECK_THROWS_AS(parse_document(bad), Error);
    bad = doc;
    bad["generators"].push_back("t");
    CHECK_THROWS_AS(parse_document(bad), Error);
    bad = doc;
    bad["presentation"]["brackets"] = Json::array({Json{{"left", "a"}, {"right", "zz"}, {"rhs", "0"}}});
    CHECK_THROWS_AS(parse_document(bad), Error);
    CHECK_THROWS_AS(load_json("{ not json"), Error);
  }
  SUBCASE("settings overrides") {
    const Json doc = load_json(read_source("@paper-corrected"));
    const Truncation tr = resolve_settings(doc, SettingsOverride{7, 12, {}});
    CHECK(tr.order == 7);
    CHECK(tr.cap == 12);
    CHECK(tr.slack == 2);
  }
}

TEST_CASE("check command") {
  auto r = cli({"check", "@paper-corrected", "four-pairs"});
  CHECK(r.code == kExitPass);
  CHECK(contains(r.out, "result: pass"));

  r = cli({"check", fixture("abelian.json"), "lie"});
  CHECK(r.code == kExitPass);

  r = cli({"check", fixture("corrupted.json"), "bialgebra", "mu_001", "delta_001"});
  CHECK(r.code == kExitDefect);
  CHECK(contains(r.out, "[FAIL] cocycle(mu_001, delta_001)"));
  CHECK(contains(r.out, "pair [p_x,p_z]"));

  r = cli({"check", "@paper-corrected", "lie", "mu_999"});
  CHECK(r.code == kExitInputError);
  r = cli({"check", "/nonexistent/file.json", "lie"});
  CHECK(r.code == kExitInputError);
  r = cli({"check", "@paper-corrected", "sideways"});
  CHECK(r.code == kExitInputError);
  r = cli({"--order", "-1", "check", "@paper-corrected", "lie"});
  CHECK(r.code == kExitInputError);
}

TEST_CASE("family command") {
  const std::string out = temp_path("family.json");
  auto r = cli({"--output", out, "family", "@paper-corrected"});
  CHECK(r.code == kExitPass);
  CHECK(contains(r.out, "mu(p_z,p_x) = i*z1*p_y"));
  const Document fam = load_document(out);
  const Composition& mu = fam.composition("mu_family");
  const Composition& dl = fam.composition("delta_family");
  const int z1 = fam.params.index("z1"), h = fam.params.index("h");
  const Basis& b = fam.basis;
  CHECK(mu.bracket.at(b.index("p_z"), b.index("p_x"), b.index("p_y")) == ParamPoly::param(z1).scaled(Scalar(0, 1)));
  CHECK(dl.cobracket.at(b.index("l_x"), b.index("l_z"), b.index("l_y")) == ParamPoly::param(h).scaled(Scalar(0, 1)));
  CHECK(cocycle_defect(mu.bracket, dl.cobracket).is_zero());
  std::filesystem::remove(out);

  r = cli({"family", "@paper-corrected"});
  CHECK(r.code == kExitPass);
  CHECK(load_json(r.out)["schema"] == kSchema);
  CHECK(contains(r.err, "result: pass"));

  r = cli({"family", fixture("corrupted.json")});
  CHECK(r.code == kExitDefect);
  CHECK(contains(r.out, "refused"));
}

TEST_CASE("hopf command") {
  auto r = cli({"hopf", fixture("abelian.json")});
  CHECK(r.code == kExitPass);
  r = cli({"hopf", fixture("sign-flipped.json"), "--checks", "hom"});
  CHECK(r.code == kExitDefect);
  CHECK(contains(r.out, "pair [p_z,p_x]"));
  r = cli({"hopf", fixture("corrupted.json")});
  CHECK(r.code == kExitInputError);
  r = cli({"hopf", "@paper-corrected", "--checks", "bogus"});
  CHECK(r.code == kExitInputError);
}

TEST_CASE("specialize command") {
  const std::string out = temp_path("spec.json");
  auto r = cli({"--output", out, "specialize", "@paper-corrected", "--set", "z1=0,z2=0"});
  CHECK(r.code == kExitPass);
  CHECK(contains(r.out, "[p_y,l_x] = -t*p_y - i*t^2*h^3*l_z"));
  const Document d = load_document(out);
  const auto& rel = d.presentation->relations;
  const Basis& b = d.basis;
  CHECK(rel.bracket(b.index("l_z"), b.index("l_x")) ==
        testing::poly("t*l_z", b, d.params));
  std::filesystem::remove(out);

  r = cli({"specialize", "@paper-corrected", "--set", "t=1"});
  CHECK(r.code == kExitInputError);
  r = cli({"specialize", "@paper-corrected", "--set", "t=t"});
  CHECK(r.code == kExitPass);
  const Document same = parse_document(load_json(r.out));
  CHECK(same.presentation->relations.oriented_rhs() == testing::paper().presentation->relations.oriented_rhs());
}

TEST_CASE("expand and tangent commands") {
  auto r = cli({"expand", "@paper-corrected", "--at", "z1=z,z2=z"});
  CHECK(r.code == kExitPass);
  CHECK(contains(r.out, "mu_001(p_z,p_x) = i*p_y"));
  CHECK(contains(r.out, "[pass] thz identity"));
  r = cli({"expand", fixture("abelian.json")});
  CHECK(r.code == kExitPass);
  r = cli({"expand", "@paper-corrected", "--up-to", "1,1"});
  CHECK(r.code == kExitInputError);

  for (const char* f : {"v-deformed.json", "v-classical.json", "w-deformed.json", "w-classical.json"}) {
    CAPTURE(f);
    r = cli({"tangent", "@paper-corrected", "--expect", fixture(f)});
    CHECK(r.code == kExitPass);
  }
  r = cli({"tangent", "@paper-corrected", "--direction", "h", "--at", "z1=0,z2=0", "--expect",
           fixture("w-classical.json")});
  CHECK(r.code == kExitDefect);
  r = cli({"tangent", "@paper-corrected"});
  CHECK(r.code == kExitInputError);
}

TEST_CASE("reports are deterministic and machine readable") {
  const std::vector<std::vector<std::string>> runs = {
      {"check", "@paper-corrected", "four-pairs"},
      {"--format", "json", "hopf", fixture("sign-flipped.json")},
      {"--format", "json", "expand", "@paper-corrected", "--at", "z1=z,z2=z"},
  };
  for (const auto& args : runs) {
    const auto a = cli(args);
    const auto b = cli(args);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
    CHECK(a.err == b.err);
  }
  const auto j = load_json(cli(runs[1]).out);
  CHECK(j["schema"] == kSchema);
  CHECK(j["passed"] == false);
}
