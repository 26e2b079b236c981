#include <doctest.h>

#include "support.hpp"

using namespace bforge;
using testing::paper;
using testing::pp;

namespace {

const Basis& B() { return paper().basis; }
int g(const char* name) { return B().index(name); }

const BracketTensor& mu100() { return paper().composition("mu_100").bracket; }
const BracketTensor& mu001() { return paper().composition("mu_001").bracket; }
const CobracketTensor& d010() { return paper().composition("delta_010").cobracket; }
const CobracketTensor& d001() { return paper().composition("delta_001").cobracket; }

BracketTensor bracket(std::vector<BracketTensor::Relation> rel) { return BracketTensor::from_relations(B(), rel); }
CobracketTensor cobracket(std::vector<CobracketTensor::Relation> rel) {
  return CobracketTensor::from_relations(B(), rel);
}

ParamPoly cojacobi_oracle(const CobracketTensor& d, int l, int a, int b, int c) {
  ParamPoly s;
  for (int m = 0; m < B().size(); ++m) {
    s += d.at(l, m, c) * d.at(m, a, b);
    s += d.at(l, m, a) * d.at(m, b, c);
    s += d.at(l, m, b) * d.at(m, c, a);
  }
  return s;
}

template <std::size_t R>
bool same_tensor(const SparseTensor<R>& a, const SparseTensor<R>& b) {
  return (a - b).is_zero();
}

}  // namespace

TEST_CASE("scalar arithmetic is exact over Q(i)") {
  const Scalar i = Scalar::imaginary_unit();
  CHECK(i * i == Scalar(-1));
  CHECK(Scalar::rational(2, 4) == Scalar(mpq_class(1, 2)));
  CHECK((Scalar(1) / Scalar(3)) * Scalar(3) == Scalar(1));
  const Scalar z(mpq_class(3, 4), mpq_class(-5, 7));
  CHECK(z * z.inverse() == Scalar(1));
  CHECK(z / z == Scalar(1));
  CHECK((z - z).is_zero());
  CHECK_THROWS(Scalar(0).inverse());
  CHECK(Scalar(mpq_class(-3, 4), 0).str() == "-3/4");
  CHECK(i.str() == "i");
  CHECK((-i).str() == "-i");
  for (const Scalar& s : {z, -z, i, Scalar(mpq_class(1, 2), 1), Scalar(0, mpq_class(-3, 4))})
    CHECK(parse_scalar(s.str()) == s);
}

TEST_CASE("parameter polynomials") {
  ParamSpace ps({"t", "h", "z"});
  const ParamPoly t = ParamPoly::param(0), h = ParamPoly::param(1), z = ParamPoly::param(2);

  SUBCASE("ring laws and truncation") {
    const ParamPoly a = t + h * z + ParamPoly(Scalar(0, 1));
    const ParamPoly b = t * t - z + 3;
    CHECK(a * b == b * a);
    CHECK((a * b) * a == a * (b * a));
    CHECK(a * (b + t) == a * b + a * t);
    const ParamPoly c = ParamPoly::mul(a, b, 2);
    CHECK(c.max_degree() <= 2);
    CHECK(c == (a * b).truncated(2));
    CHECK((a - a).is_zero());
    CHECK((a - a).terms().empty());
  }

  SUBCASE("exact division by monomials") {
    const ParamPoly p = t * h * z + t * t * h;
    const Monomial th = Monomial::of(0) * Monomial::of(1);
    CHECK(p.divided(th) == z + t);
    CHECK_THROWS_AS((p + t).divided(th), InexactDivision);
    CHECK(p.divided(Monomial{}) == p);
  }

  SUBCASE("substitution p -> h*t") {
    ParamSpace q({"p", "t", "h"});
    Substitution s;
    s.set(0, ParamPoly::param(2) * ParamPoly::param(1));
    const ParamPoly e = ParamPoly::param(0) * 5;
    CHECK(e.substituted(s, kNoTruncation) == ParamPoly::param(2) * ParamPoly::param(1) * 5);
    CHECK(e.substituted(Substitution{}, kNoTruncation) == e);
  }

  SUBCASE("substitution with a monomial denominator divides exactly") {
    Substitution s;
    s.set(0, h, Monomial::of(2));  // t -> h / z
    CHECK((t * z).substituted(s, kNoTruncation) == h);
    CHECK_THROWS_AS(t.substituted(s, kNoTruncation), InexactDivision);
  }

  SUBCASE("text round trip") {
    const ParamPoly p = t * h - pp("1/6", ps) * z * z + ParamPoly(Scalar(0, 2)) * t + pp("(1/2+3/4*i)", ps);
    CHECK(pp(p.str(ps), ps) == p);
    CHECK(ParamPoly().str(ps) == "0");
  }

  SUBCASE("coefficient extraction") {
    const ParamPoly p = t * h * h + t * 2 + h;
    CHECK(p.coefficient_of(0, 1) == h * h + 2);
    CHECK(p.coefficient_of({0, 1}, {1, 2}) == ParamPoly(1));
  }
}

TEST_CASE("antisymmetry defect") {
  CHECK(antisymmetry_defect(mu100()).is_zero());
  CHECK(antisymmetry_defect(d001()).is_zero());
  CHECK(antisymmetry_defect(BracketTensor(B())).is_zero());

  BracketTensor bad(B());
  bad.add_raw(g("p_z"), g("p_x"), g("p_y"), Scalar(0, 1));
  bad.add_raw(g("p_x"), g("p_z"), g("p_y"), Scalar(0, 1));
  const auto d = antisymmetry_defect(bad);
  CHECK(d.entries().size() == 1);
  CHECK(d.at({g("p_x"), g("p_z"), g("p_y")}) == ParamPoly(Scalar(0, 2)));
}

TEST_CASE("jacobi defect against the brute-force sum") {
  CHECK(jacobi_defect(mu100()).is_zero());
  CHECK(jacobi_defect(mu001()).is_zero());
  CHECK(testing::dense_jacobi_zero(mu100()));

  // adding [p_y,p_z] = p_x keeps a three-dimensional Lie algebra
  const BracketTensor e2 = mu001() + bracket({{g("p_y"), g("p_z"), g("p_x"), 1}});
  CHECK(jacobi_defect(e2).is_zero());
  CHECK(testing::dense_jacobi_zero(e2));

  const BracketTensor broken = mu001() + bracket({{g("p_x"), g("p_y"), g("p_x"), 1}});
  const auto d = jacobi_defect(broken);
  CHECK_FALSE(d.is_zero());
  for (const auto& [k, v] : d.entries()) CHECK(v == testing::dense_jacobi(broken, k[0], k[1], k[2], k[3]));
  CHECK(d.at({g("p_x"), g("p_y"), g("p_z"), g("p_y")}) == ParamPoly(Scalar(0, -1)));
}

TEST_CASE("co-jacobi defect against the brute-force sum") {
  CHECK(cojacobi_defect(d010()).is_zero());
  CHECK(cojacobi_defect(d001()).is_zero());
  const CobracketTensor broken = d001() + cobracket({{g("p_x"), g("p_y"), g("p_z"), 1}});
  const auto d = cojacobi_defect(broken);
  CHECK_FALSE(d.is_zero());
  const int n = B().size();
  std::size_t nonzero = 0;
  for (int l = 0; l < n; ++l)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          const ParamPoly want = cojacobi_oracle(broken, l, a, b, c);
          CHECK(d.at({l, a, b, c}) == want);
          nonzero += !want.is_zero();
        }
  CHECK(nonzero == d.entries().size());
}

TEST_CASE("mixed jacobi is the cross term") {
  CHECK(mixed_jacobi_defect(mu100(), mu001()).is_zero());
  CHECK(same_tensor(mixed_jacobi_defect(mu001(), mu001()), jacobi_defect(mu001()).scaled(2)));

  const BracketTensor broken = mu001() + bracket({{g("p_x"), g("p_y"), g("p_x"), 1}});
  CHECK(same_tensor(mixed_jacobi_defect(broken, broken), jacobi_defect(broken).scaled(2)));

  // J(x a + y b) = x^2 J(a) + x y mixed(a, b) + y^2 J(b)
  const ParamPoly x = ParamPoly::param(0), y = ParamPoly::param(1);
  const BracketTensor a = mu100(), b = broken;
  const auto lhs = jacobi_defect(scale(a, x) + scale(b, y));
  SparseTensor<4> expect;
  const auto ja = jacobi_defect(a), jb = jacobi_defect(b), jab = mixed_jacobi_defect(a, b);
  for (const auto& [k, v] : ja.entries()) expect.add(k, v * x * x);
  for (const auto& [k, v] : jb.entries()) expect.add(k, v * y * y);
  for (const auto& [k, v] : jab.entries()) expect.add(k, v * x * y);
  CHECK(same_tensor(lhs, expect));
  CHECK_FALSE(mixed_jacobi_defect(mu100(), broken).is_zero());
}

TEST_CASE("cocycle defect") {
  SUBCASE("the four pairs of the reference data vanish") {
    CHECK(cocycle_defect(mu100(), d010()).is_zero());
    CHECK(cocycle_defect(mu001(), d010()).is_zero());
    CHECK(cocycle_defect(mu100(), d001()).is_zero());
    CHECK(cocycle_defect(mu001(), d001()).is_zero());
    CHECK(testing::dense_cocycle_zero(mu001(), d001()));
  }

  SUBCASE("hand computation for (p_z, p_x)") {
    // delta_001(i p_y) has p_x (x) p_y coefficient -i/2, matched by the action side
    ParamPoly lhs;
    for (int k = 0; k < B().size(); ++k) lhs += mu001().at(g("p_z"), g("p_x"), k) * d001().at(k, g("p_x"), g("p_y"));
    CHECK(lhs == ParamPoly(Scalar(0, mpq_class(-1, 2))));
    CHECK(testing::dense_cocycle(mu001(), d001(), g("p_z"), g("p_x"), g("p_x"), g("p_y")).is_zero());
  }

  SUBCASE("perturbed cobracket") {
    const CobracketTensor bad = d010() + cobracket({{g("p_y"), g("l_y"), g("l_z"), 1}});
    const auto d = cocycle_defect(mu100(), bad);
    CHECK_FALSE(d.is_zero());
    const int n = B().size();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) CHECK(d.at({i, j, a, b}) == testing::dense_cocycle(mu100(), bad, i, j, a, b));
  }

  SUBCASE("mismatched bases") {
    BracketTensor other(Basis({"a", "b"}));
    CHECK_THROWS_AS(cocycle_defect(other, d001()), BasisMismatch);
  }
}

TEST_CASE("four-pair check") {
  CHECK(check_four_pairs(mu100(), mu001(), d010(), d001()).satisfied());
  const BracketTensor zb(B());
  const CobracketTensor zc(B());
  CHECK(check_four_pairs(zb, zb, zc, zc).satisfied());

  // flip the sign of the p_z entry of delta_001 only
  CobracketTensor flipped = d001() + cobracket({{g("p_z"), g("p_x"), g("p_z"), 1}});
  CHECK(flipped.at(g("p_z"), g("p_x"), g("p_z")) == ParamPoly(Scalar(mpq_class(1, 2))));
  const FourPairReport r = check_four_pairs(mu100(), mu001(), d010(), flipped);
  CHECK_FALSE(r.satisfied());
  for (const auto& item : r.cocycle) {
    const bool has_d001 = item.label.find("delta_001") != std::string::npos;
    if (!has_d001) CHECK(item.ok());
  }
  CHECK_FALSE(r.cocycle[3].ok());
}

TEST_CASE("deformation family") {
  const DeformationFamily f = build_family(mu100(), mu001(), d010(), d001(), ParamSpace{});
  const ParamPoly z1 = ParamPoly::param(f.z1), t = ParamPoly::param(f.t), z2 = ParamPoly::param(f.z2),
                  h = ParamPoly::param(f.h);
  CHECK(f.mu.at(g("p_z"), g("p_x"), g("p_y")) == z1 * Scalar(0, 1));
  CHECK(f.mu.at(g("l_y"), g("l_x"), g("l_y")) == t);
  CHECK(f.delta.at(g("l_x"), g("l_z"), g("l_y")) == h * Scalar(0, 1));
  CHECK(cocycle_defect(f.mu, f.delta).is_zero());
  CHECK(testing::dense_cocycle_zero(f.mu, f.delta));

  Substitution s;
  s.set(f.z1, ParamPoly{});
  s.set(f.z2, ParamPoly{});
  CHECK(substitute_params(f.mu, s) == scale(mu100(), t));
  CHECK(substitute_params(f.delta, s) == scale(d010(), h));

  const DeformationFamily zero = build_family(BracketTensor(B()), BracketTensor(B()), CobracketTensor(B()),
                                              CobracketTensor(B()), ParamSpace{});
  CHECK(zero.mu.is_zero());
  CHECK(zero.delta.is_zero());

  CobracketTensor flipped = d001() + cobracket({{g("p_z"), g("p_x"), g("p_z"), 1}});
  CHECK_THROWS_AS(build_family(mu100(), mu001(), d010(), flipped, ParamSpace{}), HypothesisFailure);
}

TEST_CASE("family cocycle splits into the four pairwise defects") {
  // Use a family that is not a bialgebra so the split is visible on nonzero data.
  const BracketTensor m1 = mu100();
  const BracketTensor m0 = mu001() + bracket({{g("p_x"), g("l_z"), g("p_y"), 1}});
  const CobracketTensor c1 = d010() + cobracket({{g("p_y"), g("l_y"), g("l_z"), 1}});
  const CobracketTensor c0 = d001();
  ParamSpace ps({"z1", "t", "z2", "h"});
  const ParamPoly z1 = ParamPoly::param(0), t = ParamPoly::param(1), z2 = ParamPoly::param(2),
                  h = ParamPoly::param(3);
  const auto d = cocycle_defect(scale(m0, z1) + scale(m1, t), scale(c0, z2) + scale(c1, h));
  CHECK_FALSE(d.is_zero());
  const std::vector<std::tuple<Monomial, const BracketTensor*, const CobracketTensor*>> parts = {
      {Monomial::of(1) * Monomial::of(2), &m1, &c0},
      {Monomial::of(1) * Monomial::of(3), &m1, &c1},
      {Monomial::of(0) * Monomial::of(2), &m0, &c0},
      {Monomial::of(0) * Monomial::of(3), &m0, &c1},
  };
  SparseTensor<4> rebuilt;
  for (const auto& [mono, m, c] : parts) {
    const auto piece = coefficient_tensor(d, mono, ps.size());
    CHECK(same_tensor(piece, cocycle_defect(*m, *c)));
    for (const auto& [k, v] : piece.entries()) rebuilt.add(k, v.times_monomial(mono));
  }
  CHECK(same_tensor(rebuilt, d));
}

TEST_CASE("basis rescaling") {
  ParamSpace ps({"z1", "t", "z2", "h"});
  const int n = B().size();
  const int t = ps.index("t");

  std::vector<Scale> uniform(n, Scale::param(t));
  CHECK(rescale_basis(mu001(), uniform) == scale(mu001(), ParamPoly::param(t)));
  std::vector<Scale> ones(n, Scale::of(1));
  CHECK(rescale_basis(mu100(), ones) == mu100());
  CHECK(rescale_basis(d001(), ones) == d001());

  std::vector<Scale> mixed;
  for (int i = 0; i < n; ++i) mixed.push_back(Scale::param(t, i % 3) * Scale::of(Scalar(i + 1, i % 2)));
  std::vector<Scale> inv;
  for (const auto& s : mixed) inv.push_back(s.inverse());
  CHECK(rescale_basis(rescale_basis(mu100(), mixed), inv) == mu100());
  CHECK(rescale_basis(rescale_basis(d001(), mixed), inv) == d001());

  // covariance of the cocycle defect on a pair that does not satisfy it
  const CobracketTensor bad = d010() + cobracket({{g("p_y"), g("l_y"), g("l_z"), 1}});
  std::vector<Scale> sc;
  for (int i = 0; i < n; ++i) sc.push_back(Scale::of(Scalar(i + 2)));
  const auto lhs = cocycle_defect(rescale_basis(mu100(), sc), rescale_basis(bad, sc));
  const auto rhs = rescale_cocycle_defect(cocycle_defect(mu100(), bad), sc);
  CHECK(same_tensor(lhs, rhs));

  std::vector<Scale> zero(n, Scale::of(1));
  zero[2] = Scale::of(0);
  CHECK_THROWS(rescale_basis(mu100(), zero));
}

TEST_CASE("substitution commutes with the defect computations") {
  const DeformationFamily f = build_family(mu100(), mu001(), d010(), d001(), ParamSpace{});
  Substitution diag;
  const int z = f.z1;
  diag.set(f.z2, ParamPoly::param(z));
  const BracketTensor mu = substitute_params(f.mu, diag);
  const CobracketTensor dl = substitute_params(f.delta, diag);
  CHECK(mu.at(g("p_z"), g("p_x"), g("p_y")) == ParamPoly::param(z) * Scalar(0, 1));
  CHECK(dl.at(g("p_y"), g("p_x"), g("p_y")) == ParamPoly::param(z) * Scalar(mpq_class(-1, 2)));

  const CobracketTensor bad = f.delta + cobracket({{g("p_y"), g("l_y"), g("l_z"), ParamPoly::param(f.t)}});
  Substitution s;
  s.set(f.t, ParamPoly::param(f.h) * ParamPoly::param(f.z1));
  CHECK(same_tensor(cocycle_defect(substitute_params(f.mu, s), substitute_params(bad, s)),
                    substitute_params(cocycle_defect(f.mu, bad), s)));
  CHECK(same_tensor(jacobi_defect(substitute_params(f.mu, s)), substitute_params(jacobi_defect(f.mu), s)));
}
