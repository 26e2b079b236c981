#include "bforge/structure.hpp"

#include <sstream>

namespace bforge {

namespace {

using Dense3 = std::vector<ParamPoly>;

Dense3 densify(const SparseTensor<3>& t, int n) {
  Dense3 d(static_cast<std::size_t>(n * n * n));
  for (const auto& [k, v] : t.entries()) d[(k[0] * n + k[1]) * n + k[2]] = v;
  return d;
}

struct DenseView {
  const Dense3& data;
  int n;
  const ParamPoly& operator()(int i, int j, int k) const { return data[(i * n + j) * n + k]; }
};

void require_same(const Basis& a, const Basis& b) {
  if (!(a == b)) throw BasisMismatch("tensors are defined over different bases");
}

ParamPoly apply_scale(const ParamPoly& p, const Scale& s) {
  Monomial up;
  Monomial down;
  for (int i = 0; i < kMaxParams; ++i) {
    if (s.exponents[i] > 0) up = up.with_exponent(i, s.exponents[i]);
    if (s.exponents[i] < 0) down = down.with_exponent(i, -s.exponents[i]);
  }
  return p.scaled(s.factor).times_monomial(up).divided(down);
}

}  // namespace

Basis::Basis(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (names_[i] == names_[j]) throw Error("duplicate generator name '" + names_[i] + "'");
}

std::optional<int> Basis::find(std::string_view name) const {
  for (int i = 0; i < size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

int Basis::index(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw Error("unknown generator '" + std::string(name) + "'");
}

BracketTensor BracketTensor::from_relations(Basis basis, const std::vector<Relation>& relations) {
  BracketTensor t(std::move(basis));
  for (const auto& r : relations) {
    t.entries_.add({r.left, r.right, r.result}, r.coefficient);
    t.entries_.add({r.right, r.left, r.result}, -r.coefficient);
  }
  return t;
}

CobracketTensor CobracketTensor::from_relations(Basis basis, const std::vector<Relation>& relations) {
  CobracketTensor t(std::move(basis));
  for (const auto& r : relations) {
    t.entries_.add({r.source, r.first, r.second}, r.coefficient);
    t.entries_.add({r.source, r.second, r.first}, -r.coefficient);
  }
  return t;
}

BracketTensor operator+(const BracketTensor& a, const BracketTensor& b) {
  require_same(a.basis(), b.basis());
  BracketTensor r = a;
  for (const auto& [k, v] : b.entries().entries()) r.add_raw(k[0], k[1], k[2], v);
  return r;
}

CobracketTensor operator+(const CobracketTensor& a, const CobracketTensor& b) {
  require_same(a.basis(), b.basis());
  CobracketTensor r = a;
  for (const auto& [k, v] : b.entries().entries()) r.add_raw(k[0], k[1], k[2], v);
  return r;
}

BracketTensor scale(const BracketTensor& t, const ParamPoly& factor, int order) {
  BracketTensor r(t.basis());
  for (const auto& [k, v] : t.entries().entries()) r.add_raw(k[0], k[1], k[2], ParamPoly::mul(v, factor, order));
  return r;
}

CobracketTensor scale(const CobracketTensor& t, const ParamPoly& factor, int order) {
  CobracketTensor r(t.basis());
  for (const auto& [k, v] : t.entries().entries()) r.add_raw(k[0], k[1], k[2], ParamPoly::mul(v, factor, order));
  return r;
}

SparseTensor<3> antisymmetry_defect(const BracketTensor& t) {
  SparseTensor<3> d;
  const int n = t.basis().size();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = 0; k < n; ++k) d.add({i, j, k}, t.at(i, j, k) + t.at(j, i, k));
  return d;
}

SparseTensor<3> antisymmetry_defect(const CobracketTensor& t) {
  SparseTensor<3> d;
  const int n = t.basis().size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) d.add({i, j, k}, t.at(i, j, k) + t.at(i, k, j));
  return d;
}

namespace {

// sum over cyclic (i,j,k) of sum_m A^m_ij B^l_mk
SparseTensor<4> jacobi_sum(const BracketTensor& a, const BracketTensor& b, int order) {
  const int n = a.basis().size();
  const Dense3 da = densify(a.entries(), n);
  const Dense3 db = densify(b.entries(), n);
  DenseView A{da, n};
  DenseView B{db, n};
  SparseTensor<4> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          ParamPoly acc;
          for (int m = 0; m < n; ++m) {
            acc.add_product(A(i, j, m), B(m, k, l), order);
            acc.add_product(A(j, k, m), B(m, i, l), order);
            acc.add_product(A(k, i, m), B(m, j, l), order);
          }
          out.add({i, j, k, l}, acc);
        }
  return out;
}

SparseTensor<4> cojacobi_sum(const CobracketTensor& a, const CobracketTensor& b, int order) {
  const int n = a.basis().size();
  const Dense3 da = densify(a.entries(), n);
  const Dense3 db = densify(b.entries(), n);
  DenseView A{da, n};
  DenseView B{db, n};
  SparseTensor<4> out;
  for (int l = 0; l < n; ++l)
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) {
          ParamPoly acc;
          for (int m = 0; m < n; ++m) {
            acc.add_product(A(l, m, z), B(m, x, y), order);
            acc.add_product(A(l, m, x), B(m, y, z), order);
            acc.add_product(A(l, m, y), B(m, z, x), order);
          }
          out.add({l, x, y, z}, acc);
        }
  return out;
}

}  // namespace

SparseTensor<4> jacobi_defect(const BracketTensor& mu, int order) { return jacobi_sum(mu, mu, order); }

SparseTensor<4> cojacobi_defect(const CobracketTensor& delta, int order) {
  return cojacobi_sum(delta, delta, order);
}

SparseTensor<4> mixed_jacobi_defect(const BracketTensor& a, const BracketTensor& b, int order) {
  require_same(a.basis(), b.basis());
  return jacobi_sum(a, b, order) + jacobi_sum(b, a, order);
}

SparseTensor<4> mixed_cojacobi_defect(const CobracketTensor& a, const CobracketTensor& b, int order) {
  require_same(a.basis(), b.basis());
  return cojacobi_sum(a, b, order) + cojacobi_sum(b, a, order);
}

SparseTensor<4> cocycle_defect(const BracketTensor& mu, const CobracketTensor& delta, int order) {
  require_same(mu.basis(), delta.basis());
  const int n = mu.basis().size();
  const Dense3 dc = densify(mu.entries(), n);
  const Dense3 dd = densify(delta.entries(), n);
  DenseView C{dc, n};
  DenseView D{dd, n};
  SparseTensor<4> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          ParamPoly acc;
          for (int m = 0; m < n; ++m) acc.add_product(C(i, j, m), D(m, a, b), order);
          ParamPoly act;
          for (int p = 0; p < n; ++p) {
            // x_i . delta(x_j)
            act.add_product(D(j, p, b), C(i, p, a), order);
            act.add_product(D(j, a, p), C(i, p, b), order);
            // - x_j . delta(x_i)
            act.add_product(-D(i, p, b), C(j, p, a), order);
            act.add_product(-D(i, a, p), C(j, p, b), order);
          }
          out.add({i, j, a, b}, acc - act);
        }
  return out;
}

bool FourPairReport::satisfied() const {
  for (const auto* group : {&lie, &colie, &cocycle})
    for (const auto& item : *group)
      if (!item.ok()) return false;
  return true;
}

FourPairReport check_four_pairs(const BracketTensor& mu_100, const BracketTensor& mu_001,
                                const CobracketTensor& delta_010, const CobracketTensor& delta_001,
                                int order) {
  require_same(mu_100.basis(), mu_001.basis());
  require_same(mu_100.basis(), delta_010.basis());
  require_same(mu_100.basis(), delta_001.basis());
  FourPairReport r;
  r.lie.push_back({"jacobi(mu_100)", jacobi_defect(mu_100, order)});
  r.lie.push_back({"jacobi(mu_001)", jacobi_defect(mu_001, order)});
  r.lie.push_back({"mixed_jacobi(mu_100, mu_001)", mixed_jacobi_defect(mu_100, mu_001, order)});
  r.colie.push_back({"cojacobi(delta_010)", cojacobi_defect(delta_010, order)});
  r.colie.push_back({"cojacobi(delta_001)", cojacobi_defect(delta_001, order)});
  r.colie.push_back({"mixed_cojacobi(delta_010, delta_001)", mixed_cojacobi_defect(delta_010, delta_001, order)});
  r.cocycle.push_back({"cocycle(mu_100, delta_010)", cocycle_defect(mu_100, delta_010, order)});
  r.cocycle.push_back({"cocycle(mu_001, delta_010)", cocycle_defect(mu_001, delta_010, order)});
  r.cocycle.push_back({"cocycle(mu_100, delta_001)", cocycle_defect(mu_100, delta_001, order)});
  r.cocycle.push_back({"cocycle(mu_001, delta_001)", cocycle_defect(mu_001, delta_001, order)});
  return r;
}

DeformationFamily build_family(const BracketTensor& mu_100, const BracketTensor& mu_001,
                               const CobracketTensor& delta_010, const CobracketTensor& delta_001,
                               ParamSpace params, const std::string& z1, const std::string& t,
                               const std::string& z2, const std::string& h) {
  FourPairReport report = check_four_pairs(mu_100, mu_001, delta_010, delta_001);
  if (!report.satisfied()) throw HypothesisFailure("four-pair hypotheses are not satisfied", std::move(report));
  DeformationFamily f;
  f.z1 = params.add(z1);
  f.t = params.add(t);
  f.z2 = params.add(z2);
  f.h = params.add(h);
  f.params = std::move(params);
  f.mu = scale(mu_001, ParamPoly::param(f.z1)) + scale(mu_100, ParamPoly::param(f.t));
  f.delta = scale(delta_001, ParamPoly::param(f.z2)) + scale(delta_010, ParamPoly::param(f.h));
  return f;
}

Scale Scale::param(int index, int power) {
  Scale s;
  s.exponents.at(index) = power;
  return s;
}

Scale Scale::inverse() const {
  Scale s;
  s.factor = factor.inverse();
  for (int i = 0; i < kMaxParams; ++i) s.exponents[i] = -exponents[i];
  return s;
}

Scale operator*(const Scale& a, const Scale& b) {
  Scale s;
  s.factor = a.factor * b.factor;
  for (int i = 0; i < kMaxParams; ++i) s.exponents[i] = a.exponents[i] + b.exponents[i];
  return s;
}

namespace {

void check_scales(const std::vector<Scale>& scales, int n) {
  if (static_cast<int>(scales.size()) != n) throw BasisMismatch("one scale per generator is required");
  for (const auto& s : scales)
    if (s.factor.is_zero()) throw Error("zero scale factor");
}

}  // namespace

BracketTensor rescale_basis(const BracketTensor& t, const std::vector<Scale>& scales) {
  check_scales(scales, t.basis().size());
  BracketTensor r(t.basis());
  for (const auto& [k, v] : t.entries().entries()) {
    const Scale f = scales[k[0]] * scales[k[1]] * scales[k[2]].inverse();
    r.add_raw(k[0], k[1], k[2], apply_scale(v, f));
  }
  return r;
}

CobracketTensor rescale_basis(const CobracketTensor& t, const std::vector<Scale>& scales) {
  check_scales(scales, t.basis().size());
  CobracketTensor r(t.basis());
  for (const auto& [k, v] : t.entries().entries()) {
    const Scale f = scales[k[0]] * (scales[k[1]] * scales[k[2]]).inverse();
    r.add_raw(k[0], k[1], k[2], apply_scale(v, f));
  }
  return r;
}

SparseTensor<4> rescale_cocycle_defect(const SparseTensor<4>& d, const std::vector<Scale>& scales) {
  SparseTensor<4> r;
  for (const auto& [k, v] : d.entries()) {
    const Scale f = scales.at(k[0]) * scales.at(k[1]) * (scales.at(k[2]) * scales.at(k[3])).inverse();
    r.add(k, apply_scale(v, f));
  }
  return r;
}

BracketTensor substitute_params(const BracketTensor& t, const Substitution& s, int order) {
  BracketTensor r(t.basis());
  for (const auto& [k, v] : t.entries().entries()) r.add_raw(k[0], k[1], k[2], v.substituted(s, order));
  return r;
}

CobracketTensor substitute_params(const CobracketTensor& t, const Substitution& s, int order) {
  CobracketTensor r(t.basis());
  for (const auto& [k, v] : t.entries().entries()) r.add_raw(k[0], k[1], k[2], v.substituted(s, order));
  return r;
}

std::string describe_defect(const SparseTensor<4>& d, const Basis& basis, const ParamSpace& params,
                            std::string_view layout) {
  std::ostringstream os;
  for (const auto& [k, v] : d.entries()) {
    os << "  " << layout << "(" << basis.name(k[0]) << ", " << basis.name(k[1]) << ", " << basis.name(k[2])
       << ", " << basis.name(k[3]) << ") = " << v.str(params) << "\n";
  }
  return os.str();
}

}  // namespace bforge
