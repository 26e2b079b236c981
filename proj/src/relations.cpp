#include "bforge/relations.hpp"

#include <algorithm>

namespace bforge {

namespace {

const NCPoly kZeroPoly{};

std::string pair_label(const Basis& b, int x, int y) { return "[" + b.name(x) + "," + b.name(y) + "]"; }

}  // namespace

RelationTable RelationTable::build(Basis basis, ParamSpace params, const std::vector<RelationSpec>& relations,
                                   Truncation tr) {
  RelationTable t;
  t.basis_ = std::move(basis);
  t.params_ = std::move(params);
  t.tr_ = tr;
  if (tr.cap < 1 || tr.cap > kMaxWordLength)
    throw Error("generator-degree cap must lie in 1.." + std::to_string(kMaxWordLength));
  const int n = t.size();
  t.entries_.assign(static_cast<std::size_t>(n * n), Entry{});
  for (const auto& r : relations) {
    if (r.left < 0 || r.left >= n || r.right < 0 || r.right >= n) throw Error("relation refers to an unknown generator");
    const std::string label = r.label.empty() ? pair_label(t.basis_, r.left, r.right) : r.label;
    if (r.left == r.right) throw Error("relation " + label + " brackets a generator with itself");
    const int j = std::max(r.left, r.right);
    const int i = std::min(r.left, r.right);
    Entry& e = t.entries_[static_cast<std::size_t>(j * n + i)];
    if (e.present)
      throw Error("duplicate relation for the pair " + pair_label(t.basis_, j, i) + ": " + e.label + " and " + label);
    e.present = true;
    e.label = label;
    e.reversed = r.left != j;
    e.rhs = (r.left == j ? r.rhs : -r.rhs).truncated(tr.order);
  }
  t.check_contracting_();
  t.normalize_rhs_();
  return t;
}

std::string RelationTable::label(int j, int i) const {
  const Entry& e = entries_[static_cast<std::size_t>(j * size() + i)];
  return e.present ? e.label : pair_label(basis_, j, i);
}

RelationSpec RelationTable::written(int j, int i) const {
  if (reversed(j, i)) return {i, j, -rhs(j, i), label(j, i)};
  return {j, i, rhs(j, i), label(j, i)};
}

NCPoly RelationTable::bracket(int a, int b) const {
  if (a == b) return {};
  return a > b ? rhs(a, b) : -rhs(b, a);
}

void RelationTable::check_contracting_() const {
  const int n = size();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i)
      for (const auto& [w, c] : rhs(j, i).terms())
        if (c.min_degree() < 1)
          throw NonContracting("relation " + label(j, i) + " has the parameter-free term " +
                               NCPoly::term(w, c).str(basis_, params_) +
                               "; every right-hand side term needs a positive parameter degree");
}

void RelationTable::normalize_rhs_() {
  Normalizer raw(*this);
  const int n = size();
  std::vector<NCPoly> normalized(static_cast<std::size_t>(n * n));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i) normalized[static_cast<std::size_t>(j * n + i)] = raw.normalize(rhs(j, i));
  for (std::size_t k = 0; k < normalized.size(); ++k) entries_[k].rhs = std::move(normalized[k]);
}

std::vector<NCPoly> RelationTable::oriented_rhs() const {
  std::vector<NCPoly> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.rhs);
  return out;
}

RelationTable RelationTable::with_rhs(const std::vector<NCPoly>& oriented) const {
  RelationTable t = *this;
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    t.entries_[k].rhs = oriented.at(k).truncated(tr_.order);
    if (!t.entries_[k].rhs.is_zero() && !t.entries_[k].present) {
      const int n = size();
      t.entries_[k].present = true;
      t.entries_[k].label = pair_label(basis_, static_cast<int>(k) / n, static_cast<int>(k) % n);
    }
  }
  t.check_contracting_();
  t.normalize_rhs_();
  return t;
}

RelationTable RelationTable::with_truncation(Truncation tr) const {
  RelationTable t = *this;
  t.tr_ = tr;
  for (auto& e : t.entries_) e.rhs = e.rhs.truncated(tr.order);
  return t;
}

// -------------------------------------------------------------- Normalizer

Normalizer::Normalizer(RelationTable table) : table_(std::move(table)) {}

void Normalizer::cap_exceeded(int length) const {
  std::string msg = "generator-degree cap " + std::to_string(table_.truncation().cap) + " exceeded (word length " +
                    std::to_string(length) + ")";
  if (!active_.empty())
    msg += " while reordering across relation " + table_.label(active_.back().first, active_.back().second);
  active_.clear();
  throw DegreeCapExceeded(msg);
}

const NCPoly& Normalizer::mul_gen(const Word& u, int g, int budget) const {
  if (budget < 0) return kZeroPoly;
  const Key key{u, g, budget};
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  NCPoly result;
  if (u.empty() || u.back() <= g) {
    if (u.size() + 1 > table_.truncation().cap) cap_exceeded(u.size() + 1);
    result = NCPoly::term({u.appended(g)});
  } else {
    // u = head k with k > g:  head k g = (head g) k + head [k, g]
    const int k = u.back();
    const Word head = u.without_last();
    active_.emplace_back(k, g);
    const NCPoly& hg = mul_gen(head, g, budget);
    for (const auto& [w, c] : hg.terms()) result.add_scaled(mul_gen(w[0], k, budget - c.min_degree()), c, budget);
    for (const auto& [w, c] : table_.rhs(k, g).terms()) {
      const int d = c.min_degree();
      if (d > budget) continue;
      result.add_scaled(word_product(head, w[0], budget - d), c, budget);
    }
    active_.pop_back();
  }
  return memo_.emplace(key, std::move(result)).first->second;
}

NCPoly Normalizer::word_product(const Word& u, const Word& w, int budget) const {
  if (budget < 0) return {};
  NCPoly cur = NCPoly::term({u});
  for (int p = 0; p < w.size(); ++p) {
    NCPoly next;
    for (const auto& [v, c] : cur.terms()) {
      const int d = c.min_degree();
      if (d > budget) continue;
      next.add_scaled(mul_gen(v[0], w[p], budget - d), c, budget);
    }
    cur = std::move(next);
  }
  return cur;
}

// ------------------------------------------------------ random rewriting

NCPoly normalize_with_strategy(const RelationTable& table, const NCPoly& a, std::mt19937_64& rng, int order) {
  NCPoly cur = a.truncated(order);
  const int cap = table.truncation().cap;
  for (;;) {
    std::vector<const NCPoly::Key*> unsorted;
    for (const auto& [k, c] : cur.terms())
      if (!k[0].is_sorted()) unsorted.push_back(&k);
    if (unsorted.empty()) return cur;
    const Word w = (*unsorted[std::uniform_int_distribution<std::size_t>(0, unsorted.size() - 1)(rng)])[0];
    const ParamPoly c = cur.coefficient({w});
    std::vector<int> descents;
    for (int p = 0; p + 1 < w.size(); ++p)
      if (w[p] > w[p + 1]) descents.push_back(p);
    const int p = descents[std::uniform_int_distribution<std::size_t>(0, descents.size() - 1)(rng)];

    Word prefix;
    for (int q = 0; q < p; ++q) prefix.push_back(w[q]);
    Word suffix;
    for (int q = p + 2; q < w.size(); ++q) suffix.push_back(w[q]);

    cur.add({w}, -c);
    cur.add({prefix * Word::from({w[p + 1], w[p]}) * suffix}, c);
    for (const auto& [r, rc] : table.rhs(w[p], w[p + 1]).terms()) {
      ParamPoly coef = ParamPoly::mul(c, rc, order);
      if (coef.is_zero()) continue;
      Word nw = prefix * r[0] * suffix;
      if (nw.size() > cap)
        throw DegreeCapExceeded("generator-degree cap exceeded while expanding relation " + table.label(w[p], w[p + 1]));
      cur.add({nw}, coef);
    }
  }
}

std::vector<JacobiTriple> presentation_jacobi_defect(const Normalizer& norm) {
  const int n = norm.table().size();
  std::vector<JacobiTriple> out;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        const NCPoly ga = generator(a), gb = generator(b), gc = generator(c);
        NCPoly j = norm.commutator(norm.table().bracket(a, b), gc) + norm.commutator(norm.table().bracket(b, c), ga) +
                   norm.commutator(norm.table().bracket(c, a), gb);
        if (!j.is_zero()) out.push_back({a, b, c, std::move(j)});
      }
  return out;
}

}  // namespace bforge
