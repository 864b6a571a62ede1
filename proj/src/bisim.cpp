#include "fsat/bisim.hpp"

#include "fsat/finite.hpp"

namespace fsat {

PairRelation PairRelation::identity(std::size_t k) {
  PairRelation r(k);
  for (Elem x = 0; x < k; ++x) r.set(x, x, true);
  return r;
}

std::size_t PairRelation::count() const {
  std::size_t n = 0;
  for (auto b : bits_) n += b;
  return n;
}

bool PairRelation::is_equivalence() const {
  for (Elem x = 0; x < k_; ++x) {
    if (!get(x, x)) return false;
    for (Elem y = 0; y < k_; ++y) {
      if (get(x, y) != get(y, x)) return false;
      if (!get(x, y)) continue;
      for (Elem z = 0; z < k_; ++z)
        if (get(y, z) && !get(x, z)) return false;
    }
  }
  return true;
}

bool PairRelation::subset_of(const PairRelation& other) const {
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] && !other.bits_[i]) return false;
  return true;
}

namespace {

// Visits, for each argument position i and each assignment of the other
// positions, the k table indices obtained by placing x = 0..k-1 at position i.
template <class F>
void for_each_slice(std::size_t k, std::size_t arity, F&& visit) {
  if (arity == 0) return;
  std::size_t contexts = table_length(k, arity - 1);
  std::vector<std::size_t> idx(k);
  for (std::size_t pos = 0; pos < arity; ++pos) {
    std::size_t weight = table_length(k, arity - 1 - pos);
    for (std::size_t c = 0; c < contexts; ++c) {
      // Split the context index into the part above and below position pos.
      std::size_t low = c % weight;
      std::size_t high = c / weight;
      std::size_t base = high * weight * k + low;
      for (std::size_t x = 0; x < k; ++x) idx[x] = base + x * weight;
      visit(idx);
    }
  }
}

}  // namespace

PairRelation apply_F(const FinModel& m, const std::vector<std::string>& lF, const std::vector<std::string>& lP,
                     const PairRelation& R) {
  std::size_t k = m.size();
  if (R.size() != k) throw PreconditionError("relation size differs from model size");
  PairRelation out = PairRelation::full(k);
  for (const auto& f : lF) {
    const FunTable* t = m.function(f);
    if (!t) throw InputError(InputError::Kind::UnknownSymbol, "model has no function '" + f + "'");
    for_each_slice(k, t->arity, [&](const std::vector<std::size_t>& idx) {
      for (Elem x = 0; x < k; ++x)
        for (Elem y = 0; y < k; ++y)
          if (out.get(x, y) && !R.get(t->table[idx[x]], t->table[idx[y]])) out.set(x, y, false);
    });
  }
  for (const auto& p : lP) {
    const RelTable* t = m.relation(p);
    if (!t) throw InputError(InputError::Kind::UnknownSymbol, "model has no relation '" + p + "'");
    for_each_slice(k, t->arity, [&](const std::vector<std::size_t>& idx) {
      for (Elem x = 0; x < k; ++x)
        for (Elem y = 0; y < k; ++y)
          if (out.get(x, y) && t->bits[idx[x]] != t->bits[idx[y]]) out.set(x, y, false);
    });
  }
  return out;
}

Fixpoint indist_fixpoint(const FinModel& m, const std::vector<std::string>& lF, const std::vector<std::string>& lP) {
  Fixpoint fp{PairRelation::full(m.size()), 0};
  while (true) {
    PairRelation next = apply_F(m, lF, lP, fp.relation);
    ++fp.iterations;
    if (next == fp.relation) return fp;
    fp.relation = std::move(next);
  }
}

Interpretation quotient_model(const FinModel& m, const Env& env, const PairRelation& equiv) {
  std::size_t k = m.size();
  std::vector<Elem> items(k);
  for (Elem x = 0; x < k; ++x) items[x] = x;
  auto q = finite_quotient(items, [&](Elem a, Elem b) { return equiv.get(a, b); });
  std::size_t n = q.size();
  auto cls = [&](Elem x) { return static_cast<Elem>(q.class_of_item(x)); };

  FinModel out(n);
  for (const auto& [name, f] : m.functions()) {
    std::vector<Elem> table(table_length(n, f.arity));
    for (std::size_t i = 0; i < table.size(); ++i) {
      auto v = tuple_at(i, f.arity, n);
      for (auto& e : v) e = q.repr(e);
      table[i] = cls(f.table[tuple_index(v, k)]);
    }
    out.set_function(name, f.arity, std::move(table));
  }
  for (const auto& [name, r] : m.relations()) {
    std::vector<std::uint8_t> bits(table_length(n, r.arity));
    for (std::size_t i = 0; i < bits.size(); ++i) {
      auto v = tuple_at(i, r.arity, n);
      for (auto& e : v) e = q.repr(e);
      bits[i] = r.bits[tuple_index(v, k)];
    }
    out.set_relation(name, r.arity, std::move(bits));
  }
  Env e;
  for (Elem v : env.prefix) e.prefix.push_back(cls(v));
  e.fallback = cls(env.fallback);
  return {std::move(out), std::move(e)};
}

Interpretation minimize_model(const FinModel& m, const Env& env, const Formula& phi) {
  auto syms = symbols_of(phi);
  auto fp = indist_fixpoint(m, syms.functions, syms.relations);
  return quotient_model(m, env, fp.relation);
}

}  // namespace fsat
