#include "fsat/semantics.hpp"

#include <limits>
#include <unordered_map>

namespace fsat {

std::size_t table_length(std::size_t k, std::size_t arity) {
  constexpr std::size_t limit = std::size_t{1} << 28;
  std::size_t n = 1;
  for (std::size_t i = 0; i < arity; ++i) {
    if (k != 0 && n > limit / k) throw ResourceError("table of arity " + std::to_string(arity) + " over " +
                                                     std::to_string(k) + " elements is too large");
    n *= k;
  }
  return n;
}

std::size_t tuple_index(const std::vector<Elem>& tuple, std::size_t k) {
  std::size_t idx = 0;
  for (Elem d : tuple) idx = idx * k + d;
  return idx;
}

std::vector<Elem> tuple_at(std::size_t index, std::size_t arity, std::size_t k) {
  std::vector<Elem> out(arity);
  for (std::size_t i = arity; i-- > 0;) {
    out[i] = static_cast<Elem>(index % k);
    index /= k;
  }
  return out;
}

FinModel::FinModel(std::size_t size) : size_(size) {
  if (size == 0) throw PreconditionError("model domain must be nonempty");
}

void FinModel::set_function(const std::string& name, std::size_t arity, std::vector<Elem> table) {
  if (relations_.count(name)) throw InputError(InputError::Kind::Format, "'" + name + "' is already a relation");
  if (table.size() != table_length(size_, arity))
    throw InputError(InputError::Kind::Format, "function table '" + name + "' has length " +
                                                   std::to_string(table.size()) + ", expected " +
                                                   std::to_string(table_length(size_, arity)));
  for (Elem e : table)
    if (e >= size_) throw InputError(InputError::Kind::Format, "function table '" + name + "' leaves the domain");
  functions_[name] = FunTable{arity, std::move(table)};
}

void FinModel::set_relation(const std::string& name, std::size_t arity, std::vector<std::uint8_t> bits) {
  if (functions_.count(name)) throw InputError(InputError::Kind::Format, "'" + name + "' is already a function");
  if (bits.size() != table_length(size_, arity))
    throw InputError(InputError::Kind::Format, "relation table '" + name + "' has length " +
                                                   std::to_string(bits.size()) + ", expected " +
                                                   std::to_string(table_length(size_, arity)));
  for (auto& b : bits) b = b ? 1 : 0;
  relations_[name] = RelTable{arity, std::move(bits)};
}

void FinModel::add_zero_function(const std::string& name, std::size_t arity) {
  set_function(name, arity, std::vector<Elem>(table_length(size_, arity), 0));
}

void FinModel::add_empty_relation(const std::string& name, std::size_t arity) {
  set_relation(name, arity, std::vector<std::uint8_t>(table_length(size_, arity), 0));
}

const FunTable* FinModel::function(const std::string& name) const {
  auto it = functions_.find(name);
  return it == functions_.end() ? nullptr : &it->second;
}

const RelTable* FinModel::relation(const std::string& name) const {
  auto it = relations_.find(name);
  return it == relations_.end() ? nullptr : &it->second;
}

FunTable* FinModel::mutable_function(const std::string& name) {
  auto it = functions_.find(name);
  return it == functions_.end() ? nullptr : &it->second;
}

RelTable* FinModel::mutable_relation(const std::string& name) {
  auto it = relations_.find(name);
  return it == relations_.end() ? nullptr : &it->second;
}

namespace {

[[noreturn]] void missing(const std::string& what, const std::string& name) {
  throw InputError(InputError::Kind::UnknownSymbol, "model has no " + what + " table for '" + name + "'");
}

void check_args(const std::string& name, std::size_t arity, const std::vector<Elem>& args, std::size_t k) {
  if (args.size() != arity)
    throw InputError(InputError::Kind::ArityMismatch, "'" + name + "' expects " + std::to_string(arity) +
                                                          " arguments, got " + std::to_string(args.size()));
  for (Elem a : args)
    if (a >= k) throw PreconditionError("argument outside the domain for '" + name + "'");
}

}  // namespace

Elem FinModel::apply(const std::string& fn, const std::vector<Elem>& args) const {
  const FunTable* f = function(fn);
  if (!f) missing("function", fn);
  check_args(fn, f->arity, args, size_);
  return f->table[tuple_index(args, size_)];
}

bool FinModel::holds(const std::string& rel, const std::vector<Elem>& args) const {
  const RelTable* r = relation(rel);
  if (!r) missing("relation", rel);
  check_args(rel, r->arity, args, size_);
  return r->bits[tuple_index(args, size_)] != 0;
}

void FinModel::set_holds(const std::string& rel, const std::vector<Elem>& args, bool value) {
  RelTable* r = mutable_relation(rel);
  if (!r) missing("relation", rel);
  check_args(rel, r->arity, args, size_);
  r->bits[tuple_index(args, size_)] = value ? 1 : 0;
}

Signature FinModel::signature() const {
  Signature sig;
  for (const auto& [name, f] : functions_) sig.add_function(name, f.arity);
  for (const auto& [name, r] : relations_) sig.add_relation(name, r.arity);
  return sig;
}

Env Env::cons(Elem a) const {
  Env out;
  out.prefix.reserve(prefix.size() + 1);
  out.prefix.push_back(a);
  out.prefix.insert(out.prefix.end(), prefix.begin(), prefix.end());
  out.fallback = fallback;
  return out;
}

void Env::set(std::size_t i, Elem value) {
  if (i >= prefix.size()) prefix.resize(i + 1, fallback);
  prefix[i] = value;
}

// ---------------------------------------------------------------------------
// Compiled evaluation.
//
// Bound variables live on an explicit stack; a de Bruijn index i seen at
// binder depth d refers to stack slot d-1-i. Large domains make nested
// quantifiers expensive, so quantifier nodes whose body depends on at most a
// few stack slots cache their value per slot valuation for the duration of
// one call.

namespace {

constexpr std::size_t kMemoMinDomain = 16;
constexpr std::size_t kMemoMaxKey = 4;
constexpr std::size_t kDenseMemoLimit = std::size_t{1} << 20;

struct CTerm {
  enum class Kind { Bound, Free, App } kind;
  std::size_t slot = 0;
  const FunTable* fn = nullptr;
  std::vector<CTerm> args;
};

struct CNode {
  Formula::Kind kind;
  BinOp op = BinOp::And;
  Quant q = Quant::All;
  const RelTable* rel = nullptr;
  std::vector<CTerm> args;
  int lhs = -1, rhs = -1;
  std::size_t depth = 0;
  // Quantifier cache.
  bool memo = false;
  bool dense = false;
  // Leading binary atom relating the bound variable to an outer term.
  int guard = -1;
  std::vector<std::size_t> key_slots;
  int memo_id = -1;
};

}  // namespace

struct Guard {
  const RelTable* rel = nullptr;
  /// Argument position of the quantified variable.
  std::size_t pos = 0;
  CTerm other;
};

/// For each value u of the other argument, the bound values that satisfy the atom.
struct Adjacency {
  std::uint32_t generation = 0;
  std::vector<std::uint32_t> offsets;
  std::vector<Elem> items;
};

struct Evaluator::Impl {
  const FinModel* model;
  std::size_t k;
  std::vector<CNode> nodes;
  int root = -1;
  std::size_t max_depth = 0;

  mutable std::vector<Elem> stack;
  mutable const Env* env = nullptr;
  mutable std::uint32_t generation = 0;
  mutable std::vector<std::vector<std::uint32_t>> dense_memo;
  mutable std::vector<std::unordered_map<std::uint64_t, bool>> sparse_memo;
  std::vector<Guard> guards;
  mutable std::vector<Adjacency> adjacency;

  static bool mentions_slot(const CTerm& t, std::size_t slot) {
    if (t.kind == CTerm::Kind::Bound) return t.slot == slot;
    for (const auto& a : t.args)
      if (mentions_slot(a, slot)) return true;
    return false;
  }

  // Ex: leftmost conjunct of the body; All: leftmost conjunct of the antecedent.
  void find_guard(CNode& n) {
    int id = n.lhs;
    if (n.q == Quant::All) {
      const CNode& b = nodes[static_cast<std::size_t>(id)];
      if (b.kind != Formula::Kind::Bin || b.op != BinOp::Impl) return;
      id = b.lhs;
    }
    while (nodes[static_cast<std::size_t>(id)].kind == Formula::Kind::Bin &&
           nodes[static_cast<std::size_t>(id)].op == BinOp::And)
      id = nodes[static_cast<std::size_t>(id)].lhs;
    const CNode& a = nodes[static_cast<std::size_t>(id)];
    if (a.kind != Formula::Kind::Atom || a.args.size() != 2) return;
    std::size_t slot = n.depth;
    for (std::size_t pos = 0; pos < 2; ++pos) {
      const CTerm& mine = a.args[pos];
      const CTerm& other = a.args[1 - pos];
      if (mine.kind == CTerm::Kind::Bound && mine.slot == slot && !mentions_slot(other, slot)) {
        n.guard = static_cast<int>(guards.size());
        guards.push_back({a.rel, pos, other});
        adjacency.emplace_back();
        return;
      }
    }
  }

  const Adjacency& adjacency_for(int g) const {
    Adjacency& adj = adjacency[static_cast<std::size_t>(g)];
    if (adj.generation == generation) return adj;
    const Guard& gd = guards[static_cast<std::size_t>(g)];
    adj.generation = generation;
    adj.offsets.assign(k + 1, 0);
    adj.items.clear();
    for (Elem u = 0; u < k; ++u) {
      for (Elem z = 0; z < k; ++z) {
        std::size_t idx = gd.pos == 0 ? z * k + u : u * k + z;
        if (gd.rel->bits[idx]) adj.items.push_back(z);
      }
      adj.offsets[u + 1] = static_cast<std::uint32_t>(adj.items.size());
    }
    return adj;
  }

  CTerm compile_term(const Term& t, std::size_t depth) {
    CTerm c;
    if (t.is_var()) {
      if (t.var < depth) {
        c.kind = CTerm::Kind::Bound;
        c.slot = depth - 1 - t.var;
      } else {
        c.kind = CTerm::Kind::Free;
        c.slot = t.var - depth;
      }
      return c;
    }
    c.kind = CTerm::Kind::App;
    c.fn = model->function(t.fn);
    if (!c.fn) missing("function", t.fn);
    if (c.fn->arity != t.args.size())
      throw InputError(InputError::Kind::ArityMismatch, "function '" + t.fn + "' has arity " +
                                                            std::to_string(c.fn->arity) + " in the model");
    for (const auto& a : t.args) c.args.push_back(compile_term(a, depth));
    return c;
  }

  int compile(const Formula& phi, std::size_t depth) {
    max_depth = std::max(max_depth, depth);
    CNode n;
    n.kind = phi.kind();
    n.depth = depth;
    switch (phi.kind()) {
      case Formula::Kind::Falsum:
        break;
      case Formula::Kind::Atom:
        n.rel = model->relation(phi.rel());
        if (!n.rel) missing("relation", phi.rel());
        if (n.rel->arity != phi.args().size())
          throw InputError(InputError::Kind::ArityMismatch, "relation '" + phi.rel() + "' has arity " +
                                                                std::to_string(n.rel->arity) + " in the model");
        for (const auto& a : phi.args()) n.args.push_back(compile_term(a, depth));
        break;
      case Formula::Kind::Bin:
        n.op = phi.op();
        n.lhs = compile(phi.lhs(), depth);
        n.rhs = compile(phi.rhs(), depth);
        break;
      case Formula::Kind::Quant: {
        n.q = phi.quantifier();
        n.lhs = compile(phi.body(), depth + 1);
        if (k >= kMemoMinDomain) {
          find_guard(n);
          for (std::size_t i : free_vars(phi))
            if (i < depth) n.key_slots.push_back(depth - 1 - i);
          if (n.key_slots.size() <= kMemoMaxKey) {
            n.memo = true;
            std::size_t cells = 1;
            bool fits = true;
            for (std::size_t j = 0; j < n.key_slots.size(); ++j) {
              if (cells > kDenseMemoLimit / k) {
                fits = false;
                break;
              }
              cells *= k;
            }
            n.dense = fits;
            if (fits) {
              n.memo_id = static_cast<int>(dense_memo.size());
              dense_memo.emplace_back();
            } else {
              n.memo_id = static_cast<int>(sparse_memo.size());
              sparse_memo.emplace_back();
            }
          }
        }
        break;
      }
    }
    nodes.push_back(std::move(n));
    return static_cast<int>(nodes.size() - 1);
  }

  Elem term(const CTerm& t) const {
    switch (t.kind) {
      case CTerm::Kind::Bound:
        return stack[t.slot];
      case CTerm::Kind::Free:
        return env->lookup(t.slot);
      case CTerm::Kind::App: {
        std::size_t idx = 0;
        for (const auto& a : t.args) idx = idx * k + term(a);
        return t.fn->table[idx];
      }
    }
    return 0;
  }

  bool quant_body(const CNode& n) const {
    std::size_t d = n.depth;
    bool want = n.q == Quant::Ex;
    if (n.guard >= 0) {
      const Adjacency& adj = adjacency_for(n.guard);
      Elem u = term(guards[static_cast<std::size_t>(n.guard)].other);
      for (std::uint32_t i = adj.offsets[u]; i < adj.offsets[u + 1]; ++i) {
        stack[d] = adj.items[i];
        if (eval(n.lhs) == want) return want;
      }
      return !want;
    }
    for (Elem a = 0; a < k; ++a) {
      stack[d] = a;
      if (eval(n.lhs) == want) return want;
    }
    return !want;
  }

  bool eval(int id) const {
    const CNode& n = nodes[static_cast<std::size_t>(id)];
    switch (n.kind) {
      case Formula::Kind::Falsum:
        return false;
      case Formula::Kind::Atom: {
        std::size_t idx = 0;
        for (const auto& a : n.args) idx = idx * k + term(a);
        return n.rel->bits[idx] != 0;
      }
      case Formula::Kind::Bin:
        switch (n.op) {
          case BinOp::And:
            return eval(n.lhs) && eval(n.rhs);
          case BinOp::Or:
            return eval(n.lhs) || eval(n.rhs);
          case BinOp::Impl:
            return !eval(n.lhs) || eval(n.rhs);
        }
        return false;
      case Formula::Kind::Quant: {
        if (!n.memo) return quant_body(n);
        std::uint64_t key = 0;
        for (std::size_t s : n.key_slots) key = key * k + stack[s];
        if (n.dense) {
          auto& cells = dense_memo[static_cast<std::size_t>(n.memo_id)];
          if (cells.empty()) {
            std::size_t len = 1;
            for (std::size_t j = 0; j < n.key_slots.size(); ++j) len *= k;
            cells.assign(len, 0);
          }
          std::uint32_t c = cells[key];
          if ((c >> 1) == generation) return c & 1;
          bool v = quant_body(n);
          cells[key] = (generation << 1) | (v ? 1 : 0);
          return v;
        }
        auto& table = sparse_memo[static_cast<std::size_t>(n.memo_id)];
        auto it = table.find(key);
        if (it != table.end()) return it->second;
        bool v = quant_body(n);
        table.emplace(key, v);
        return v;
      }
    }
    return false;
  }
};

Evaluator::Evaluator(const FinModel& m, const Formula& phi) : impl_(std::make_unique<Impl>()) {
  impl_->model = &m;
  impl_->k = m.size();
  impl_->root = impl_->compile(phi, 0);
  impl_->stack.assign(impl_->max_depth + 1, 0);
}

Evaluator::~Evaluator() = default;
Evaluator::Evaluator(Evaluator&&) noexcept = default;
Evaluator& Evaluator::operator=(Evaluator&&) noexcept = default;

bool Evaluator::operator()(const Env& env) const {
  for (Elem v : env.prefix)
    if (v >= impl_->k) throw PreconditionError("assignment value outside the domain");
  if (env.fallback >= impl_->k) throw PreconditionError("assignment default outside the domain");
  impl_->env = &env;
  // Generation 0 marks untouched dense cells, so stamps start at 1.
  if (++impl_->generation >= (std::uint32_t{1} << 31)) {
    impl_->generation = 1;
    for (auto& cells : impl_->dense_memo) cells.clear();
  }
  for (auto& table : impl_->sparse_memo) table.clear();
  bool v = impl_->eval(impl_->root);
  impl_->env = nullptr;
  return v;
}

Elem eval_term(const FinModel& m, const Env& env, const Term& t) {
  if (t.is_var()) {
    Elem v = env.lookup(t.var);
    if (v >= m.size()) throw PreconditionError("assignment value outside the domain");
    return v;
  }
  std::vector<Elem> args;
  args.reserve(t.args.size());
  for (const auto& a : t.args) args.push_back(eval_term(m, env, a));
  return m.apply(t.fn, args);
}

bool eval_formula(const FinModel& m, const Env& env, const Formula& phi) { return Evaluator(m, phi)(env); }

bool models_ext_equal(const FinModel& m1, const FinModel& m2, const SymbolUse& syms) {
  if (m1.size() != m2.size()) throw PreconditionError("models have different sizes");
  for (const auto& f : syms.functions) {
    const FunTable* a = m1.function(f);
    const FunTable* b = m2.function(f);
    if (!a || !b) missing("function", f);
    if (!(*a == *b)) return false;
  }
  for (const auto& r : syms.relations) {
    const RelTable* a = m1.relation(r);
    const RelTable* b = m2.relation(r);
    if (!a || !b) missing("relation", r);
    if (!(*a == *b)) return false;
  }
  return true;
}

}  // namespace fsat
