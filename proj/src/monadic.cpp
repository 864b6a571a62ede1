#include "fsat/monadic.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace fsat {

namespace {

// And-inverter graph with hash-consing. A literal is 2*node + negated; node 0
// is the constant, so literal 0 is true and literal 1 is false.
class Circuit {
 public:
  static constexpr int kTrue = 0;
  static constexpr int kFalse = 1;

  struct Node {
    bool input = false;
    std::vector<int> kids;
  };

  Circuit() { nodes_.push_back(Node{}); }

  int input() {
    nodes_.push_back(Node{true, {}});
    return static_cast<int>(nodes_.size() - 1) * 2;
  }

  static int neg(int l) { return l ^ 1; }

  int conj(std::vector<int> lits) {
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    std::vector<int> kept;
    for (int l : lits) {
      if (l == kFalse) return kFalse;
      if (l == kTrue) continue;
      if (!kept.empty() && kept.back() == neg(l)) return kFalse;
      kept.push_back(l);
    }
    if (kept.empty()) return kTrue;
    if (kept.size() == 1) return kept[0];
    auto it = index_.find(kept);
    if (it != index_.end()) return it->second;
    nodes_.push_back(Node{false, kept});
    int lit = static_cast<int>(nodes_.size() - 1) * 2;
    index_.emplace(std::move(kept), lit);
    return lit;
  }

  int disj(std::vector<int> lits) {
    for (auto& l : lits) l = neg(l);
    return neg(conj(std::move(lits)));
  }

  const std::vector<Node>& nodes() const { return nodes_; }

 private:
  std::vector<Node> nodes_;
  std::map<std::vector<int>, int> index_;
};

// Compiles a closed formula over unary relations into a circuit whose inputs
// say which points of B^n belong to the domain. Quantifiers expand over all
// points, guarded by the point's input; subformula results are shared per
// valuation of their free variables.
class Compiler {
 public:
  Compiler(Circuit& c, std::vector<std::string> rels, std::size_t points)
      : c_(c), rels_(std::move(rels)), points_(points) {
    for (std::size_t u = 0; u < points_; ++u) inputs_.push_back(c_.input());
  }

  const std::vector<int>& inputs() const { return inputs_; }

  int build(const Formula& f) {
    std::vector<std::uint32_t> env;
    return go(f, env);
  }

 private:
  struct Key {
    const void* node;
    std::vector<std::uint32_t> vals;
    bool operator==(const Key& o) const { return node == o.node && vals == o.vals; }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::size_t h = std::hash<const void*>()(k.node);
      for (auto v : k.vals) h = h * 1000003u ^ v;
      return h;
    }
  };

  const std::vector<std::size_t>& fv(const Formula& f) {
    auto it = fv_.find(f.id());
    if (it != fv_.end()) return it->second;
    return fv_.emplace(f.id(), free_vars(f)).first->second;
  }

  std::uint32_t lookup(const std::vector<std::uint32_t>& env, std::size_t i) const {
    if (i >= env.size()) throw PreconditionError("monadic base formula is not closed");
    return env[env.size() - 1 - i];
  }

  int go(const Formula& f, std::vector<std::uint32_t>& env) {
    switch (f.kind()) {
      case Formula::Kind::Falsum:
        return Circuit::kFalse;
      case Formula::Kind::Atom: {
        std::size_t r = static_cast<std::size_t>(std::find(rels_.begin(), rels_.end(), f.rel()) - rels_.begin());
        const Term& t = f.args().at(0);
        if (!t.is_var()) throw PreconditionError("monadic base formula contains a function term");
        return (lookup(env, t.var) >> r & 1) ? Circuit::kTrue : Circuit::kFalse;
      }
      case Formula::Kind::Bin: {
        int l = go(f.lhs(), env);
        int r = go(f.rhs(), env);
        switch (f.op()) {
          case BinOp::And:
            return c_.conj({l, r});
          case BinOp::Or:
            return c_.disj({l, r});
          case BinOp::Impl:
            return c_.disj({Circuit::neg(l), r});
        }
        return Circuit::kFalse;
      }
      case Formula::Kind::Quant: {
        Key key{f.id(), {}};
        for (std::size_t i : fv(f)) key.vals.push_back(lookup(env, i));
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        std::vector<int> parts;
        parts.reserve(points_);
        for (std::uint32_t u = 0; u < points_; ++u) {
          env.push_back(u);
          int b = go(f.body(), env);
          env.pop_back();
          if (f.quantifier() == Quant::Ex)
            parts.push_back(c_.conj({inputs_[u], b}));
          else
            parts.push_back(c_.disj({Circuit::neg(inputs_[u]), b}));
        }
        int out = f.quantifier() == Quant::Ex ? c_.disj(std::move(parts)) : c_.conj(std::move(parts));
        memo_.emplace(std::move(key), out);
        return out;
      }
    }
    return Circuit::kFalse;
  }

  Circuit& c_;
  std::vector<std::string> rels_;
  std::size_t points_;
  std::vector<int> inputs_;
  std::unordered_map<const void*, std::vector<std::size_t>> fv_;
  std::unordered_map<Key, int, KeyHash> memo_;
};

// Chronological backtracking search with two-watched-literal unit propagation.
class Dpll {
 public:
  explicit Dpll(std::size_t nvars) : assign_(nvars, -1), watches_(2 * nvars) {}

  void add_clause(std::vector<int> c) {
    if (c.empty()) {
      trivially_unsat_ = true;
      return;
    }
    if (c.size() == 1) {
      units_.push_back(c[0]);
      return;
    }
    int id = static_cast<int>(clauses_.size());
    watches_[c[0]].push_back(id);
    watches_[c[1]].push_back(id);
    clauses_.push_back(std::move(c));
  }

  /// Assignment of every variable on success.
  std::optional<std::vector<std::int8_t>> solve(const std::vector<int>& decision_vars, std::uint64_t max_nodes,
                                                std::size_t& nodes) {
    if (trivially_unsat_) return std::nullopt;
    for (int u : units_)
      if (!enqueue(u)) return std::nullopt;
    if (!propagate()) return std::nullopt;
    std::vector<std::size_t> lim;
    std::vector<std::pair<int, bool>> decisions;
    while (true) {
      int v = -1;
      for (int d : decision_vars)
        if (assign_[static_cast<std::size_t>(d)] < 0) {
          v = d;
          break;
        }
      if (v < 0) return assign_;
      if (++nodes > max_nodes) throw ResourceError("monadic search exceeded its node budget");
      lim.push_back(trail_.size());
      decisions.push_back({v, false});
      enqueue(2 * v + 1);
      while (!propagate()) {
        while (true) {
          if (decisions.empty()) return std::nullopt;
          auto [dv, flipped] = decisions.back();
          undo(lim.back());
          lim.pop_back();
          decisions.pop_back();
          if (!flipped) {
            lim.push_back(trail_.size());
            decisions.push_back({dv, true});
            enqueue(2 * dv);
            break;
          }
        }
      }
    }
  }

 private:
  int value(int lit) const {
    int a = assign_[static_cast<std::size_t>(lit >> 1)];
    return a < 0 ? -1 : (a ^ (lit & 1));
  }

  bool enqueue(int lit) {
    int v = value(lit);
    if (v == 0) return false;
    if (v == 1) return true;
    assign_[static_cast<std::size_t>(lit >> 1)] = static_cast<std::int8_t>(1 ^ (lit & 1));
    trail_.push_back(lit);
    return true;
  }

  void undo(std::size_t to) {
    while (trail_.size() > to) {
      assign_[static_cast<std::size_t>(trail_.back() >> 1)] = -1;
      trail_.pop_back();
    }
    qhead_ = std::min(qhead_, to);
  }

  bool propagate() {
    while (qhead_ < trail_.size()) {
      int false_lit = trail_[qhead_++] ^ 1;
      auto& ws = watches_[static_cast<std::size_t>(false_lit)];
      std::size_t i = 0, j = 0;
      while (i < ws.size()) {
        int ci = ws[i];
        auto& c = clauses_[static_cast<std::size_t>(ci)];
        if (c[0] == false_lit) std::swap(c[0], c[1]);
        if (value(c[0]) == 1) {
          ws[j++] = ws[i++];
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k)
          if (value(c[k]) != 0) {
            std::swap(c[1], c[k]);
            watches_[static_cast<std::size_t>(c[1])].push_back(ci);
            moved = true;
            break;
          }
        if (moved) {
          ++i;
          continue;
        }
        ws[j++] = ws[i++];
        if (value(c[0]) == 0) {
          while (i < ws.size()) ws[j++] = ws[i++];
          ws.resize(j);
          return false;
        }
        enqueue(c[0]);
      }
      ws.resize(j);
    }
    return true;
  }

  std::vector<std::int8_t> assign_;
  std::vector<std::vector<int>> watches_;
  std::vector<std::vector<int>> clauses_;
  std::vector<int> units_;
  std::vector<int> trail_;
  std::size_t qhead_ = 0;
  bool trivially_unsat_ = false;
};

constexpr std::uint64_t kMaxSearchNodes = 20'000'000;

// Values for the free variables of phi, chosen one at a time from the
// outermost existential inwards so that each choice keeps the rest satisfiable.
Env choose_witnesses(const FinModel& m, const Formula& phi) {
  std::size_t N = free_bound(phi);
  std::vector<Elem> vals(N, 0);
  for (std::size_t j = N; j-- > 0;) {
    Formula chi = exists_n(j, phi);
    Evaluator ev(m, chi);
    Env e;
    e.prefix.assign(N - j, 0);
    for (std::size_t i = j + 1; i < N; ++i) e.prefix[i - j] = vals[i];
    bool found = false;
    for (Elem x = 0; x < m.size() && !found; ++x) {
      e.prefix[0] = x;
      if (ev(e)) {
        vals[j] = x;
        found = true;
      }
    }
    if (!found) throw std::logic_error("monadic witness lost during free variable selection");
  }
  Env out;
  out.prefix = vals;
  return out;
}

}  // namespace

namespace {

bool mentions_bound(const Formula& f) {
  auto fv = free_vars(f);
  return !fv.empty() && fv.front() == 0;
}

Formula drop_binder(const Formula& f) { return shift(f, 0, -1); }

void flatten(const Formula& f, BinOp op, std::vector<Formula>& out) {
  if (f.kind() == Formula::Kind::Bin && f.op() == op) {
    flatten(f.lhs(), op, out);
    flatten(f.rhs(), op, out);
  } else {
    out.push_back(f);
  }
}

Formula join(BinOp op, const std::vector<Formula>& parts) {
  Formula acc = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) acc = Formula::bin(op, parts[i], acc);
  return acc;
}

// Moves a quantifier inward past subformulas that do not mention its variable.
// Expansion over 2^n points costs the product of the nested domain sizes, so
// separating independent quantifiers turns a product into a sum.
Formula push_quant(Quant q, const Formula& b) {
  if (!mentions_bound(b)) return drop_binder(b);
  if (b.kind() == Formula::Kind::Bin) {
    BinOp op = b.op();
    if (q == Quant::Ex && op == BinOp::Or) return disj(push_quant(q, b.lhs()), push_quant(q, b.rhs()));
    if (q == Quant::All && op == BinOp::And) return conj(push_quant(q, b.lhs()), push_quant(q, b.rhs()));
    if (q == Quant::Ex && op == BinOp::Impl)
      return impl(push_quant(Quant::All, b.lhs()), push_quant(Quant::Ex, b.rhs()));
    if (op == BinOp::Impl) {
      if (!mentions_bound(b.lhs())) return impl(drop_binder(b.lhs()), push_quant(q, b.rhs()));
      if (!mentions_bound(b.rhs())) return impl(push_quant(Quant::Ex, b.lhs()), drop_binder(b.rhs()));
    } else {
      std::vector<Formula> parts, outside, inside;
      flatten(b, op, parts);
      for (const auto& p : parts) {
        if (mentions_bound(p))
          inside.push_back(p);
        else
          outside.push_back(drop_binder(p));
      }
      if (!outside.empty()) {
        outside.push_back(push_quant(q, join(op, inside)));
        return join(op, outside);
      }
    }
  }
  return Formula::quant(q, b);
}

Formula miniscope(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Bin:
      return Formula::bin(f.op(), miniscope(f.lhs()), miniscope(f.rhs()));
    case Formula::Kind::Quant:
      return push_quant(f.quantifier(), miniscope(f.body()));
    default:
      return f;
  }
}

}  // namespace

MonadicResult decide_monadic_base(const Formula& phi, const Signature& sig, const MonadicOptions& opts) {
  check_well_formed(phi, sig);
  if (!sig.functions().empty()) throw PreconditionError("monadic base signature must be function-free");
  std::vector<std::string> rels;
  for (const auto& r : sig.relations()) {
    if (r.arity != 1) throw PreconditionError("monadic base relations must be unary");
    rels.push_back(r.name);
  }
  std::size_t n = rels.size();
  if (n > opts.max_predicates)
    throw ResourceError("monadic base problem has " + std::to_string(n) + " predicates, above the guard of " +
                        std::to_string(opts.max_predicates));
  std::size_t points = std::size_t{1} << n;

  MonadicResult res;
  res.base_predicates = n;
  Formula closed = miniscope(exists_n(free_bound(phi), phi));

  Circuit circuit;
  Compiler comp(circuit, rels, points);
  int root = comp.build(closed);
  if (root == Circuit::kFalse) return res;

  const auto& nodes = circuit.nodes();
  Dpll solver(nodes.size());
  solver.add_clause({Circuit::kTrue});
  for (std::size_t g = 1; g < nodes.size(); ++g) {
    if (nodes[g].input) continue;
    int gl = static_cast<int>(g) * 2;
    std::vector<int> big{gl};
    for (int kid : nodes[g].kids) {
      solver.add_clause({Circuit::neg(gl), kid});
      big.push_back(Circuit::neg(kid));
    }
    solver.add_clause(std::move(big));
  }
  solver.add_clause({root});
  solver.add_clause(comp.inputs());

  std::vector<int> decision_vars;
  for (int l : comp.inputs()) decision_vars.push_back(l >> 1);
  auto model = solver.solve(decision_vars, kMaxSearchNodes, res.search_nodes);
  if (!model) return res;

  std::vector<std::uint32_t> chosen;
  for (std::size_t u = 0; u < points; ++u)
    if ((*model)[static_cast<std::size_t>(comp.inputs()[u] >> 1)] == 1) chosen.push_back(static_cast<std::uint32_t>(u));
  FinModel m(chosen.size());
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<std::uint8_t> bits(chosen.size());
    for (std::size_t x = 0; x < chosen.size(); ++x) bits[x] = chosen[x] >> r & 1;
    m.set_relation(rels[r], 1, std::move(bits));
  }
  Env env = choose_witnesses(m, phi);
  if (!eval_formula(m, env, phi)) throw std::logic_error("monadic witness failed re-check");
  res.sat = true;
  res.witness = Interpretation{std::move(m), std::move(env)};
  return res;
}

MonadicResult decide_monadic_full(const Formula& phi, const Signature& sig, const MonadicOptions& opts) {
  check_well_formed(phi, sig);
  bool monadic = true, propositional = true;
  for (const auto& f : sig.functions()) monadic = monadic && f.arity <= 1;
  for (const auto& r : sig.relations()) {
    monadic = monadic && r.arity <= 1;
    propositional = propositional && r.arity == 0;
  }
  if (!monadic && !propositional)
    throw PreconditionError("signature is neither monadic nor propositional");

  std::vector<ReductionStep> steps;
  Formula cur = phi;
  Signature cur_sig = sig;
  auto push = [&](ReductionStep s) {
    cur = s.target;
    cur_sig = s.target_sig;
    steps.push_back(std::move(s));
  };
  if (!monadic) push(propositional_collapse(cur, cur_sig));
  push(lift_arity0_to1(cur, cur_sig));
  push(compact_symbols(cur, cur_sig));
  push(remove_monadic_functions(cur, cur_sig));

  MonadicResult res = decide_monadic_base(cur, cur_sig, opts);
  for (const auto& s : steps) res.steps.push_back(s.name);
  if (!res.sat) return res;
  Interpretation back = backward_through(steps, *res.witness);
  if (!eval_formula(back.model, back.env, phi)) throw std::logic_error("transported monadic witness failed re-check");
  res.witness = std::move(back);
  return res;
}

}  // namespace fsat
