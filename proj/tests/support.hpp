#pragma once

#include <random>

#include "fsat/logic.hpp"
#include "fsat/semantics.hpp"

namespace fsat::testing {

/// Random well-formed formulas over a signature. `depth` bounds the nesting of
/// connectives and quantifiers; free variables are drawn from 0..free_vars-1.
class FormulaGen {
 public:
  FormulaGen(Signature sig, std::uint64_t seed, std::size_t free_vars = 2, std::size_t term_depth = 2)
      : sig_(std::move(sig)), rng_(seed), free_(free_vars), term_depth_(term_depth) {}

  Formula formula(std::size_t depth, std::size_t binders = 0) {
    std::size_t roll = pick(10);
    if (depth == 0 || roll < 2) {
      if (auto a = atom(binders)) return *a;
      if (depth == 0) return Formula::falsum();
      return Formula::quant(pick(2) ? Quant::All : Quant::Ex, formula(depth - 1, binders + 1));
    }
    if (roll < 3) return Formula::falsum();
    if (roll < 7) {
      static const BinOp ops[] = {BinOp::Impl, BinOp::And, BinOp::Or};
      return Formula::bin(ops[pick(3)], formula(depth - 1, binders), formula(depth - 1, binders));
    }
    return Formula::quant(pick(2) ? Quant::All : Quant::Ex, formula(depth - 1, binders + 1));
  }

  /// Closed formula with at least one quantifier at the top.
  Formula closed(std::size_t depth) {
    std::size_t saved = free_;
    free_ = 0;
    Formula f = Formula::quant(pick(2) ? Quant::All : Quant::Ex, formula(depth - 1, 1));
    free_ = saved;
    return f;
  }

  std::mt19937_64& rng() { return rng_; }
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

 private:
  std::optional<Term> term(std::size_t binders, std::size_t depth) {
    std::size_t vars = binders + free_;
    std::vector<const Symbol*> fns;
    for (const auto& f : sig_.functions())
      if (depth > 0 || f.arity == 0) fns.push_back(&f);
    if (vars == 0 && fns.empty()) return std::nullopt;
    if (fns.empty() || (vars > 0 && pick(2) == 0)) return var(pick(vars));
    const Symbol* f = fns[pick(fns.size())];
    std::vector<Term> args;
    for (std::size_t i = 0; i < f->arity; ++i) {
      auto t = term(binders, depth - 1);
      if (!t) return std::nullopt;
      args.push_back(*t);
    }
    return Term::apply(f->name, std::move(args));
  }

  std::optional<Formula> atom(std::size_t binders) {
    if (sig_.relations().empty()) return std::nullopt;
    const Symbol& r = sig_.relations()[pick(sig_.relations().size())];
    std::vector<Term> args;
    for (std::size_t i = 0; i < r.arity; ++i) {
      auto t = term(binders, term_depth_);
      if (!t) return std::nullopt;
      args.push_back(*t);
    }
    return Formula::atom(r.name, std::move(args));
  }

  Signature sig_;
  std::mt19937_64 rng_;
  std::size_t free_;
  std::size_t term_depth_;
};

/// Random tables for every symbol of `sig` over k elements.
inline FinModel random_model(const Signature& sig, std::size_t k, std::mt19937_64& rng) {
  FinModel m(k);
  std::uniform_int_distribution<Elem> el(0, static_cast<Elem>(k - 1));
  for (const auto& f : sig.functions()) {
    std::vector<Elem> t(table_length(k, f.arity));
    for (auto& x : t) x = el(rng);
    m.set_function(f.name, f.arity, std::move(t));
  }
  for (const auto& r : sig.relations()) {
    std::vector<std::uint8_t> t(table_length(k, r.arity));
    for (auto& x : t) x = rng() & 1;
    m.set_relation(r.name, r.arity, std::move(t));
  }
  return m;
}

inline Env random_env(std::size_t n, std::size_t k, std::mt19937_64& rng) {
  Env e;
  for (std::size_t i = 0; i < n; ++i) e.prefix.push_back(static_cast<Elem>(rng() % k));
  e.fallback = static_cast<Elem>(rng() % k);
  return e;
}

/// Direct recursive reading of the satisfaction clauses, independent of Evaluator.
inline Elem naive_term(const FinModel& m, const std::vector<Elem>& stack, const Env& env, const Term& t) {
  if (t.is_var()) return t.var < stack.size() ? stack[stack.size() - 1 - t.var] : env.lookup(t.var - stack.size());
  std::vector<Elem> args;
  for (const auto& a : t.args) args.push_back(naive_term(m, stack, env, a));
  return m.apply(t.fn, args);
}

inline bool naive_eval(const FinModel& m, std::vector<Elem>& stack, const Env& env, const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Falsum:
      return false;
    case Formula::Kind::Atom: {
      std::vector<Elem> args;
      for (const auto& a : f.args()) args.push_back(naive_term(m, stack, env, a));
      return m.holds(f.rel(), args);
    }
    case Formula::Kind::Bin: {
      bool l = naive_eval(m, stack, env, f.lhs()), r = naive_eval(m, stack, env, f.rhs());
      switch (f.op()) {
        case BinOp::And:
          return l && r;
        case BinOp::Or:
          return l || r;
        case BinOp::Impl:
          return !l || r;
      }
      return false;
    }
    case Formula::Kind::Quant: {
      bool all = true, any = false;
      for (Elem a = 0; a < m.size(); ++a) {
        stack.push_back(a);
        bool v = naive_eval(m, stack, env, f.body());
        stack.pop_back();
        all = all && v;
        any = any || v;
      }
      return f.quantifier() == Quant::All ? all : any;
    }
  }
  return false;
}

inline bool naive_eval(const FinModel& m, const Env& env, const Formula& f) {
  std::vector<Elem> stack;
  return naive_eval(m, stack, env, f);
}

}  // namespace fsat::testing
