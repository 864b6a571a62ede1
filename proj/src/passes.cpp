#include "fsat/passes.hpp"

#include <algorithm>
#include <map>

#include "fsat/bisim.hpp"
#include "fsat/hfs.hpp"
#include "pass_util.hpp"

namespace fsat {

namespace detail {

Formula rebuild(const Formula& phi, const AtomMap& atom, const QuantMap& quant, std::size_t depth) {
  switch (phi.kind()) {
    case Formula::Kind::Falsum:
      return phi;
    case Formula::Kind::Atom:
      return atom(phi, depth);
    case Formula::Kind::Bin:
      return Formula::bin(phi.op(), rebuild(phi.lhs(), atom, quant, depth), rebuild(phi.rhs(), atom, quant, depth));
    case Formula::Kind::Quant: {
      Formula body = rebuild(phi.body(), atom, quant, depth + 1);
      return quant ? quant(phi.quantifier(), std::move(body), depth) : Formula::quant(phi.quantifier(), body);
    }
  }
  return phi;
}

Term map_term(const Term& t, std::size_t depth, const TermMap& fn) {
  if (auto r = fn(t, depth)) return *r;
  if (t.is_var()) return t;
  std::vector<Term> args;
  for (const auto& a : t.args) args.push_back(map_term(a, depth, fn));
  return Term::apply(t.fn, std::move(args));
}

Formula map_terms(const Formula& phi, const TermMap& fn) {
  return rebuild(phi, [&](const Formula& a, std::size_t depth) {
    std::vector<Term> args;
    for (const auto& t : a.args()) args.push_back(map_term(t, depth, fn));
    return Formula::atom(a.rel(), std::move(args));
  });
}

void copy_tables(const FinModel& in, FinModel& out, const std::vector<std::string>& skip) {
  auto skipped = [&](const std::string& n) { return std::find(skip.begin(), skip.end(), n) != skip.end(); };
  for (const auto& [n, f] : in.functions())
    if (!skipped(n)) out.set_function(n, f.arity, f.table);
  for (const auto& [n, r] : in.relations())
    if (!skipped(n)) out.set_relation(n, r.arity, r.bits);
}

FinModel complete_model(const Signature& sig, std::size_t k, const FinModel* from) {
  FinModel out(k);
  for (const auto& f : sig.functions()) {
    const FunTable* t = from ? from->function(f.name) : nullptr;
    if (t && t->arity == f.arity && from->size() == k)
      out.set_function(f.name, f.arity, t->table);
    else
      out.add_zero_function(f.name, f.arity);
  }
  for (const auto& r : sig.relations()) {
    const RelTable* t = from ? from->relation(r.name) : nullptr;
    if (t && t->arity == r.arity && from->size() == k)
      out.set_relation(r.name, r.arity, t->bits);
    else
      out.add_empty_relation(r.name, r.arity);
  }
  return out;
}

void fail_pre(const std::string& pass, const std::string& why) { throw PreconditionError(pass + ": " + why); }

}  // namespace detail

using namespace detail;

namespace {

Formula rel_atom(const std::string& r, std::vector<Term> args) { return Formula::atom(r, std::move(args)); }

Term sh(const Term& t, long by = 1) { return shift(t, 0, by); }

std::vector<Term> sh(const std::vector<Term>& v, long by = 1) {
  std::vector<Term> out;
  for (const auto& t : v) out.push_back(sh(t, by));
  return out;
}

Formula in(const Term& a, const Term& b) { return rel_atom(kMembership, {a, b}); }

Interpretation map_env(Interpretation out, const Env& env, const std::function<Elem(Elem)>& f) {
  out.env.prefix.clear();
  for (Elem v : env.prefix) out.env.prefix.push_back(f(v));
  out.env.fallback = f(env.fallback);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

ReductionStep compact_symbols(const Formula& phi, const Signature& sig) {
  check_well_formed(phi, sig);
  auto used = symbols_of(phi);
  std::map<std::string, std::string> fmap, rmap;
  Signature target;
  for (std::size_t i = 0; i < used.functions.size(); ++i) {
    fmap[used.functions[i]] = "f" + std::to_string(i);
    target.add_function("f" + std::to_string(i), *sig.function_arity(used.functions[i]));
  }
  for (std::size_t i = 0; i < used.relations.size(); ++i) {
    rmap[used.relations[i]] = "P" + std::to_string(i);
    target.add_relation("P" + std::to_string(i), *sig.relation_arity(used.relations[i]));
  }
  std::function<Term(const Term&)> ren = [&](const Term& t) -> Term {
    if (t.is_var()) return t;
    std::vector<Term> args;
    for (const auto& a : t.args) args.push_back(ren(a));
    return Term::apply(fmap.at(t.fn), std::move(args));
  };
  Formula renamed = rebuild(phi, [&](const Formula& a, std::size_t) {
    std::vector<Term> args;
    for (const auto& t : a.args()) args.push_back(ren(t));
    return Formula::atom(rmap.at(a.rel()), std::move(args));
  });

  ReductionStep s;
  s.name = "compact_symbols";
  s.source_sig = sig;
  s.target_sig = target;
  s.source = phi;
  s.target = renamed;
  s.forward = [fmap, rmap](const Interpretation& in) {
    FinModel out(in.model.size());
    for (const auto& [from, to] : fmap) {
      const FunTable* t = in.model.function(from);
      if (!t) fail_pre("compact_symbols", "model lacks function '" + from + "'");
      out.set_function(to, t->arity, t->table);
    }
    for (const auto& [from, to] : rmap) {
      const RelTable* t = in.model.relation(from);
      if (!t) fail_pre("compact_symbols", "model lacks relation '" + from + "'");
      out.set_relation(to, t->arity, t->bits);
    }
    return Interpretation{std::move(out), in.env};
  };
  s.backward = [sig, fmap, rmap](const Interpretation& in) {
    FinModel renamed_in(in.model.size());
    for (const auto& [from, to] : fmap) {
      const FunTable* t = in.model.function(to);
      if (!t) fail_pre("compact_symbols", "model lacks function '" + to + "'");
      renamed_in.set_function(from, t->arity, t->table);
    }
    for (const auto& [from, to] : rmap) {
      const RelTable* t = in.model.relation(to);
      if (!t) fail_pre("compact_symbols", "model lacks relation '" + to + "'");
      renamed_in.set_relation(from, t->arity, t->bits);
    }
    return Interpretation{complete_model(sig, in.model.size(), &renamed_in), in.env};
  };
  return s;
}

// ---------------------------------------------------------------------------

ReductionStep remove_functions(const Formula& phi, const Signature& sig) {
  check_well_formed(phi, sig);
  auto used = symbols_of(phi);
  Signature names = sig;
  Signature target;
  for (const auto& r : sig.relations())
    if (std::find(used.relations.begin(), used.relations.end(), r.name) != used.relations.end())
      target.add_relation(r.name, r.arity);
  std::string eq = names.fresh_name("eq");
  names.add_relation(eq, 2);
  target.add_relation(eq, 2);
  std::map<std::string, std::string> graph;
  std::vector<Symbol> funs;
  for (const auto& f : sig.functions()) {
    if (std::find(used.functions.begin(), used.functions.end(), f.name) == used.functions.end()) continue;
    std::string g = names.fresh_name("G_" + f.name);
    names.add_relation(g, f.arity + 1);
    target.add_relation(g, f.arity + 1);
    graph[f.name] = g;
    funs.push_back(f);
  }

  auto flatten = [&](const Formula& a, std::size_t) -> Formula {
    std::size_t m = 0;
    std::function<void(const Term&)> count = [&](const Term& t) {
      if (t.is_var()) return;
      ++m;
      for (const auto& x : t.args) count(x);
    };
    for (const auto& t : a.args()) count(t);
    if (m == 0) return a;
    std::vector<Formula> defs;
    std::size_t next = 0;
    std::function<Term(const Term&)> go = [&](const Term& t) -> Term {
      if (t.is_var()) return var(t.var + m);
      std::vector<Term> args;
      for (const auto& x : t.args) args.push_back(go(x));
      Term w = var(m - 1 - next++);
      args.push_back(w);
      defs.push_back(rel_atom(graph.at(t.fn), std::move(args)));
      return w;
    };
    std::vector<Term> args;
    for (const auto& t : a.args()) args.push_back(go(t));
    defs.push_back(rel_atom(a.rel(), std::move(args)));
    return exists_n(m, conj_all(defs));
  };

  std::vector<Formula> parts{rebuild(phi, flatten)};
  for (const auto& f : funs) {
    std::size_t a = f.arity;
    const std::string& g = graph.at(f.name);
    std::vector<Term> tot;
    for (std::size_t j = 0; j < a; ++j) tot.push_back(var(a - j));
    tot.push_back(var(0));
    parts.push_back(forall_n(a, exists(rel_atom(g, tot))));
    std::vector<Term> lhs, rhs;
    for (std::size_t j = 0; j < a; ++j) {
      lhs.push_back(var(a + 1 - j));
      rhs.push_back(var(a + 1 - j));
    }
    lhs.push_back(var(1));
    rhs.push_back(var(0));
    parts.push_back(forall_n(a + 2, impl(rel_atom(g, lhs), impl(rel_atom(g, rhs), rel_atom(eq, {var(1), var(0)})))));
  }

  ReductionStep s;
  s.name = "remove_functions";
  s.source_sig = sig;
  s.target_sig = target;
  s.source = phi;
  s.target = conj_all(parts);
  s.forward = [target, graph, eq](const Interpretation& in) {
    std::size_t k = in.model.size();
    FinModel out = complete_model(target, k, &in.model);
    for (Elem x = 0; x < k; ++x) out.set_holds(eq, {x, x}, true);
    for (const auto& [f, g] : graph) {
      const FunTable* t = in.model.function(f);
      if (!t) fail_pre("remove_functions", "model lacks function '" + f + "'");
      RelTable* gt = out.mutable_relation(g);
      std::fill(gt->bits.begin(), gt->bits.end(), 0);
      for (std::size_t i = 0; i < t->table.size(); ++i) gt->bits[i * k + t->table[i]] = 1;
    }
    return Interpretation{std::move(out), in.env};
  };
  s.backward = [sig, graph, eq](const Interpretation& in) {
    std::size_t k = in.model.size();
    for (Elem x = 0; x < k; ++x)
      for (Elem y = 0; y < k; ++y)
        if (in.model.holds(eq, {x, y}) != (x == y))
          fail_pre("remove_functions", "equality symbol is not interpreted as the identity");
    FinModel out = complete_model(sig, k, &in.model);
    for (const auto& [f, g] : graph) {
      const RelTable* gt = in.model.relation(g);
      FunTable* t = out.mutable_function(f);
      for (std::size_t i = 0; i < t->table.size(); ++i) {
        std::optional<Elem> w;
        for (Elem y = 0; y < k; ++y)
          if (gt->bits[i * k + y]) {
            if (w) fail_pre("remove_functions", "graph of '" + f + "' is not functional");
            w = y;
          }
        if (!w) fail_pre("remove_functions", "graph of '" + f + "' is not total");
        t->table[i] = *w;
      }
    }
    return Interpretation{std::move(out), in.env};
  };
  return s;
}

// ---------------------------------------------------------------------------

ReductionStep add_congruence(const Formula& phi, const Signature& sig, const std::string& eq) {
  check_well_formed(phi, sig);
  auto ar = sig.relation_arity(eq);
  if (!ar || *ar != 2) fail_pre("add_congruence", "'" + eq + "' must be a declared binary relation");
  auto E = [&](Term a, Term b) { return rel_atom(eq, {std::move(a), std::move(b)}); };

  std::vector<Formula> parts{phi};
  parts.push_back(forall(E(var(0), var(0))));
  parts.push_back(forall_n(2, impl(E(var(1), var(0)), E(var(0), var(1)))));
  parts.push_back(forall_n(3, impl(E(var(2), var(1)), impl(E(var(1), var(0)), E(var(2), var(0))))));

  // Binders x_0..x_{a-1}, y_0..y_{a-1}.
  auto congruence = [&](std::size_t a, const std::function<Formula(std::vector<Term>, std::vector<Term>)>& concl) {
    std::vector<Term> xs, ys;
    std::vector<Formula> hyps;
    for (std::size_t j = 0; j < a; ++j) {
      xs.push_back(var(2 * a - 1 - j));
      ys.push_back(var(a - 1 - j));
      hyps.push_back(E(xs.back(), ys.back()));
    }
    Formula c = concl(xs, ys);
    return forall_n(2 * a, a == 0 ? c : impl(conj_all(hyps), c));
  };
  auto used = symbols_of(phi);
  for (const auto& f : used.functions) {
    std::size_t a = *sig.function_arity(f);
    parts.push_back(congruence(a, [&](std::vector<Term> xs, std::vector<Term> ys) {
      return E(Term::apply(f, std::move(xs)), Term::apply(f, std::move(ys)));
    }));
  }
  for (const auto& p : used.relations) {
    std::size_t a = *sig.relation_arity(p);
    parts.push_back(congruence(a, [&](std::vector<Term> xs, std::vector<Term> ys) {
      return iff(rel_atom(p, std::move(xs)), rel_atom(p, std::move(ys)));
    }));
  }

  ReductionStep s;
  s.name = "add_congruence";
  s.source_sig = sig;
  s.target_sig = sig;
  s.source = phi;
  s.target = conj_all(parts);
  s.forward = [sig, eq](const Interpretation& in) {
    std::size_t k = in.model.size();
    FinModel out = complete_model(sig, k, &in.model);
    RelTable* t = out.mutable_relation(eq);
    std::fill(t->bits.begin(), t->bits.end(), 0);
    for (Elem x = 0; x < k; ++x) out.set_holds(eq, {x, x}, true);
    return Interpretation{std::move(out), in.env};
  };
  s.backward = [sig, eq](const Interpretation& in) {
    std::size_t k = in.model.size();
    PairRelation R(k);
    for (Elem x = 0; x < k; ++x)
      for (Elem y = 0; y < k; ++y) R.set(x, y, in.model.holds(eq, {x, y}));
    if (!R.is_equivalence()) fail_pre("add_congruence", "'" + eq + "' is not an equivalence in the model");
    auto q = quotient_model(complete_model(sig, k, &in.model), in.env, R);
    return q;
  };
  return s;
}

// ---------------------------------------------------------------------------

ReductionStep uniformize_arity(const Formula& phi, const Signature& sig, std::size_t n) {
  check_well_formed(phi, sig);
  Signature target;
  for (const auto& f : sig.functions()) target.add_function(f.name, f.arity);
  for (const auto& r : sig.relations()) {
    if (r.arity > n)
      fail_pre("uniformize_arity", "relation '" + r.name + "' has arity " + std::to_string(r.arity) + " > " +
                                       std::to_string(n));
    target.add_relation(r.name, n);
  }
  std::size_t N = free_bound(phi);
  bool uses_fresh = false;
  Formula out = rebuild(phi, [&](const Formula& a, std::size_t depth) {
    std::vector<Term> args = a.args();
    if (args.size() == n) return a;
    if (args.empty()) {
      uses_fresh = true;
      args.assign(n, var(N + depth));
    } else {
      Term last = args.back();
      args.resize(n, last);
    }
    return Formula::atom(a.rel(), std::move(args));
  });

  ReductionStep s;
  s.name = "uniformize_arity";
  s.source_sig = sig;
  s.target_sig = target;
  s.source = phi;
  s.target = out;
  if (uses_fresh) s.reserved = {N};
  s.forward = [sig, n](const Interpretation& in) {
    std::size_t k = in.model.size();
    FinModel out(k);
    for (const auto& f : sig.functions()) {
      const FunTable* t = in.model.function(f.name);
      if (!t) fail_pre("uniformize_arity", "model lacks function '" + f.name + "'");
      out.set_function(f.name, f.arity, t->table);
    }
    for (const auto& r : sig.relations()) {
      const RelTable* t = in.model.relation(r.name);
      if (!t) fail_pre("uniformize_arity", "model lacks relation '" + r.name + "'");
      std::vector<std::uint8_t> bits(table_length(k, n));
      for (std::size_t i = 0; i < bits.size(); ++i) {
        auto w = tuple_at(i, n, k);
        w.resize(r.arity);
        bits[i] = t->bits[tuple_index(w, k)];
      }
      out.set_relation(r.name, n, std::move(bits));
    }
    return Interpretation{std::move(out), in.env};
  };
  s.backward = [sig, n, N](const Interpretation& in) {
    std::size_t k = in.model.size();
    FinModel out(k);
    for (const auto& f : sig.functions()) {
      const FunTable* t = in.model.function(f.name);
      if (!t) fail_pre("uniformize_arity", "model lacks function '" + f.name + "'");
      out.set_function(f.name, f.arity, t->table);
    }
    for (const auto& r : sig.relations()) {
      const RelTable* t = in.model.relation(r.name);
      if (!t || t->arity != n) fail_pre("uniformize_arity", "model lacks relation '" + r.name + "'");
      std::vector<std::uint8_t> bits(table_length(k, r.arity));
      for (std::size_t i = 0; i < bits.size(); ++i) {
        auto v = tuple_at(i, r.arity, k);
        if (v.empty())
          v.assign(n, in.env.lookup(N));
        else
          v.resize(n, v.back());
        bits[i] = t->bits[tuple_index(v, k)];
      }
      out.set_relation(r.name, r.arity, std::move(bits));
    }
    return Interpretation{std::move(out), in.env};
  };
  return s;
}

// ---------------------------------------------------------------------------

ReductionStep merge_relations(const Formula& phi, const Signature& sig) {
  check_well_formed(phi, sig);
  if (!sig.functions().empty()) fail_pre("merge_relations", "source signature must be function-free");
  std::size_t n = sig.relations().empty() ? 0 : sig.relations().front().arity;
  for (const auto& r : sig.relations())
    if (r.arity != n) fail_pre("merge_relations", "relation arities are not uniform");
  Signature names = sig;
  Signature target;
  std::vector<std::string> rels, consts;
  for (const auto& r : sig.relations()) {
    std::string c = names.fresh_name("c_" + r.name);
    names.add_function(c, 0);
    target.add_function(c, 0);
    rels.push_back(r.name);
    consts.push_back(c);
  }
  std::string Q = names.fresh_name("Q");
  target.add_relation(Q, n + 1);
  std::map<std::string, std::string> const_of;
  for (std::size_t i = 0; i < rels.size(); ++i) const_of[rels[i]] = consts[i];

  Formula out = rebuild(phi, [&](const Formula& a, std::size_t) {
    std::vector<Term> args{Term::apply(const_of.at(a.rel()))};
    for (const auto& t : a.args()) args.push_back(t);
    return rel_atom(Q, std::move(args));
  });

  ReductionStep s;
  s.name = "merge_relations";
  s.source_sig = sig;
  s.target_sig = target;
  s.source = phi;
  s.target = out;
  s.forward = [rels, consts, Q, n](const Interpretation& in) {
    std::size_t k = in.model.size();
    std::size_t kk = k + rels.size();
    FinModel out(kk);
    for (std::size_t i = 0; i < rels.size(); ++i) out.set_function(consts[i], 0, {static_cast<Elem>(k + i)});
    std::vector<std::uint8_t> bits(table_length(kk, n + 1), 0);
    std::vector<const RelTable*> tables;
    for (const auto& r : rels) {
      tables.push_back(in.model.relation(r));
      if (!tables.back()) fail_pre("merge_relations", "model lacks relation '" + r + "'");
    }
    for (std::size_t i = 0; i < bits.size(); ++i) {
      auto v = tuple_at(i, n + 1, kk);
      if (v[0] < k) continue;
      std::vector<Elem> rest(v.begin() + 1, v.end());
      for (auto& e : rest)
        if (e >= k) e = 0;
      bits[i] = tables[v[0] - k]->bits[tuple_index(rest, k)];
    }
    out.set_relation(Q, n + 1, std::move(bits));
    return Interpretation{std::move(out), in.env};
  };
  s.backward = [rels, consts, Q, n](const Interpretation& in) {
    std::size_t k = in.model.size();
    FinModel out(k);
    for (std::size_t i = 0; i < rels.size(); ++i) {
      Elem c = in.model.apply(consts[i], {});
      std::vector<std::uint8_t> bits(table_length(k, n));
      for (std::size_t j = 0; j < bits.size(); ++j) {
        auto v = tuple_at(j, n, k);
        v.insert(v.begin(), c);
        bits[j] = in.model.holds(Q, v);
      }
      out.set_relation(rels[i], n, std::move(bits));
    }
    return Interpretation{std::move(out), in.env};
  };
  return s;
}

// ---------------------------------------------------------------------------

ReductionStep remove_constants(const Formula& phi, const Signature& sig) {
  check_well_formed(phi, sig);
  std::vector<std::string> consts;
  for (const auto& f : sig.functions()) {
    if (f.arity != 0) fail_pre("remove_constants", "function '" + f.name + "' is not a constant");
    consts.push_back(f.name);
  }
  std::size_t N = free_bound(phi);
  Signature target;
  for (const auto& r : sig.relations()) target.add_relation(r.name, r.arity);
  Formula out = map_terms(phi, [&](const Term& t, std::size_t depth) -> std::optional<Term> {
    if (t.is_var()) return std::nullopt;
    auto it = std::find(consts.begin(), consts.end(), t.fn);
    return var(N + static_cast<std::size_t>(it - consts.begin()) + depth);
  });

  ReductionStep s;
  s.name = "remove_constants";
  s.source_sig = sig;
  s.target_sig = target;
  s.source = phi;
  s.target = out;
  for (std::size_t j = 0; j < consts.size(); ++j) s.reserved.push_back(N + j);
  s.forward = [consts, N, target](const Interpretation& in) {
    Interpretation out{complete_model(target, in.model.size(), &in.model), in.env};
    for (std::size_t j = 0; j < consts.size(); ++j) out.env.set(N + j, in.model.apply(consts[j], {}));
    return out;
  };
  s.backward = [consts, N, sig](const Interpretation& in) {
    Interpretation out{complete_model(sig, in.model.size(), &in.model), in.env};
    for (std::size_t j = 0; j < consts.size(); ++j)
      out.model.set_function(consts[j], 0, {in.env.lookup(N + j)});
    return out;
  };
  return s;
}

// ---------------------------------------------------------------------------
// Membership encoding.

Formula mb_approx(const Term& x, const Term& y) { return forall(iff(in(var(0), sh(x)), in(var(0), sh(y)))); }

Formula mb_is_pair(const Term& p, const Term& x, const Term& y) {
  return forall(iff(in(var(0), sh(p)), disj(mb_approx(var(0), sh(x)), mb_approx(var(0), sh(y)))));
}

Formula mb_is_opair(const Term& p, const Term& x, const Term& y) {
  // The leading memberships follow from the last conjunct and only narrow the search.
  Term x2 = sh(x, 2), y2 = sh(y, 2), p2 = sh(p, 2);
  return exists(conj(in(var(0), sh(p)),
                     exists(conj(in(var(0), p2), conj(mb_is_pair(var(1), x2, x2),
                                                      conj(mb_is_pair(var(0), x2, y2),
                                                           mb_is_pair(p2, var(1), var(0))))))));
}

// The tail p of t = (x, p) is a member of a member of t; both are bound first.
Formula mb_is_tuple(const Term& t, const std::vector<Term>& v) {
  if (v.empty()) return forall(neg(in(var(0), sh(t))));
  std::vector<Term> rest(v.begin() + 1, v.end());
  Term t2 = sh(t, 2);
  return exists(conj(in(var(0), sh(t)),
                     exists(conj(in(var(0), var(1)),
                                 conj(mb_is_tuple(var(0), sh(rest, 2)), mb_is_opair(t2, sh(v.front(), 2), var(0)))))));
}

// Membership in r is tested first so that t only ranges over members of r.
Formula mb_is_tuple_in(const std::vector<Term>& v, const Term& r) {
  return exists(conj(in(var(0), sh(r)), mb_is_tuple(var(0), sh(v))));
}

Formula mb_extensionality() {
  return forall_n(2, impl(mb_approx(var(1), var(0)), forall(impl(in(var(2), var(0)), in(var(1), var(0))))));
}

ReductionStep compress_to_membership(const Formula& phi, const Signature& sig) {
  check_well_formed(phi, sig);
  if (!sig.functions().empty() || sig.relations().size() != 1)
    fail_pre("compress_to_membership", "source signature must be a single relation without functions");
  std::string P = sig.relations().front().name;
  std::size_t n = sig.relations().front().arity;
  std::size_t N = free_bound(phi);

  Formula body = rebuild(
      phi,
      [&](const Formula& a, std::size_t depth) { return mb_is_tuple_in(a.args(), var(N + 1 + depth)); },
      [&](Quant q, Formula b, std::size_t depth) {
        Formula guard = in(var(0), var(N + depth + 1));
        return Formula::quant(q, q == Quant::All ? impl(guard, b) : conj(guard, b));
      });
  std::vector<Formula> parts{exists(in(var(0), var(N + 1)))};
  for (std::size_t x : free_vars(phi)) parts.push_back(in(var(x), var(N)));
  parts.push_back(body);

  Signature target;
  target.add_relation(kMembership, 2);

  ReductionStep s;
  s.name = "compress_to_membership";
  s.source_sig = sig;
  s.target_sig = target;
  s.source = phi;
  s.target = conj_all(parts);
  s.reserved = {N, N + 1};
  s.forward = [P, n, N](const Interpretation& in) {
    FinModel src(in.model.size());
    const RelTable* t = in.model.relation(P);
    if (!t) fail_pre("compress_to_membership", "model lacks relation '" + P + "'");
    src.set_relation(P, n, t->bits);
    auto mm = build_membership_model(src, in.env, N);
    return Interpretation{std::move(mm.model), std::move(mm.env)};
  };
  s.backward = [P, n, N](const Interpretation& in) {
    std::size_t K = in.model.size();
    Elem d = in.env.lookup(N), r = in.env.lookup(N + 1);
    std::vector<Elem> dom;
    std::vector<long> pos(K, -1);
    for (Elem y = 0; y < K; ++y)
      if (in.model.holds(kMembership, {y, d})) {
        pos[y] = static_cast<long>(dom.size());
        dom.push_back(y);
      }
    if (dom.empty()) fail_pre("compress_to_membership", "the domain variable has no members");
    std::size_t k = dom.size();
    std::vector<Term> vs;
    for (std::size_t i = 0; i < n; ++i) vs.push_back(var(i));
    Evaluator reads(in.model, mb_is_tuple_in(vs, var(n)));
    std::vector<std::uint8_t> bits(table_length(k, n));
    Env e;
    e.prefix.assign(n + 1, 0);
    e.prefix[n] = r;
    for (std::size_t i = 0; i < bits.size(); ++i) {
      auto v = tuple_at(i, n, k);
      for (std::size_t j = 0; j < n; ++j) e.prefix[j] = dom[v[j]];
      bits[i] = reads(e);
    }
    FinModel out(k);
    out.set_relation(P, n, std::move(bits));
    auto back = [&](Elem y) { return pos[y] < 0 ? Elem{0} : static_cast<Elem>(pos[y]); };
    return map_env(Interpretation{std::move(out), {}}, in.env, back);
  };
  return s;
}

// ---------------------------------------------------------------------------

namespace {

const char* const kPairFn = "f";
const char* const kPairRel = "Q";

}  // namespace

ReductionStep rel2_to_fun(const Formula& phi, const Signature& sig, std::size_t n) {
  check_well_formed(phi, sig);
  if (n < 2) fail_pre("rel2_to_fun", "function arity must be at least 2");
  if (!sig.functions().empty() || sig.relations().size() != 1 || sig.relations().front().arity != 2)
    fail_pre("rel2_to_fun", "source signature must be a single binary relation");
  std::string P = sig.relations().front().name;
  std::size_t N = free_bound(phi);

  auto apply = [&](const Term& x, const Term& y) {
    std::vector<Term> args{x};
    args.resize(n, y);
    return rel_atom(kPairRel, {Term::apply(kPairFn, std::move(args))});
  };
  auto guard = [&](const Term& x, std::size_t depth) { return apply(var(N + depth), x); };
  Formula body = rebuild(
      phi, [&](const Formula& a, std::size_t) { return apply(a.args()[0], a.args()[1]); },
      [&](Quant q, Formula b, std::size_t depth) {
        Formula g = guard(var(0), depth + 1);
        return Formula::quant(q, q == Quant::All ? impl(g, b) : conj(g, b));
      });
  std::vector<Formula> parts{exists(guard(var(0), 1))};
  for (std::size_t x : free_vars(phi)) parts.push_back(guard(var(x), 0));
  parts.push_back(body);

  Signature target;
  target.add_function(kPairFn, n);
  target.add_relation(kPairRel, 1);

  ReductionStep s;
  s.name = "rel2_to_fun";
  s.source_sig = sig;
  s.target_sig = target;
  s.source = phi;
  s.target = conj_all(parts);
  s.reserved = {N};
  s.forward = [P, n, N](const Interpretation& in) {
    std::size_t k = in.model.size();
    std::size_t kk = k + k * k + k + 1;
    auto pair = [&](std::size_t a, std::size_t b) { return static_cast<Elem>(k + a * k + b); };
    auto mark = [&](std::size_t x) { return static_cast<Elem>(k + k * k + x); };
    Elem bot = static_cast<Elem>(kk - 1);
    const RelTable* t = in.model.relation(P);
    if (!t) fail_pre("rel2_to_fun", "model lacks relation '" + P + "'");

    std::vector<Elem> table(table_length(kk, n));
    std::size_t tail = table_length(kk, n - 2);
    for (std::size_t i = 0; i < table.size(); ++i) {
      std::size_t head = i / tail;
      std::size_t a = head / kk, b = head % kk;
      if (a == bot && b < k)
        table[i] = mark(b);
      else if (a < k && b < k)
        table[i] = pair(a, b);
      else
        table[i] = bot;
    }
    std::vector<std::uint8_t> q(kk, 0);
    for (std::size_t x = 0; x < k; ++x) q[mark(x)] = 1;
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) q[pair(a, b)] = t->bits[a * k + b];
    FinModel out(kk);
    out.set_function(kPairFn, n, std::move(table));
    out.set_relation(kPairRel, 1, std::move(q));
    Interpretation res{std::move(out), in.env};
    res.env.set(N, bot);
    return res;
  };
  s.backward = [P, n, N](const Interpretation& in) {
    std::size_t K = in.model.size();
    auto F = [&](Elem x, Elem y) {
      std::vector<Elem> args{x};
      args.resize(n, y);
      return in.model.holds(kPairRel, {in.model.apply(kPairFn, args)});
    };
    Elem d = in.env.lookup(N);
    std::vector<Elem> dom;
    std::vector<long> pos(K, -1);
    for (Elem x = 0; x < K; ++x)
      if (F(d, x)) {
        pos[x] = static_cast<long>(dom.size());
        dom.push_back(x);
      }
    if (dom.empty()) fail_pre("rel2_to_fun", "the domain guard is empty");
    std::size_t k = dom.size();
    std::vector<std::uint8_t> bits(k * k);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) bits[a * k + b] = F(dom[a], dom[b]);
    FinModel out(k);
    out.set_relation(P, 2, std::move(bits));
    auto back = [&](Elem y) { return pos[y] < 0 ? Elem{0} : static_cast<Elem>(pos[y]); };
    return map_env(Interpretation{std::move(out), {}}, in.env, back);
  };
  return s;
}

// ---------------------------------------------------------------------------

ReductionStep embed_padding(const Formula& phi, const Signature& sig, const Signature& target) {
  check_well_formed(phi, sig);
  if (!sig.functions().empty() || sig.relations().size() != 1 || sig.relations().front().arity != 2)
    fail_pre("embed_padding", "source signature must be a single binary relation");
  std::string P = sig.relations().front().name;

  ReductionStep s;
  s.name = "embed_padding";
  s.source_sig = sig;
  s.target_sig = target;
  s.source = phi;

  for (const auto& r : target.relations()) {
    if (r.arity < 2) continue;
    std::string R = r.name;
    std::size_t m = r.arity;
    s.target = rebuild(phi, [&](const Formula& a, std::size_t) {
      std::vector<Term> args = a.args();
      args.resize(m, args.back());
      return rel_atom(R, std::move(args));
    });
    s.forward = [P, R, m, target](const Interpretation& in) {
      std::size_t k = in.model.size();
      FinModel out = complete_model(target, k);
      const RelTable* t = in.model.relation(P);
      if (!t) fail_pre("embed_padding", "model lacks relation '" + P + "'");
      RelTable* rt = out.mutable_relation(R);
      for (std::size_t i = 0; i < rt->bits.size(); ++i) {
        auto v = tuple_at(i, m, k);
        rt->bits[i] = t->bits[v[0] * k + v[1]];
      }
      return Interpretation{std::move(out), in.env};
    };
    s.backward = [P, R, m](const Interpretation& in) {
      std::size_t k = in.model.size();
      std::vector<std::uint8_t> bits(k * k);
      for (Elem a = 0; a < k; ++a)
        for (Elem b = 0; b < k; ++b) {
          std::vector<Elem> v{a};
          v.resize(m, b);
          bits[a * k + b] = in.model.holds(R, v);
        }
      FinModel out(k);
      out.set_relation(P, 2, std::move(bits));
      return Interpretation{std::move(out), in.env};
    };
    return s;
  }

  std::optional<Symbol> g, U;
  for (const auto& f : target.functions())
    if (f.arity >= 2) {
      g = f;
      break;
    }
  for (const auto& r : target.relations())
    if (r.arity == 1) {
      U = r;
      break;
    }
  if (!g || !U)
    fail_pre("embed_padding",
             "target needs a relation of arity >= 2, or a function of arity >= 2 and a unary relation");

  auto inner = rel2_to_fun(phi, sig, g->arity);
  std::string gn = g->name, un = U->name;
  // The inner target has exactly one function and one relation symbol.
  std::function<Term(const Term&)> ren = [&](const Term& t) -> Term {
    if (t.is_var()) return t;
    std::vector<Term> xs;
    for (const auto& x : t.args) xs.push_back(ren(x));
    return Term::apply(gn, std::move(xs));
  };
  s.target = rebuild(inner.target, [&](const Formula& a, std::size_t) {
    std::vector<Term> args;
    for (const auto& t : a.args()) args.push_back(ren(t));
    return rel_atom(un, std::move(args));
  });
  s.reserved = inner.reserved;
  auto fwd = inner.forward;
  auto bwd = inner.backward;
  std::size_t m = g->arity;
  s.forward = [fwd, gn, un, m, target](const Interpretation& in) {
    auto mid = fwd(in);
    FinModel out = complete_model(target, mid.model.size());
    out.set_function(gn, m, mid.model.function(kPairFn)->table);
    out.set_relation(un, 1, mid.model.relation(kPairRel)->bits);
    return Interpretation{std::move(out), mid.env};
  };
  s.backward = [bwd, gn, un, m](const Interpretation& in) {
    FinModel mid(in.model.size());
    const FunTable* gt = in.model.function(gn);
    const RelTable* ut = in.model.relation(un);
    if (!gt || !ut) fail_pre("embed_padding", "model lacks the target symbols");
    mid.set_function(kPairFn, m, gt->table);
    mid.set_relation(kPairRel, 1, ut->bits);
    return bwd(Interpretation{std::move(mid), in.env});
  };
  return s;
}

// ---------------------------------------------------------------------------

ReductionStep close_formula(const Formula& phi, const Signature& sig) {
  check_well_formed(phi, sig);
  std::size_t N = free_bound(phi);
  ReductionStep s;
  s.name = "close_formula";
  s.source_sig = sig;
  s.target_sig = sig;
  s.source = phi;
  s.target = exists_n(N, phi);
  s.forward = [](const Interpretation& in) { return in; };
  s.backward = [phi, N](const Interpretation& in) {
    std::size_t k = in.model.size();
    Evaluator ev(in.model, phi);
    Env e;
    e.prefix.assign(N, 0);
    while (true) {
      if (ev(e)) return Interpretation{in.model, e};
      bool wrapped = true;
      for (std::size_t i = N; i-- > 0;) {
        if (++e.prefix[i] < k) {
          wrapped = false;
          break;
        }
        e.prefix[i] = 0;
      }
      if (wrapped) fail_pre("close_formula", "model does not satisfy the closed formula");
    }
  };
  return s;
}

// ---------------------------------------------------------------------------

std::vector<ReductionStep> pipeline_to_binary(const Formula& phi, const Signature& sig) {
  std::vector<ReductionStep> steps;
  steps.push_back(compact_symbols(phi, sig));
  steps.push_back(remove_functions(steps.back().target, steps.back().target_sig));
  {
    const auto& prev = steps.back();
    std::string eq;
    for (const auto& r : prev.target_sig.relations())
      if (!prev.source_sig.relation_arity(r.name) && r.arity == 2 && r.name.rfind("eq", 0) == 0) eq = r.name;
    steps.push_back(add_congruence(prev.target, prev.target_sig, eq));
  }
  {
    const auto& prev = steps.back();
    std::size_t n = 0;
    for (const auto& r : prev.target_sig.relations()) n = std::max(n, r.arity);
    steps.push_back(uniformize_arity(prev.target, prev.target_sig, n));
  }
  steps.push_back(merge_relations(steps.back().target, steps.back().target_sig));
  steps.push_back(remove_constants(steps.back().target, steps.back().target_sig));
  steps.push_back(compress_to_membership(steps.back().target, steps.back().target_sig));
  return steps;
}

Interpretation forward_through(const std::vector<ReductionStep>& steps, Interpretation in) {
  for (const auto& s : steps) in = s.forward(in);
  return in;
}

Interpretation backward_through(const std::vector<ReductionStep>& steps, Interpretation in) {
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) in = it->backward(in);
  return in;
}

const std::vector<std::string>& pass_names() {
  static const std::vector<std::string> names{
      "compact_symbols",  "remove_functions",       "add_congruence", "uniformize_arity",
      "merge_relations",  "remove_constants",       "compress_to_membership", "rel2_to_fun",
      "embed_padding",    "lift_arity0_to1",        "remove_monadic_functions", "propositional_collapse",
      "close_formula"};
  return names;
}

ReductionStep run_pass(const std::string& name, const Formula& phi, const Signature& sig, const PassArgs& args) {
  if (name == "compact_symbols") return compact_symbols(phi, sig);
  if (name == "remove_functions") return remove_functions(phi, sig);
  if (name == "add_congruence") {
    if (!args.eqsym) throw InputError(InputError::Kind::Format, "add_congruence needs an equality symbol");
    return add_congruence(phi, sig, *args.eqsym);
  }
  if (name == "uniformize_arity") {
    std::size_t n = 0;
    for (const auto& r : sig.relations()) n = std::max(n, r.arity);
    return uniformize_arity(phi, sig, args.arity.value_or(n));
  }
  if (name == "merge_relations") return merge_relations(phi, sig);
  if (name == "remove_constants") return remove_constants(phi, sig);
  if (name == "compress_to_membership") return compress_to_membership(phi, sig);
  if (name == "rel2_to_fun") return rel2_to_fun(phi, sig, args.arity.value_or(2));
  if (name == "embed_padding") {
    if (!args.target_sig) throw InputError(InputError::Kind::Format, "embed_padding needs a target signature");
    return embed_padding(phi, sig, *args.target_sig);
  }
  if (name == "lift_arity0_to1") return lift_arity0_to1(phi, sig);
  if (name == "remove_monadic_functions") return remove_monadic_functions(phi, sig);
  if (name == "propositional_collapse") return propositional_collapse(phi, sig);
  if (name == "close_formula") return close_formula(phi, sig);
  throw InputError(InputError::Kind::UnknownSymbol, "unknown pass '" + name + "'");
}

}  // namespace fsat
