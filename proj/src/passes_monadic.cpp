#include <algorithm>
#include <map>

#include "fsat/passes.hpp"
#include "pass_util.hpp"

namespace fsat {

using namespace detail;

ReductionStep lift_arity0_to1(const Formula& phi, const Signature& sig) {
  check_well_formed(phi, sig);
  Signature target;
  std::vector<std::string> nullary_f, nullary_r;
  for (const auto& f : sig.functions()) {
    if (f.arity > 1) fail_pre("lift_arity0_to1", "function '" + f.name + "' has arity above 1");
    if (f.arity == 0) nullary_f.push_back(f.name);
    target.add_function(f.name, 1);
  }
  for (const auto& r : sig.relations()) {
    if (r.arity > 1) fail_pre("lift_arity0_to1", "relation '" + r.name + "' has arity above 1");
    if (r.arity == 0) nullary_r.push_back(r.name);
    target.add_relation(r.name, 1);
  }
  std::size_t N = free_bound(phi);
  bool uses_fresh = false;
  auto is_in = [](const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
  };
  std::function<Term(const Term&, std::size_t)> lift = [&](const Term& t, std::size_t depth) -> Term {
    if (t.is_var()) return t;
    if (is_in(nullary_f, t.fn)) {
      uses_fresh = true;
      return Term::apply(t.fn, {var(N + depth)});
    }
    return Term::apply(t.fn, {lift(t.args.at(0), depth)});
  };
  Formula out = rebuild(phi, [&](const Formula& a, std::size_t depth) {
    if (a.args().empty()) {
      uses_fresh = true;
      return Formula::atom(a.rel(), {var(N + depth)});
    }
    return Formula::atom(a.rel(), {lift(a.args()[0], depth)});
  });

  ReductionStep s;
  s.name = "lift_arity0_to1";
  s.source_sig = sig;
  s.target_sig = target;
  s.source = phi;
  s.target = out;
  if (uses_fresh) s.reserved = {N};
  s.forward = [sig](const Interpretation& in) {
    std::size_t k = in.model.size();
    FinModel out(k);
    for (const auto& f : sig.functions()) {
      const FunTable* t = in.model.function(f.name);
      if (!t) fail_pre("lift_arity0_to1", "model lacks function '" + f.name + "'");
      out.set_function(f.name, 1, f.arity == 0 ? std::vector<Elem>(k, t->table[0]) : t->table);
    }
    for (const auto& r : sig.relations()) {
      const RelTable* t = in.model.relation(r.name);
      if (!t) fail_pre("lift_arity0_to1", "model lacks relation '" + r.name + "'");
      out.set_relation(r.name, 1, r.arity == 0 ? std::vector<std::uint8_t>(k, t->bits[0]) : t->bits);
    }
    return Interpretation{std::move(out), in.env};
  };
  s.backward = [sig, N](const Interpretation& in) {
    std::size_t k = in.model.size();
    Elem x = in.env.lookup(N);
    FinModel out(k);
    for (const auto& f : sig.functions()) {
      const FunTable* t = in.model.function(f.name);
      if (!t) fail_pre("lift_arity0_to1", "model lacks function '" + f.name + "'");
      out.set_function(f.name, f.arity, f.arity == 0 ? std::vector<Elem>{t->table[x]} : t->table);
    }
    for (const auto& r : sig.relations()) {
      const RelTable* t = in.model.relation(r.name);
      if (!t) fail_pre("lift_arity0_to1", "model lacks relation '" + r.name + "'");
      out.set_relation(r.name, r.arity, r.arity == 0 ? std::vector<std::uint8_t>{t->bits[x]} : t->bits);
    }
    return Interpretation{std::move(out), in.env};
  };
  return s;
}

// ---------------------------------------------------------------------------
// Function elimination for monadic signatures. A word w = [w0, ..., w(l-1)]
// names the composite map x |-> w(l-1)(...w0(x)); Q_{w,r}(x) stands for
// P_r applied to that composite.

namespace {

using Word = std::vector<std::size_t>;

std::vector<Word> words_up_to(std::size_t nfun, std::size_t maxlen) {
  std::vector<Word> out{Word{}};
  std::vector<Word> layer{Word{}};
  for (std::size_t l = 1; l <= maxlen && nfun > 0; ++l) {
    std::vector<Word> next;
    for (const auto& w : layer)
      for (std::size_t f = 0; f < nfun; ++f) {
        Word v{f};
        v.insert(v.end(), w.begin(), w.end());
        next.push_back(std::move(v));
      }
    std::sort(next.begin(), next.end());
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

}  // namespace

ReductionStep remove_monadic_functions(const Formula& phi, const Signature& sig) {
  check_well_formed(phi, sig);
  std::vector<std::string> funs, rels;
  for (const auto& f : sig.functions()) {
    if (f.arity != 1) fail_pre("remove_monadic_functions", "function '" + f.name + "' is not unary");
    funs.push_back(f.name);
  }
  for (const auto& r : sig.relations()) {
    if (r.arity != 1) fail_pre("remove_monadic_functions", "relation '" + r.name + "' is not unary");
    rels.push_back(r.name);
  }
  std::size_t m = 0;
  std::function<void(const Formula&)> scan = [&](const Formula& f) {
    switch (f.kind()) {
      case Formula::Kind::Atom:
        for (const auto& t : f.args()) m = std::max(m, term_depth(t));
        break;
      case Formula::Kind::Bin:
        scan(f.lhs());
        scan(f.rhs());
        break;
      case Formula::Kind::Quant:
        scan(f.body());
        break;
      case Formula::Kind::Falsum:
        break;
    }
  };
  scan(phi);
  std::size_t n = funs.size();
  auto words = words_up_to(n, m);

  Signature names = sig;
  Signature target;
  std::map<std::pair<Word, std::size_t>, std::string> qname;
  for (std::size_t r = 0; r < rels.size(); ++r)
    for (const auto& w : words) {
      std::string base = "Q_" + rels[r];
      for (std::size_t f : w) base += "_" + funs[f];
      std::string name = names.fresh_name(base);
      names.add_relation(name, 1);
      target.add_relation(name, 1);
      qname[{w, r}] = name;
    }
  for (const auto& r : rels) target.add_relation(r, 1);
  auto fidx = [&](const std::string& f) {
    return static_cast<std::size_t>(std::find(funs.begin(), funs.end(), f) - funs.begin());
  };
  auto ridx = [&](const std::string& r) {
    return static_cast<std::size_t>(std::find(rels.begin(), rels.end(), r) - rels.begin());
  };

  Formula body = rebuild(phi, [&](const Formula& a, std::size_t) {
    // P_r(f1(...fq(x))) becomes Q_{[fq..f1],r}(x).
    Word outer_first;
    const Term* t = &a.args().at(0);
    while (!t->is_var()) {
      outer_first.push_back(fidx(t->fn));
      t = &t->args.at(0);
    }
    Word w(outer_first.rbegin(), outer_first.rend());
    return Formula::atom(qname.at({w, ridx(a.rel())}), {*t});
  });

  // Under forall x and exists x_f0..x_f(n-1): x is #n and x_fj is #(n-1-j).
  std::vector<Formula> eqs;
  for (std::size_t r = 0; r < rels.size(); ++r)
    eqs.push_back(iff(Formula::atom(qname.at({Word{}, r}), {var(n)}), Formula::atom(rels[r], {var(n)})));
  for (const auto& w : words) {
    if (w.size() >= m) continue;
    for (std::size_t j = 0; j < n; ++j) {
      Word fw{j};
      fw.insert(fw.end(), w.begin(), w.end());
      for (std::size_t r = 0; r < rels.size(); ++r)
        eqs.push_back(iff(Formula::atom(qname.at({fw, r}), {var(n)}),
                          Formula::atom(qname.at({w, r}), {var(n - 1 - j)})));
    }
  }
  Formula axiom = forall(exists_n(n, conj_all(eqs)));

  ReductionStep s;
  s.name = "remove_monadic_functions";
  s.source_sig = sig;
  s.target_sig = target;
  s.source = phi;
  s.target = conj(body, axiom);
  s.forward = [funs, rels, qname](const Interpretation& in) {
    std::size_t k = in.model.size();
    std::vector<const FunTable*> ft;
    for (const auto& f : funs) {
      ft.push_back(in.model.function(f));
      if (!ft.back()) fail_pre("remove_monadic_functions", "model lacks function '" + f + "'");
    }
    FinModel out(k);
    for (std::size_t r = 0; r < rels.size(); ++r) {
      const RelTable* t = in.model.relation(rels[r]);
      if (!t) fail_pre("remove_monadic_functions", "model lacks relation '" + rels[r] + "'");
      out.set_relation(rels[r], 1, t->bits);
    }
    for (const auto& [key, name] : qname) {
      const auto& [w, r] = key;
      const RelTable* t = in.model.relation(rels[r]);
      std::vector<std::uint8_t> bits(k);
      for (Elem x = 0; x < k; ++x) {
        Elem y = x;
        for (std::size_t f : w) y = ft[f]->table[y];
        bits[x] = t->bits[y];
      }
      out.set_relation(name, 1, std::move(bits));
    }
    return Interpretation{std::move(out), in.env};
  };
  s.backward = [funs, rels, qname, words, m](const Interpretation& in) {
    std::size_t k = in.model.size();
    FinModel out(k);
    for (std::size_t r = 0; r < rels.size(); ++r) {
      const RelTable* q = in.model.relation(qname.at({Word{}, r}));
      if (!q) fail_pre("remove_monadic_functions", "model lacks the base word symbols");
      out.set_relation(rels[r], 1, q->bits);
    }
    auto Q = [&](const Word& w, std::size_t r, Elem x) { return in.model.relation(qname.at({w, r}))->bits[x] != 0; };
    for (std::size_t j = 0; j < funs.size(); ++j) {
      std::vector<Elem> table(k);
      for (Elem x = 0; x < k; ++x) {
        std::optional<Elem> found;
        for (Elem y = 0; y < k && !found; ++y) {
          bool ok = true;
          for (const auto& w : words) {
            if (w.size() >= m) continue;
            Word fw{j};
            fw.insert(fw.end(), w.begin(), w.end());
            for (std::size_t r = 0; r < rels.size() && ok; ++r) ok = Q(fw, r, x) == Q(w, r, y);
            if (!ok) break;
          }
          if (ok) found = y;
        }
        if (!found) fail_pre("remove_monadic_functions", "no witness for '" + funs[j] + "'");
        table[x] = *found;
      }
      out.set_function(funs[j], 1, std::move(table));
    }
    return Interpretation{std::move(out), in.env};
  };
  return s;
}

// ---------------------------------------------------------------------------

ReductionStep propositional_collapse(const Formula& phi, const Signature& sig) {
  check_well_formed(phi, sig);
  Signature target;
  for (const auto& r : sig.relations()) {
    if (r.arity != 0) fail_pre("propositional_collapse", "relation '" + r.name + "' is not nullary");
    target.add_relation(r.name, 0);
  }
  ReductionStep s;
  s.name = "propositional_collapse";
  s.source_sig = sig;
  s.target_sig = target;
  s.source = phi;
  s.target = phi;
  s.forward = [target](const Interpretation& in) {
    return Interpretation{complete_model(target, in.model.size(), &in.model), in.env};
  };
  s.backward = [sig](const Interpretation& in) {
    return Interpretation{complete_model(sig, in.model.size(), &in.model), in.env};
  };
  return s;
}

}  // namespace fsat
