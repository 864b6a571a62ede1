#include "fsat/logic.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace fsat {

Signature::Signature(std::vector<Symbol> functions, std::vector<Symbol> relations) {
  for (auto& s : functions) add_function(s.name, s.arity);
  for (auto& s : relations) add_relation(s.name, s.arity);
}

std::optional<std::size_t> Signature::function_arity(const std::string& name) const {
  for (const auto& s : functions_)
    if (s.name == name) return s.arity;
  return std::nullopt;
}

std::optional<std::size_t> Signature::relation_arity(const std::string& name) const {
  for (const auto& s : relations_)
    if (s.name == name) return s.arity;
  return std::nullopt;
}

bool Signature::has_name(const std::string& name) const {
  return function_arity(name).has_value() || relation_arity(name).has_value();
}

void Signature::add_function(const std::string& name, std::size_t arity) {
  if (has_name(name))
    throw InputError(InputError::Kind::Format, "duplicate symbol name '" + name + "'");
  functions_.push_back({name, arity});
}

void Signature::add_relation(const std::string& name, std::size_t arity) {
  if (has_name(name))
    throw InputError(InputError::Kind::Format, "duplicate symbol name '" + name + "'");
  relations_.push_back({name, arity});
}

std::string Signature::fresh_name(const std::string& base) const {
  if (!has_name(base)) return base;
  for (std::size_t i = 1;; ++i) {
    auto candidate = base + std::to_string(i);
    if (!has_name(candidate)) return candidate;
  }
}

Term Term::variable(std::size_t index) {
  Term t;
  t.kind = Kind::Var;
  t.var = index;
  return t;
}

Term Term::apply(std::string fn, std::vector<Term> args) {
  Term t;
  t.kind = Kind::App;
  t.fn = std::move(fn);
  t.args = std::move(args);
  return t;
}

Formula::Formula() : Formula(std::make_shared<const Node>()) {}

Formula Formula::falsum() {
  static const Formula bottom{};
  return bottom;
}

Formula Formula::atom(std::string rel, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->rel = std::move(rel);
  n->args = std::move(args);
  return Formula(std::move(n));
}

Formula Formula::bin(BinOp op, Formula lhs, Formula rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Bin;
  n->op = op;
  n->lhs = std::make_shared<const Formula>(std::move(lhs));
  n->rhs = std::make_shared<const Formula>(std::move(rhs));
  return Formula(std::move(n));
}

Formula Formula::quant(Quant q, Formula body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Quant;
  n->q = q;
  n->lhs = std::make_shared<const Formula>(std::move(body));
  return Formula(std::move(n));
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Formula::Kind::Falsum:
      return true;
    case Formula::Kind::Atom:
      return a.rel() == b.rel() && a.args() == b.args();
    case Formula::Kind::Bin:
      return a.op() == b.op() && a.lhs() == b.lhs() && a.rhs() == b.rhs();
    case Formula::Kind::Quant:
      return a.quantifier() == b.quantifier() && a.body() == b.body();
  }
  return false;
}

Formula conj(Formula a, Formula b) { return Formula::bin(BinOp::And, std::move(a), std::move(b)); }
Formula disj(Formula a, Formula b) { return Formula::bin(BinOp::Or, std::move(a), std::move(b)); }
Formula impl(Formula a, Formula b) { return Formula::bin(BinOp::Impl, std::move(a), std::move(b)); }
Formula neg(Formula a) { return impl(std::move(a), Formula::falsum()); }
Formula iff(Formula a, Formula b) { return conj(impl(a, b), impl(b, a)); }
Formula truth() { return impl(Formula::falsum(), Formula::falsum()); }
Formula forall(Formula body) { return Formula::quant(Quant::All, std::move(body)); }
Formula exists(Formula body) { return Formula::quant(Quant::Ex, std::move(body)); }

Formula conj_all(const std::vector<Formula>& parts) {
  if (parts.empty()) return truth();
  Formula acc = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) acc = conj(parts[i], acc);
  return acc;
}

Formula disj_all(const std::vector<Formula>& parts) {
  if (parts.empty()) return Formula::falsum();
  Formula acc = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) acc = disj(parts[i], acc);
  return acc;
}

Formula exists_n(std::size_t n, Formula body) {
  for (std::size_t i = 0; i < n; ++i) body = exists(std::move(body));
  return body;
}

Formula forall_n(std::size_t n, Formula body) {
  for (std::size_t i = 0; i < n; ++i) body = forall(std::move(body));
  return body;
}

namespace {

void collect_vars(const Term& t, std::size_t binders, std::set<std::size_t>& out) {
  if (t.is_var()) {
    if (t.var >= binders) out.insert(t.var - binders);
    return;
  }
  for (const auto& a : t.args) collect_vars(a, binders, out);
}

void collect_vars(const Formula& phi, std::size_t binders, std::set<std::size_t>& out) {
  switch (phi.kind()) {
    case Formula::Kind::Falsum:
      return;
    case Formula::Kind::Atom:
      for (const auto& a : phi.args()) collect_vars(a, binders, out);
      return;
    case Formula::Kind::Bin:
      collect_vars(phi.lhs(), binders, out);
      collect_vars(phi.rhs(), binders, out);
      return;
    case Formula::Kind::Quant:
      collect_vars(phi.body(), binders + 1, out);
      return;
  }
}

void push_unique(std::vector<std::string>& v, const std::string& s) {
  if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
}

void collect_syms(const Term& t, SymbolUse& out) {
  if (t.is_var()) return;
  push_unique(out.functions, t.fn);
  for (const auto& a : t.args) collect_syms(a, out);
}

void collect_syms(const Formula& phi, SymbolUse& out) {
  switch (phi.kind()) {
    case Formula::Kind::Falsum:
      return;
    case Formula::Kind::Atom:
      push_unique(out.relations, phi.rel());
      for (const auto& a : phi.args()) collect_syms(a, out);
      return;
    case Formula::Kind::Bin:
      collect_syms(phi.lhs(), out);
      collect_syms(phi.rhs(), out);
      return;
    case Formula::Kind::Quant:
      collect_syms(phi.body(), out);
      return;
  }
}

}  // namespace

std::vector<std::size_t> free_vars(const Term& t) {
  std::set<std::size_t> s;
  collect_vars(t, 0, s);
  return {s.begin(), s.end()};
}

std::vector<std::size_t> free_vars(const Formula& phi) {
  std::set<std::size_t> s;
  collect_vars(phi, 0, s);
  return {s.begin(), s.end()};
}

std::size_t free_bound(const Formula& phi) {
  auto fv = free_vars(phi);
  return fv.empty() ? 0 : fv.back() + 1;
}

SymbolUse symbols_of(const Formula& phi) {
  SymbolUse out;
  collect_syms(phi, out);
  return out;
}

Term shift(const Term& t, std::size_t cutoff, long delta) {
  if (t.is_var()) {
    if (t.var < cutoff) return t;
    long shifted = static_cast<long>(t.var) + delta;
    if (shifted < static_cast<long>(cutoff))
      throw PreconditionError("negative shift would capture variable #" + std::to_string(t.var));
    return Term::variable(static_cast<std::size_t>(shifted));
  }
  std::vector<Term> args;
  args.reserve(t.args.size());
  for (const auto& a : t.args) args.push_back(shift(a, cutoff, delta));
  return Term::apply(t.fn, std::move(args));
}

Formula shift(const Formula& phi, std::size_t cutoff, long delta) {
  switch (phi.kind()) {
    case Formula::Kind::Falsum:
      return phi;
    case Formula::Kind::Atom: {
      std::vector<Term> args;
      args.reserve(phi.args().size());
      for (const auto& a : phi.args()) args.push_back(shift(a, cutoff, delta));
      return Formula::atom(phi.rel(), std::move(args));
    }
    case Formula::Kind::Bin:
      return Formula::bin(phi.op(), shift(phi.lhs(), cutoff, delta), shift(phi.rhs(), cutoff, delta));
    case Formula::Kind::Quant:
      return Formula::quant(phi.quantifier(), shift(phi.body(), cutoff + 1, delta));
  }
  return phi;
}

std::size_t depth(const Formula& phi) {
  switch (phi.kind()) {
    case Formula::Kind::Falsum:
    case Formula::Kind::Atom:
      return 0;
    case Formula::Kind::Bin:
      return 1 + std::max(depth(phi.lhs()), depth(phi.rhs()));
    case Formula::Kind::Quant:
      return 1 + depth(phi.body());
  }
  return 0;
}

std::size_t quantifier_depth(const Formula& phi) {
  switch (phi.kind()) {
    case Formula::Kind::Falsum:
    case Formula::Kind::Atom:
      return 0;
    case Formula::Kind::Bin:
      return std::max(quantifier_depth(phi.lhs()), quantifier_depth(phi.rhs()));
    case Formula::Kind::Quant:
      return 1 + quantifier_depth(phi.body());
  }
  return 0;
}

std::size_t term_depth(const Term& t) {
  if (t.is_var()) return 0;
  std::size_t d = 0;
  for (const auto& a : t.args) d = std::max(d, term_depth(a));
  return d + 1;
}

namespace {

void check_term(const Term& t, const Signature& sig) {
  if (t.is_var()) return;
  auto ar = sig.function_arity(t.fn);
  if (!ar) throw InputError(InputError::Kind::UnknownSymbol, "unknown function symbol '" + t.fn + "'");
  if (*ar != t.args.size())
    throw InputError(InputError::Kind::ArityMismatch,
                     "function '" + t.fn + "' expects " + std::to_string(*ar) + " arguments, got " +
                         std::to_string(t.args.size()));
  for (const auto& a : t.args) check_term(a, sig);
}

}  // namespace

void check_well_formed(const Formula& phi, const Signature& sig) {
  switch (phi.kind()) {
    case Formula::Kind::Falsum:
      return;
    case Formula::Kind::Atom: {
      auto ar = sig.relation_arity(phi.rel());
      if (!ar)
        throw InputError(InputError::Kind::UnknownSymbol, "unknown relation symbol '" + phi.rel() + "'");
      if (*ar != phi.args().size())
        throw InputError(InputError::Kind::ArityMismatch,
                         "relation '" + phi.rel() + "' expects " + std::to_string(*ar) + " arguments, got " +
                             std::to_string(phi.args().size()));
      for (const auto& a : phi.args()) check_term(a, sig);
      return;
    }
    case Formula::Kind::Bin:
      check_well_formed(phi.lhs(), sig);
      check_well_formed(phi.rhs(), sig);
      return;
    case Formula::Kind::Quant:
      check_well_formed(phi.body(), sig);
      return;
  }
}

std::string print_term(const Term& t, std::size_t depth) {
  if (t.is_var()) {
    if (t.var < depth) return "v" + std::to_string(depth - 1 - t.var);
    return "#" + std::to_string(t.var - depth);
  }
  std::string s = "(" + t.fn;
  for (const auto& a : t.args) s += " " + print_term(a, depth);
  return s + ")";
}

namespace {

void print_rec(const Formula& phi, std::size_t depth, std::string& out) {
  switch (phi.kind()) {
    case Formula::Kind::Falsum:
      out += "false";
      return;
    case Formula::Kind::Atom:
      out += "(" + phi.rel();
      for (const auto& a : phi.args()) out += " " + print_term(a, depth);
      out += ")";
      return;
    case Formula::Kind::Bin: {
      const char* op = phi.op() == BinOp::And ? "and" : phi.op() == BinOp::Or ? "or" : "->";
      out += "(";
      out += op;
      out += " ";
      print_rec(phi.lhs(), depth, out);
      out += " ";
      print_rec(phi.rhs(), depth, out);
      out += ")";
      return;
    }
    case Formula::Kind::Quant:
      out += phi.quantifier() == Quant::All ? "(forall v" : "(exists v";
      out += std::to_string(depth) + " ";
      print_rec(phi.body(), depth + 1, out);
      out += ")";
      return;
  }
}

}  // namespace

std::string print_formula(const Formula& phi) {
  std::string out;
  print_rec(phi, 0, out);
  return out;
}

}  // namespace fsat
