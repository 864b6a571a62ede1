#include "fsat/seplog.hpp"

#include <algorithm>
#include <map>

#include "fsat/finite.hpp"
#include "sexpr.hpp"

namespace fsat {

SlFormula::SlFormula() : node_(std::make_shared<Node>()) {}

namespace {

SlFormula::Kind cell_kind(bool strict) { return strict ? SlFormula::Kind::PointsTo : SlFormula::Kind::Hooks; }

}  // namespace

SlFormula SlFormula::points_to(SlTerm t, SlTerm a, SlTerm b) {
  auto n = std::make_shared<Node>();
  n->kind = cell_kind(true);
  n->terms = {t, a, b};
  return SlFormula(n);
}

SlFormula SlFormula::hooks(SlTerm t, SlTerm a, SlTerm b) {
  auto n = std::make_shared<Node>();
  n->kind = cell_kind(false);
  n->terms = {t, a, b};
  return SlFormula(n);
}

SlFormula SlFormula::emp() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Emp;
  return SlFormula(n);
}

SlFormula SlFormula::star(SlFormula l, SlFormula r) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Star;
  n->lhs = std::make_shared<SlFormula>(std::move(l));
  n->rhs = std::make_shared<SlFormula>(std::move(r));
  return SlFormula(n);
}

SlFormula SlFormula::wand(SlFormula l, SlFormula r) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Wand;
  n->lhs = std::make_shared<SlFormula>(std::move(l));
  n->rhs = std::make_shared<SlFormula>(std::move(r));
  return SlFormula(n);
}

SlFormula SlFormula::eq(SlTerm a, SlTerm b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Eq;
  n->terms = {a, b};
  return SlFormula(n);
}

SlFormula SlFormula::falsum() { return SlFormula(); }

SlFormula SlFormula::bin(BinOp op, SlFormula l, SlFormula r) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Bin;
  n->op = op;
  n->lhs = std::make_shared<SlFormula>(std::move(l));
  n->rhs = std::make_shared<SlFormula>(std::move(r));
  return SlFormula(n);
}

SlFormula SlFormula::quant(Quant q, SlFormula body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Quant;
  n->q = q;
  n->lhs = std::make_shared<SlFormula>(std::move(body));
  return SlFormula(n);
}

SlFormula SlFormula::truth() { return bin(BinOp::Impl, falsum(), falsum()); }

bool operator==(const SlFormula& a, const SlFormula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.terms() != b.terms()) return false;
  switch (a.kind()) {
    case SlFormula::Kind::Bin:
      if (a.op() != b.op()) return false;
      [[fallthrough]];
    case SlFormula::Kind::Star:
    case SlFormula::Kind::Wand:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    case SlFormula::Kind::Quant:
      return a.quantifier() == b.quantifier() && a.body() == b.body();
    default:
      return true;
  }
}

bool is_msl(const SlFormula& phi) {
  switch (phi.kind()) {
    case SlFormula::Kind::Hooks:
    case SlFormula::Kind::Falsum:
      return true;
    case SlFormula::Kind::Bin:
      return is_msl(phi.lhs()) && is_msl(phi.rhs());
    case SlFormula::Kind::Quant:
      return is_msl(phi.body());
    default:
      return false;
  }
}

bool uses_wand(const SlFormula& phi) {
  switch (phi.kind()) {
    case SlFormula::Kind::Wand:
      return true;
    case SlFormula::Kind::Bin:
    case SlFormula::Kind::Star:
      return uses_wand(phi.lhs()) || uses_wand(phi.rhs());
    case SlFormula::Kind::Quant:
      return uses_wand(phi.body());
    default:
      return false;
  }
}

Heap normalize_heap(Heap h) {
  std::sort(h.begin(), h.end());
  h.erase(std::unique(h.begin(), h.end()), h.end());
  for (std::size_t i = 1; i < h.size(); ++i)
    if (h[i].addr == h[i - 1].addr)
      throw PreconditionError("heap is not functional at address " + std::to_string(h[i].addr));
  return h;
}

std::set<SlVal> default_universe(const Heap& h, const Stack& s) {
  std::set<SlVal> u{std::nullopt};
  for (const auto& c : h) u.insert(c.addr);
  for (const auto& v : s.prefix)
    if (v) u.insert(v);
  if (s.fallback) u.insert(s.fallback);
  return u;
}

namespace {

constexpr std::size_t kMaxStarCells = 20;

class SlEvaluator {
 public:
  SlEvaluator(const Stack& s, std::vector<SlVal> universe, std::optional<std::size_t> wand_bound)
      : s_(s), universe_(std::move(universe)), wand_bound_(wand_bound) {}

  bool eval(const Heap& h, const SlFormula& f) {
    switch (f.kind()) {
      case SlFormula::Kind::PointsTo: {
        SlVal a = val(f.terms()[0]);
        if (!a || h.size() != 1) return false;
        return h[0] == HeapCell{*a, val(f.terms()[1]), val(f.terms()[2])};
      }
      case SlFormula::Kind::Hooks: {
        SlVal a = val(f.terms()[0]);
        if (!a) return false;
        HeapCell c{*a, val(f.terms()[1]), val(f.terms()[2])};
        return std::binary_search(h.begin(), h.end(), c);
      }
      case SlFormula::Kind::Emp:
        return h.empty();
      case SlFormula::Kind::Eq:
        return val(f.terms()[0]) == val(f.terms()[1]);
      case SlFormula::Kind::Falsum:
        return false;
      case SlFormula::Kind::Bin: {
        bool l = eval(h, f.lhs());
        switch (f.op()) {
          case BinOp::And:
            return l && eval(h, f.rhs());
          case BinOp::Or:
            return l || eval(h, f.rhs());
          case BinOp::Impl:
            return !l || eval(h, f.rhs());
        }
        return false;
      }
      case SlFormula::Kind::Quant: {
        bool all = f.quantifier() == Quant::All;
        for (const auto& v : universe_) {
          bound_.push_back(v);
          bool r = eval(h, f.body());
          bound_.pop_back();
          if (r != all) return r;
        }
        return all;
      }
      case SlFormula::Kind::Star: {
        if (h.size() > kMaxStarCells) throw ResourceError("separating conjunction over too large a heap");
        std::uint64_t total = std::uint64_t{1} << h.size();
        for (std::uint64_t mask = 0; mask < total; ++mask) {
          Heap h1, h2;
          for (std::size_t i = 0; i < h.size(); ++i) (mask >> i & 1 ? h1 : h2).push_back(h[i]);
          if (eval(h1, f.lhs()) && eval(h2, f.rhs())) return true;
        }
        return false;
      }
      case SlFormula::Kind::Wand:
        return wand(h, f);
    }
    return false;
  }

 private:
  SlVal val(const SlTerm& t) const {
    if (!t) return std::nullopt;
    if (*t < bound_.size()) return bound_[bound_.size() - 1 - *t];
    return s_.lookup(*t - bound_.size());
  }

  // Every extension h' disjoint from h with at most wand_bound cells, built
  // from universe addresses and values.
  bool wand(const Heap& h, const SlFormula& f) {
    if (!wand_bound_) throw PreconditionError("magic wand needs an explicit extension bound");
    std::vector<std::uint64_t> addrs;
    for (const auto& v : universe_)
      if (v && std::none_of(h.begin(), h.end(), [&](const HeapCell& c) { return c.addr == *v; }))
        addrs.push_back(*v);
    Heap ext;
    std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
      if (i == addrs.size()) {
        if (!eval(ext, f.lhs())) return true;
        Heap joined = h;
        joined.insert(joined.end(), ext.begin(), ext.end());
        return eval(normalize_heap(std::move(joined)), f.rhs());
      }
      if (!go(i + 1)) return false;
      if (ext.size() >= *wand_bound_) return true;
      for (const auto& a : universe_)
        for (const auto& b : universe_) {
          ext.push_back(HeapCell{addrs[i], a, b});
          bool ok = go(i + 1);
          ext.pop_back();
          if (!ok) return false;
        }
      return true;
    };
    return go(0);
  }

  const Stack& s_;
  std::vector<SlVal> universe_;
  std::optional<std::size_t> wand_bound_;
  std::vector<SlVal> bound_;
};

}  // namespace

bool eval_sl(const Heap& h, const Stack& s, const SlFormula& phi, const SlEvalOptions& opts) {
  Heap norm = normalize_heap(h);
  auto u = opts.universe ? *opts.universe : default_universe(norm, s);
  SlEvaluator ev(s, std::vector<SlVal>(u.begin(), u.end()), opts.wand_bound);
  return ev.eval(norm, phi);
}

namespace {

std::string binary_relation(const Signature& sig) {
  if (!sig.functions().empty() || sig.relations().size() != 1 || sig.relations()[0].arity != 2)
    throw PreconditionError("encoding needs a signature with no functions and one binary relation");
  return sig.relations()[0].name;
}

SlFormula encode_rec(const Formula& f) {
  auto empty_cell = [](std::size_t x) { return SlFormula::hooks(x, std::nullopt, std::nullopt); };
  auto land = [](SlFormula a, SlFormula b) { return SlFormula::bin(BinOp::And, std::move(a), std::move(b)); };
  switch (f.kind()) {
    case Formula::Kind::Falsum:
      return SlFormula::falsum();
    case Formula::Kind::Atom: {
      const auto& a = f.args();
      if (!a[0].is_var() || !a[1].is_var()) throw PreconditionError("encoding expects variable arguments");
      std::size_t x = a[0].var, y = a[1].var;
      SlFormula edge = SlFormula::quant(Quant::Ex, SlFormula::hooks(std::size_t{0}, x + 1, y + 1));
      return land(edge, land(empty_cell(x), empty_cell(y)));
    }
    case Formula::Kind::Bin:
      return SlFormula::bin(f.op(), encode_rec(f.lhs()), encode_rec(f.rhs()));
    case Formula::Kind::Quant: {
      SlFormula body = encode_rec(f.body());
      if (f.quantifier() == Quant::All)
        return SlFormula::quant(Quant::All, SlFormula::bin(BinOp::Impl, empty_cell(0), body));
      return SlFormula::quant(Quant::Ex, land(empty_cell(0), body));
    }
  }
  return SlFormula::falsum();
}

}  // namespace

SlFormula encode_body(const Formula& phi, const Signature& sig) {
  binary_relation(sig);
  check_well_formed(phi, sig);
  return encode_rec(phi);
}

SlFormula encode_fsat_to_msl(const Formula& phi, const Signature& sig) {
  SlFormula body = encode_body(phi, sig);
  if (free_bound(phi) != 0) throw PreconditionError("encoding needs a closed formula");
  SlFormula nonempty = SlFormula::quant(Quant::Ex, SlFormula::hooks(std::size_t{0}, std::nullopt, std::nullopt));
  return SlFormula::bin(BinOp::And, nonempty, body);
}

HeapStack model_to_heap(const FinModel& m, const Env& env, const std::string& rel) {
  const RelTable* p = m.relation(rel);
  if (!p || p->arity != 2) throw PreconditionError("model lacks binary relation '" + rel + "'");
  std::size_t k = m.size();
  HeapStack out;
  for (std::uint64_t d = 0; d < k; ++d) out.heap.push_back({d, std::nullopt, std::nullopt});
  for (Elem d = 0; d < k; ++d)
    for (Elem e = 0; e < k; ++e)
      if (p->bits[d * k + e]) out.heap.push_back({cantor_pair(d, e) + k, SlVal(d), SlVal(e)});
  out.heap = normalize_heap(std::move(out.heap));
  for (Elem v : env.prefix) out.stack.prefix.push_back(SlVal(v));
  out.stack.fallback = SlVal(env.fallback);
  return out;
}

Interpretation heap_to_model(const Heap& h, const Stack& s, const std::string& rel) {
  Heap norm = normalize_heap(h);
  std::map<std::uint64_t, Elem> index;
  for (const auto& c : norm)
    if (!c.first && !c.second) index.emplace(c.addr, static_cast<Elem>(index.size()));
  if (index.empty()) throw PreconditionError("heap has no empty cell to serve as a domain element");
  std::size_t k = index.size();
  FinModel m(k);
  std::vector<std::uint8_t> bits(k * k, 0);
  for (const auto& c : norm) {
    if (!c.first || !c.second) continue;
    auto a = index.find(*c.first), b = index.find(*c.second);
    if (a != index.end() && b != index.end()) bits[a->second * k + b->second] = 1;
  }
  m.set_relation(rel, 2, std::move(bits));
  auto read = [&](const SlVal& v) -> Elem {
    if (!v) return 0;
    auto it = index.find(*v);
    return it == index.end() ? 0 : it->second;
  };
  Env env;
  for (const auto& v : s.prefix) env.prefix.push_back(read(v));
  env.fallback = read(s.fallback);
  return Interpretation{std::move(m), env};
}

SlFormula msl_to_sl(const SlFormula& phi) {
  switch (phi.kind()) {
    case SlFormula::Kind::Hooks: {
      const auto& t = phi.terms();
      return SlFormula::star(SlFormula::points_to(t[0], t[1], t[2]), SlFormula::truth());
    }
    case SlFormula::Kind::Falsum:
      return phi;
    case SlFormula::Kind::Bin:
      return SlFormula::bin(phi.op(), msl_to_sl(phi.lhs()), msl_to_sl(phi.rhs()));
    case SlFormula::Kind::Quant:
      return SlFormula::quant(phi.quantifier(), msl_to_sl(phi.body()));
    default:
      throw PreconditionError("formula is outside the minimal fragment");
  }
}

// ---------------------------------------------------------------------------

namespace {

using detail::explicit_index;
using detail::Token;

bool sl_keyword(const std::string& s) {
  static const std::set<std::string> kw{"and",  "or",       "->",    "iff",  "not",  "forall", "exists", "false",
                                        "true", "pointsto", "hooks", "star", "wand", "eq",     "emp",    "null"};
  return kw.count(s) != 0;
}

class SlParser {
 public:
  explicit SlParser(const std::string& text) : toks_(detail::tokenize(text)) {
    for (const auto& t : toks_)
      if (t.kind == Token::Kind::Ident)
        if (auto k = explicit_index(t.text)) reserved_.insert(*k);
  }

  SlFormula top() {
    SlFormula f = formula();
    if (peek().kind != Token::Kind::End) syntax("unexpected trailing input '" + peek().text + "'", peek().pos);
    return f;
  }

 private:
  [[noreturn]] void syntax(const std::string& msg, std::size_t pos) {
    throw InputError(InputError::Kind::Syntax, "syntax error at position " + std::to_string(pos) + ": " + msg,
                     pos);
  }
  const Token& peek() const { return toks_[at_]; }
  Token next() { return toks_[at_++]; }
  void close() {
    auto t = next();
    if (t.kind != Token::Kind::RParen) syntax("expected ')'", t.pos);
  }

  SlTerm term() {
    auto t = next();
    if (t.kind != Token::Kind::Ident) syntax("expected a variable or null", t.pos);
    if (t.text == "null") return std::nullopt;
    for (std::size_t i = binders_.size(); i-- > 0;)
      if (binders_[i] == t.text) return binders_.size() - 1 - i;
    if (auto k = explicit_index(t.text)) return *k + binders_.size();
    if (sl_keyword(t.text)) syntax("keyword '" + t.text + "' used as a term", t.pos);
    auto it = free_.find(t.text);
    if (it == free_.end()) {
      while (reserved_.count(next_free_)) ++next_free_;
      it = free_.emplace(t.text, next_free_++).first;
    }
    return it->second + binders_.size();
  }

  SlFormula formula() {
    auto t = next();
    if (t.kind == Token::Kind::Ident) {
      if (t.text == "false") return SlFormula::falsum();
      if (t.text == "true") return SlFormula::truth();
      if (t.text == "emp") return SlFormula::emp();
      syntax("unexpected '" + t.text + "'", t.pos);
    }
    if (t.kind != Token::Kind::LParen) syntax("expected formula", t.pos);
    auto head = next();
    if (head.kind != Token::Kind::Ident) syntax("expected operator", head.pos);
    const std::string& h = head.text;
    if (h == "pointsto" || h == "hooks") {
      SlTerm a = term(), b = term(), c = term();
      close();
      return h == "pointsto" ? SlFormula::points_to(a, b, c) : SlFormula::hooks(a, b, c);
    }
    if (h == "eq") {
      SlTerm a = term(), b = term();
      close();
      return SlFormula::eq(a, b);
    }
    if (h == "and" || h == "or") {
      std::vector<SlFormula> parts;
      while (peek().kind != Token::Kind::RParen) {
        if (peek().kind == Token::Kind::End) syntax("unterminated connective", peek().pos);
        parts.push_back(formula());
      }
      next();
      if (parts.size() < 2) syntax("'" + h + "' needs at least two operands", head.pos);
      SlFormula acc = parts.back();
      for (std::size_t i = parts.size() - 1; i-- > 0;)
        acc = SlFormula::bin(h == "and" ? BinOp::And : BinOp::Or, parts[i], acc);
      return acc;
    }
    if (h == "->" || h == "star" || h == "wand") {
      SlFormula a = formula(), b = formula();
      close();
      if (h == "->") return SlFormula::bin(BinOp::Impl, a, b);
      return h == "star" ? SlFormula::star(a, b) : SlFormula::wand(a, b);
    }
    if (h == "iff") {
      SlFormula a = formula(), b = formula();
      close();
      return SlFormula::bin(BinOp::And, SlFormula::bin(BinOp::Impl, a, b), SlFormula::bin(BinOp::Impl, b, a));
    }
    if (h == "not") {
      SlFormula a = formula();
      close();
      return SlFormula::bin(BinOp::Impl, a, SlFormula::falsum());
    }
    if (h == "forall" || h == "exists") {
      auto name = next();
      if (name.kind != Token::Kind::Ident || sl_keyword(name.text) || explicit_index(name.text))
        syntax("invalid binder name", name.pos);
      binders_.push_back(name.text);
      SlFormula body = formula();
      binders_.pop_back();
      close();
      return SlFormula::quant(h == "forall" ? Quant::All : Quant::Ex, body);
    }
    syntax("unknown operator '" + h + "'", head.pos);
  }

  std::vector<Token> toks_;
  std::size_t at_ = 0;
  std::vector<std::string> binders_;
  std::map<std::string, std::size_t> free_;
  std::set<std::size_t> reserved_;
  std::size_t next_free_ = 0;
};

std::string print_term(const SlTerm& t, std::size_t depth) {
  if (!t) return "null";
  if (*t < depth) return "v" + std::to_string(depth - 1 - *t);
  return "#" + std::to_string(*t - depth);
}

std::string print_rec(const SlFormula& f, std::size_t depth) {
  const auto& t = f.terms();
  switch (f.kind()) {
    case SlFormula::Kind::PointsTo:
    case SlFormula::Kind::Hooks:
      return std::string("(") + (f.kind() == SlFormula::Kind::PointsTo ? "pointsto " : "hooks ") +
             print_term(t[0], depth) + " " + print_term(t[1], depth) + " " + print_term(t[2], depth) + ")";
    case SlFormula::Kind::Emp:
      return "emp";
    case SlFormula::Kind::Eq:
      return "(eq " + print_term(t[0], depth) + " " + print_term(t[1], depth) + ")";
    case SlFormula::Kind::Falsum:
      return "false";
    case SlFormula::Kind::Star:
      return "(star " + print_rec(f.lhs(), depth) + " " + print_rec(f.rhs(), depth) + ")";
    case SlFormula::Kind::Wand:
      return "(wand " + print_rec(f.lhs(), depth) + " " + print_rec(f.rhs(), depth) + ")";
    case SlFormula::Kind::Bin: {
      const char* op = f.op() == BinOp::And ? "and" : f.op() == BinOp::Or ? "or" : "->";
      return std::string("(") + op + " " + print_rec(f.lhs(), depth) + " " + print_rec(f.rhs(), depth) + ")";
    }
    case SlFormula::Kind::Quant:
      return std::string("(") + (f.quantifier() == Quant::All ? "forall" : "exists") + " v" +
             std::to_string(depth) + " " + print_rec(f.body(), depth + 1) + ")";
  }
  return "false";
}

}  // namespace

SlFormula parse_sl(const std::string& text) { return SlParser(text).top(); }

std::string print_sl(const SlFormula& phi) { return print_rec(phi, 0); }

}  // namespace fsat
