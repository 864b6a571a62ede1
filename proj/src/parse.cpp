#include <map>
#include <set>

#include "fsat/logic.hpp"
#include "sexpr.hpp"

namespace fsat {

namespace {

using detail::Token;
using detail::explicit_index;
using detail::tokenize;

bool is_keyword(const std::string& s) {
  return s == "and" || s == "or" || s == "->" || s == "iff" || s == "not" || s == "forall" || s == "exists" ||
         s == "false" || s == "true";
}

class Parser {
 public:
  Parser(const std::string& text, const Signature& sig) : toks_(tokenize(text)), sig_(sig) {
    for (const auto& t : toks_)
      if (t.kind == Token::Kind::Ident)
        if (auto k = explicit_index(t.text)) reserved_.insert(*k);
  }

  Formula formula_top() {
    Formula f = formula();
    expect_end();
    return f;
  }

  Term term_top() {
    Term t = term();
    expect_end();
    return t;
  }

 private:
  [[noreturn]] void syntax(const std::string& msg, std::size_t pos) {
    throw InputError(InputError::Kind::Syntax, "syntax error at position " + std::to_string(pos) + ": " + msg,
                     pos);
  }

  const Token& peek() const { return toks_[at_]; }
  Token next() { return toks_[at_++]; }

  void expect_end() {
    if (peek().kind != Token::Kind::End) syntax("unexpected trailing input '" + peek().text + "'", peek().pos);
  }

  void expect_rparen() {
    auto t = next();
    if (t.kind != Token::Kind::RParen) syntax("expected ')'", t.pos);
  }

  std::string ident() {
    auto t = next();
    if (t.kind != Token::Kind::Ident) syntax("expected identifier", t.pos);
    return t.text;
  }

  std::size_t free_index(const std::string& name) {
    if (auto k = explicit_index(name)) return *k;
    auto it = free_.find(name);
    if (it != free_.end()) return it->second;
    while (reserved_.count(next_free_)) ++next_free_;
    std::size_t idx = next_free_++;
    free_.emplace(name, idx);
    return idx;
  }

  Term name_term(const std::string& name, std::size_t pos) {
    for (std::size_t i = binders_.size(); i-- > 0;)
      if (binders_[i] == name) return Term::variable(binders_.size() - 1 - i);
    if (auto ar = sig_.function_arity(name)) {
      if (*ar != 0)
        throw InputError(InputError::Kind::ArityMismatch,
                         "function '" + name + "' expects " + std::to_string(*ar) + " arguments, got 0", pos);
      return Term::apply(name);
    }
    if (sig_.relation_arity(name)) syntax("relation symbol '" + name + "' used as a term", pos);
    if (is_keyword(name)) syntax("keyword '" + name + "' used as a term", pos);
    return Term::variable(free_index(name) + binders_.size());
  }

  Term term() {
    auto t = next();
    if (t.kind == Token::Kind::Ident) return name_term(t.text, t.pos);
    if (t.kind != Token::Kind::LParen) syntax("expected term", t.pos);
    auto head_pos = peek().pos;
    std::string fn = ident();
    auto ar = sig_.function_arity(fn);
    if (!ar) throw InputError(InputError::Kind::UnknownSymbol, "unknown function symbol '" + fn + "'", head_pos);
    std::vector<Term> args;
    while (peek().kind != Token::Kind::RParen) {
      if (peek().kind == Token::Kind::End) syntax("unterminated application", peek().pos);
      args.push_back(term());
    }
    next();
    if (args.size() != *ar)
      throw InputError(InputError::Kind::ArityMismatch,
                       "function '" + fn + "' expects " + std::to_string(*ar) + " arguments, got " +
                           std::to_string(args.size()),
                       head_pos);
    return Term::apply(fn, std::move(args));
  }

  Formula atom(const std::string& rel, std::size_t pos, bool parenthesized) {
    auto ar = sig_.relation_arity(rel);
    if (!ar) throw InputError(InputError::Kind::UnknownSymbol, "unknown relation symbol '" + rel + "'", pos);
    std::vector<Term> args;
    if (parenthesized) {
      while (peek().kind != Token::Kind::RParen) {
        if (peek().kind == Token::Kind::End) syntax("unterminated atom", peek().pos);
        args.push_back(term());
      }
      next();
    }
    if (args.size() != *ar)
      throw InputError(InputError::Kind::ArityMismatch,
                       "relation '" + rel + "' expects " + std::to_string(*ar) + " arguments, got " +
                           std::to_string(args.size()),
                       pos);
    return Formula::atom(rel, std::move(args));
  }

  Formula formula() {
    auto t = next();
    if (t.kind == Token::Kind::Ident) {
      if (t.text == "false") return Formula::falsum();
      if (t.text == "true") return truth();
      return atom(t.text, t.pos, false);
    }
    if (t.kind != Token::Kind::LParen) syntax("expected formula", t.pos);
    auto head_pos = peek().pos;
    std::string head = ident();
    if (head == "and" || head == "or") {
      std::vector<Formula> parts;
      while (peek().kind != Token::Kind::RParen) {
        if (peek().kind == Token::Kind::End) syntax("unterminated connective", peek().pos);
        parts.push_back(formula());
      }
      next();
      if (parts.size() < 2) syntax("'" + head + "' needs at least two operands", head_pos);
      Formula acc = parts.back();
      for (std::size_t i = parts.size() - 1; i-- > 0;)
        acc = Formula::bin(head == "and" ? BinOp::And : BinOp::Or, parts[i], acc);
      return acc;
    }
    if (head == "->" || head == "iff") {
      Formula a = formula();
      Formula b = formula();
      expect_rparen();
      return head == "->" ? impl(a, b) : iff(a, b);
    }
    if (head == "not") {
      Formula a = formula();
      expect_rparen();
      return neg(a);
    }
    if (head == "forall" || head == "exists") {
      auto name_pos = peek().pos;
      std::string name = ident();
      if (is_keyword(name) || explicit_index(name)) syntax("invalid binder name '" + name + "'", name_pos);
      binders_.push_back(name);
      Formula body = formula();
      binders_.pop_back();
      expect_rparen();
      return Formula::quant(head == "forall" ? Quant::All : Quant::Ex, body);
    }
    return atom(head, head_pos, true);
  }

  std::vector<Token> toks_;
  std::size_t at_ = 0;
  const Signature& sig_;
  std::vector<std::string> binders_;
  std::map<std::string, std::size_t> free_;
  std::set<std::size_t> reserved_;
  std::size_t next_free_ = 0;
};

}  // namespace

Formula parse_formula(const std::string& text, const Signature& sig) { return Parser(text, sig).formula_top(); }

Term parse_term(const std::string& text, const Signature& sig) { return Parser(text, sig).term_top(); }

}  // namespace fsat
