#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsat {

/// Raised on malformed input: syntax errors, unknown symbols, arity mismatches.
class InputError : public std::runtime_error {
 public:
  enum class Kind { Syntax, UnknownSymbol, ArityMismatch, Format };

  InputError(Kind kind, const std::string& what, std::size_t position = 0)
      : std::runtime_error(what), kind_(kind), position_(position) {}

  Kind kind() const { return kind_; }
  std::size_t position() const { return position_; }

 private:
  Kind kind_;
  std::size_t position_;
};

/// Raised when an enumeration would exceed a configured ceiling.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an operation's precondition does not hold for its input.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Symbol {
  std::string name;
  std::size_t arity = 0;

  friend bool operator==(const Symbol&, const Symbol&) = default;
};

/// Function and relation symbols with arities. Names are unique within each list
/// and the two name spaces are disjoint.
class Signature {
 public:
  Signature() = default;
  Signature(std::vector<Symbol> functions, std::vector<Symbol> relations);

  const std::vector<Symbol>& functions() const { return functions_; }
  const std::vector<Symbol>& relations() const { return relations_; }

  std::optional<std::size_t> function_arity(const std::string& name) const;
  std::optional<std::size_t> relation_arity(const std::string& name) const;
  bool has_name(const std::string& name) const;

  void add_function(const std::string& name, std::size_t arity);
  void add_relation(const std::string& name, std::size_t arity);

  /// `base` if unused, otherwise `base` with the smallest numeric suffix that is.
  std::string fresh_name(const std::string& base) const;

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::vector<Symbol> functions_;
  std::vector<Symbol> relations_;
};

struct Term {
  enum class Kind { Var, App };

  Kind kind = Kind::Var;
  std::size_t var = 0;
  std::string fn;
  std::vector<Term> args;

  static Term variable(std::size_t index);
  static Term apply(std::string fn, std::vector<Term> args = {});

  bool is_var() const { return kind == Kind::Var; }

  friend bool operator==(const Term&, const Term&) = default;
};

enum class BinOp { Impl, And, Or };
enum class Quant { All, Ex };

/// First-order formula with de Bruijn variables. Subformulas are shared and
/// immutable, so copies are cheap.
class Formula {
 public:
  enum class Kind { Falsum, Atom, Bin, Quant };

  Formula();  // falsum

  static Formula falsum();
  static Formula atom(std::string rel, std::vector<Term> args = {});
  static Formula bin(BinOp op, Formula lhs, Formula rhs);
  static Formula quant(Quant q, Formula body);

  Kind kind() const { return node_->kind; }
  BinOp op() const { return node_->op; }
  Quant quantifier() const { return node_->q; }
  const std::string& rel() const { return node_->rel; }
  const std::vector<Term>& args() const { return node_->args; }
  const Formula& lhs() const { return *node_->lhs; }
  const Formula& rhs() const { return *node_->rhs; }
  const Formula& body() const { return *node_->lhs; }

  /// Identity of the shared node; stable for the lifetime of this formula.
  const void* id() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node {
    Kind kind = Kind::Falsum;
    BinOp op = BinOp::And;
    Quant q = Quant::All;
    std::string rel;
    std::vector<Term> args;
    std::shared_ptr<const Formula> lhs, rhs;
  };
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

// Derived connectives.
Formula conj(Formula a, Formula b);
Formula disj(Formula a, Formula b);
Formula impl(Formula a, Formula b);
Formula neg(Formula a);
Formula iff(Formula a, Formula b);
Formula truth();
Formula forall(Formula body);
Formula exists(Formula body);
/// Conjunction of a list; truth() when empty.
Formula conj_all(const std::vector<Formula>& parts);
/// Disjunction of a list; falsum when empty.
Formula disj_all(const std::vector<Formula>& parts);
Formula exists_n(std::size_t n, Formula body);
Formula forall_n(std::size_t n, Formula body);

inline Term var(std::size_t i) { return Term::variable(i); }

std::vector<std::size_t> free_vars(const Term& t);
/// Sorted, duplicate-free free indices.
std::vector<std::size_t> free_vars(const Formula& phi);
/// 1 + largest free index, 0 when closed.
std::size_t free_bound(const Formula& phi);

struct SymbolUse {
  std::vector<std::string> functions;
  std::vector<std::string> relations;
};

/// Symbols occurring in `phi`, each once, in order of first occurrence.
SymbolUse symbols_of(const Formula& phi);

/// Adds `delta` to every variable index >= cutoff. Throws PreconditionError if a
/// negative shift would move an index below the cutoff.
Term shift(const Term& t, std::size_t cutoff, long delta);
Formula shift(const Formula& phi, std::size_t cutoff, long delta);

std::size_t depth(const Formula& phi);
std::size_t quantifier_depth(const Formula& phi);
std::size_t term_depth(const Term& t);

/// Checks symbols and arities against `sig`; throws InputError on violation.
void check_well_formed(const Formula& phi, const Signature& sig);

/// Parses the s-expression syntax. Binders are named; names not bound and not
/// declared as constants are free variables, numbered by first appearance.
/// `#k` names free variable k explicitly.
Formula parse_formula(const std::string& text, const Signature& sig);
Term parse_term(const std::string& text, const Signature& sig);

std::string print_formula(const Formula& phi);
std::string print_term(const Term& t, std::size_t depth);

}  // namespace fsat
