#pragma once

#include <cstdint>
#include <map>
#include <memory>

#include "fsat/logic.hpp"

namespace fsat {

using Elem = std::uint32_t;

struct FunTable {
  std::size_t arity = 0;
  std::vector<Elem> table;

  friend bool operator==(const FunTable&, const FunTable&) = default;
};

struct RelTable {
  std::size_t arity = 0;
  std::vector<std::uint8_t> bits;

  friend bool operator==(const RelTable&, const RelTable&) = default;
};

/// k^arity, throwing ResourceError when the table would not fit in memory.
std::size_t table_length(std::size_t k, std::size_t arity);

/// Big-endian position of a tuple: sum of d_i * k^(a-i).
std::size_t tuple_index(const std::vector<Elem>& tuple, std::size_t k);
std::vector<Elem> tuple_at(std::size_t index, std::size_t arity, std::size_t k);

/// Finite interpretation over the domain {0..k-1}, tables given in extension.
class FinModel {
 public:
  explicit FinModel(std::size_t size = 1);

  std::size_t size() const { return size_; }

  void set_function(const std::string& name, std::size_t arity, std::vector<Elem> table);
  void set_relation(const std::string& name, std::size_t arity, std::vector<std::uint8_t> bits);
  /// All-zero / all-false tables of the right shape.
  void add_zero_function(const std::string& name, std::size_t arity);
  void add_empty_relation(const std::string& name, std::size_t arity);

  const FunTable* function(const std::string& name) const;
  const RelTable* relation(const std::string& name) const;
  FunTable* mutable_function(const std::string& name);
  RelTable* mutable_relation(const std::string& name);

  const std::map<std::string, FunTable>& functions() const { return functions_; }
  const std::map<std::string, RelTable>& relations() const { return relations_; }

  Elem apply(const std::string& fn, const std::vector<Elem>& args) const;
  bool holds(const std::string& rel, const std::vector<Elem>& args) const;
  void set_holds(const std::string& rel, const std::vector<Elem>& args, bool value);

  /// Signature read off the tables.
  Signature signature() const;

  friend bool operator==(const FinModel&, const FinModel&) = default;

 private:
  std::size_t size_;
  std::map<std::string, FunTable> functions_;
  std::map<std::string, RelTable> relations_;
};

/// Variable assignment: prefix entries, then a default for every later index.
struct Env {
  std::vector<Elem> prefix;
  Elem fallback = 0;

  Elem lookup(std::size_t i) const { return i < prefix.size() ? prefix[i] : fallback; }
  /// de Bruijn extension a . rho.
  Env cons(Elem a) const;
  void set(std::size_t i, Elem value);

  friend bool operator==(const Env&, const Env&) = default;
};

/// Formula compiled against one model. Table pointers are resolved once, so
/// the model's table contents may change between calls but not its shape.
class Evaluator {
 public:
  Evaluator(const FinModel& m, const Formula& phi);
  ~Evaluator();
  Evaluator(Evaluator&&) noexcept;
  Evaluator& operator=(Evaluator&&) noexcept;

  bool operator()(const Env& env) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Elem eval_term(const FinModel& m, const Env& env, const Term& t);
bool eval_formula(const FinModel& m, const Env& env, const Formula& phi);

/// True iff both models have size k and identical tables for the listed symbols.
bool models_ext_equal(const FinModel& m1, const FinModel& m2, const SymbolUse& syms);

/// Interpretation of a formula: a model together with an assignment.
struct Interpretation {
  FinModel model;
  Env env;
};

}  // namespace fsat
