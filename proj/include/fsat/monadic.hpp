#pragma once

#include "fsat/passes.hpp"

namespace fsat {

struct MonadicOptions {
  /// Ceiling on the number of base predicates n; the search space has 2^n points.
  std::size_t max_predicates = 10;
};

struct MonadicResult {
  bool sat = false;
  /// On SAT, a model of the input formula over its own signature.
  std::optional<Interpretation> witness;
  /// Predicates of the base problem and the number of points in the witness domain.
  std::size_t base_predicates = 0;
  std::size_t search_nodes = 0;
  /// Passes applied before the base decision.
  std::vector<std::string> steps;
};

/// Decides satisfiability over (no functions; unary relations). Domains are
/// nonempty sets of points of B^n, point v interpreting P_i by its i-th bit.
MonadicResult decide_monadic_base(const Formula& phi, const Signature& sig, const MonadicOptions& opts = {});

/// Full decision for signatures with all arities <= 1, or with all relation
/// arities 0 (any functions). The witness is transported back and re-checked.
MonadicResult decide_monadic_full(const Formula& phi, const Signature& sig, const MonadicOptions& opts = {});

}  // namespace fsat
