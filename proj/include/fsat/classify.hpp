#pragma once

#include "fsat/logic.hpp"

namespace fsat {

struct Verdict {
  enum class Case { RelationAtLeastBinary, UnaryRelationAndBinaryFunction, Monadic, Propositional };

  Case which = Case::Monadic;
  bool decidable() const { return which == Case::Monadic || which == Case::Propositional; }
  /// Finite satisfiability is enumerable over every finite signature.
  bool enumerable = true;
  std::string note;
};

/// "a", "b", "monadic" or "propositional".
std::string case_label(Verdict::Case c);

Verdict classify_signature(const Signature& sig);

}  // namespace fsat
