#include "fsat/classify.hpp"

#include <algorithm>

namespace fsat {

std::string case_label(Verdict::Case c) {
  switch (c) {
    case Verdict::Case::RelationAtLeastBinary:
      return "a";
    case Verdict::Case::UnaryRelationAndBinaryFunction:
      return "b";
    case Verdict::Case::Monadic:
      return "monadic";
    case Verdict::Case::Propositional:
      return "propositional";
  }
  return "";
}

Verdict classify_signature(const Signature& sig) {
  std::size_t max_rel = 0, max_fun = 0;
  bool unary_rel = false;
  for (const auto& r : sig.relations()) {
    max_rel = std::max(max_rel, r.arity);
    unary_rel = unary_rel || r.arity == 1;
  }
  for (const auto& f : sig.functions()) max_fun = std::max(max_fun, f.arity);

  Verdict v;
  if (max_rel >= 2)
    v.which = Verdict::Case::RelationAtLeastBinary;
  else if (unary_rel && max_fun >= 2)
    v.which = Verdict::Case::UnaryRelationAndBinaryFunction;
  else if (max_fun <= 1)
    v.which = Verdict::Case::Monadic;
  else
    v.which = Verdict::Case::Propositional;
  v.note = "symbols are named strings, so symbol equality is decidable";
  return v;
}

}  // namespace fsat
