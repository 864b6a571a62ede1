#pragma once

#include <functional>

#include "fsat/semantics.hpp"

namespace fsat {

using Transport = std::function<Interpretation(const Interpretation&)>;

/// One signature reduction: the transformed formula plus model transports in
/// both directions. `forward` maps models of `source` to models of `target`;
/// `backward` maps models of `target` to models of `source`.
struct ReductionStep {
  std::string name;
  Signature source_sig, target_sig;
  Formula source, target;
  /// Free variables of `target` introduced by the pass.
  std::vector<std::size_t> reserved;
  Transport forward, backward;
};

ReductionStep compact_symbols(const Formula& phi, const Signature& sig);
ReductionStep remove_functions(const Formula& phi, const Signature& sig);
ReductionStep add_congruence(const Formula& phi, const Signature& sig, const std::string& eqsym);
ReductionStep uniformize_arity(const Formula& phi, const Signature& sig, std::size_t n);
ReductionStep merge_relations(const Formula& phi, const Signature& sig);
ReductionStep remove_constants(const Formula& phi, const Signature& sig);
ReductionStep compress_to_membership(const Formula& phi, const Signature& sig);
ReductionStep rel2_to_fun(const Formula& phi, const Signature& sig, std::size_t n);
ReductionStep embed_padding(const Formula& phi, const Signature& sig, const Signature& target_sig);
ReductionStep lift_arity0_to1(const Formula& phi, const Signature& sig);
ReductionStep remove_monadic_functions(const Formula& phi, const Signature& sig);
ReductionStep propositional_collapse(const Formula& phi, const Signature& sig);
ReductionStep close_formula(const Formula& phi, const Signature& sig);

/// compact -> remove functions -> congruence -> uniform arity -> merge ->
/// remove constants -> membership.
std::vector<ReductionStep> pipeline_to_binary(const Formula& phi, const Signature& sig);

Interpretation forward_through(const std::vector<ReductionStep>& steps, Interpretation in);
Interpretation backward_through(const std::vector<ReductionStep>& steps, Interpretation in);

/// Membership encoding helpers, exposed for tests and the backward reading.
/// All take variables as terms valid at the current binder depth.
Formula mb_approx(const Term& x, const Term& y);
Formula mb_is_pair(const Term& p, const Term& x, const Term& y);
Formula mb_is_opair(const Term& p, const Term& x, const Term& y);
Formula mb_is_tuple(const Term& t, const std::vector<Term>& v);
Formula mb_is_tuple_in(const std::vector<Term>& v, const Term& r);
/// Extensionality: equal members implies membership in the same sets.
Formula mb_extensionality();

/// Names accepted by run_pass.
const std::vector<std::string>& pass_names();

struct PassArgs {
  std::optional<std::string> eqsym;
  std::optional<std::size_t> arity;
  std::optional<Signature> target_sig;
};

ReductionStep run_pass(const std::string& name, const Formula& phi, const Signature& sig, const PassArgs& args);

}  // namespace fsat
