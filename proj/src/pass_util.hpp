#pragma once

#include <functional>

#include "fsat/passes.hpp"

namespace fsat::detail {

using AtomMap = std::function<Formula(const Formula& atom, std::size_t depth)>;
using QuantMap = std::function<Formula(Quant q, Formula body, std::size_t depth)>;

/// Rebuilds phi bottom-up, replacing atoms via `atom` and quantifier nodes via
/// `quant` (which receives the already transformed body). `depth` is the
/// binder depth at the node.
Formula rebuild(const Formula& phi, const AtomMap& atom, const QuantMap& quant = nullptr, std::size_t depth = 0);

using TermMap = std::function<std::optional<Term>(const Term& t, std::size_t depth)>;

/// Rewrites terms top-down: `fn` may return a replacement, otherwise
/// arguments are rewritten recursively.
Term map_term(const Term& t, std::size_t depth, const TermMap& fn);
Formula map_terms(const Formula& phi, const TermMap& fn);

/// Copies every table of `in` into `out` except those named in `skip`.
void copy_tables(const FinModel& in, FinModel& out, const std::vector<std::string>& skip = {});

/// Model of `sig` over k elements with zero tables, then overwritten by any
/// same-named tables of `from` (same size required).
FinModel complete_model(const Signature& sig, std::size_t k, const FinModel* from = nullptr);

[[noreturn]] void fail_pre(const std::string& pass, const std::string& why);

}  // namespace fsat::detail
