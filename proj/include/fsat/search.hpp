#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "fsat/semantics.hpp"

namespace fsat {

struct SearchOptions {
  /// Ceiling on (table combinations x assignments) per domain size.
  std::uint64_t max_candidates = 50'000'000;
  /// Binary relation pinned to the diagonal instead of enumerated.
  std::optional<std::string> diagonal;
};

struct SearchOutcome {
  enum class Kind { Sat, UnsatUpTo, UnsatOnDomain };

  Kind kind = Kind::UnsatOnDomain;
  std::optional<Interpretation> witness;
  /// Domain size of the witness, the exhausted k, or the exhausted bound.
  std::size_t bound = 0;

  bool sat() const { return kind == Kind::Sat; }
};

/// Number of candidates decide_fixed_domain would examine, saturating at UINT64_MAX.
std::uint64_t candidate_count(const Formula& phi, const Signature& sig, std::size_t k,
                              const SearchOptions& opts = {});

/// Calls `visit` on every satisfying (model, env) over {0..k-1} in canonical
/// order until it returns false. Relations vary slowest (signature order), then
/// functions, then the assignment of free_vars(phi). Within a table entry 0 is
/// the least significant digit; within the assignment the first free variable
/// is the most significant. Symbols of `sig` absent from phi keep zero tables.
/// Returns the number of witnesses visited.
std::uint64_t for_each_witness(const Formula& phi, const Signature& sig, std::size_t k,
                               const std::function<bool(const Interpretation&)>& visit,
                               const SearchOptions& opts = {});

SearchOutcome decide_fixed_domain(const Formula& phi, const Signature& sig, std::size_t k,
                                  const SearchOptions& opts = {});
SearchOutcome search_up_to(const Formula& phi, const Signature& sig, std::size_t kmax,
                           const SearchOptions& opts = {});
/// Semi-decision: Sat for some finite fuel iff phi is finitely satisfiable.
/// UnsatUpTo is relative to the fuel, not a proof.
SearchOutcome enumerate_fsat(const Formula& phi, const Signature& sig, std::size_t fuel,
                             const SearchOptions& opts = {});

}  // namespace fsat
