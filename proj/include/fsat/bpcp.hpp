#pragma once

#include "fsat/semantics.hpp"

namespace fsat {

/// Bit strings are written with '0' and '1'; '1' is tt.
using BitString = std::string;

struct Card {
  BitString top, bottom;
  friend bool operator==(const Card&, const Card&) = default;
};

/// A card set. Order and duplicates do not affect any result.
using BpcpInstance = std::vector<Card>;

/// Throws InputError unless every string is over {0,1}.
void validate_instance(const BpcpInstance& r);

bool derivable(const BpcpInstance& r, const BitString& s, const BitString& t);

/// Shortest s with derivable(r, s, s), lexicographically first among equals.
/// nullopt says nothing about longer strings.
std::optional<BitString> solve_bpcp(const BpcpInstance& r, std::size_t max_len);

/// Constants star and e, unary ftt and fff, binary P, prec and eq.
Signature bpcp_signature();
Formula encode_phi(const BpcpInstance& r);

/// Element index of a string in the model built for bound n: 0 is the
/// overflow value, a string of length L sits at 2^L + its binary value.
std::size_t bn_index(const BitString& s);
/// Inverse of bn_index; nullopt for the overflow value.
std::optional<BitString> bn_string(std::size_t index);

/// Strings of length at most n plus overflow, with P read off `derivable`.
Interpretation build_Bn(const BpcpInstance& r, std::size_t n);

/// A solution read off any model of encode_phi(r) that interprets eq as the
/// diagonal. Throws PreconditionError if the model is not one.
BitString extract_solution(const BpcpInstance& r, const FinModel& m, const Env& env);

}  // namespace fsat
