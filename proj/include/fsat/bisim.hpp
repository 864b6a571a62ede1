#pragma once

#include "fsat/semantics.hpp"

namespace fsat {

/// Binary relation on {0..k-1} as a k x k bit matrix.
class PairRelation {
 public:
  explicit PairRelation(std::size_t k = 0, bool value = false) : k_(k), bits_(k * k, value ? 1 : 0) {}

  static PairRelation full(std::size_t k) { return PairRelation(k, true); }
  static PairRelation identity(std::size_t k);

  std::size_t size() const { return k_; }
  bool get(Elem x, Elem y) const { return bits_[x * k_ + y] != 0; }
  void set(Elem x, Elem y, bool v) { bits_[x * k_ + y] = v ? 1 : 0; }
  std::size_t count() const;

  bool is_equivalence() const;
  bool subset_of(const PairRelation& other) const;

  friend bool operator==(const PairRelation&, const PairRelation&) = default;

 private:
  std::size_t k_;
  std::vector<std::uint8_t> bits_;
};

/// One refinement step: keeps (x, y) iff swapping x for y at any argument
/// position of any listed function lands in R, and of any listed relation
/// preserves truth.
PairRelation apply_F(const FinModel& m, const std::vector<std::string>& lF, const std::vector<std::string>& lP,
                     const PairRelation& R);

struct Fixpoint {
  PairRelation relation;
  /// Number of applications of apply_F, the last one confirming stability.
  std::size_t iterations = 0;
};

/// Greatest fixpoint of apply_F from the full relation.
Fixpoint indist_fixpoint(const FinModel& m, const std::vector<std::string>& lF, const std::vector<std::string>& lP);

/// Quotient of a model by an equivalence that is a congruence for every table
/// in the model. Class i is the class of the i-th smallest representative.
Interpretation quotient_model(const FinModel& m, const Env& env, const PairRelation& equiv);

/// Quotient by first-order indistinguishability over symbols_of(phi). Other
/// tables are re-read through class representatives.
Interpretation minimize_model(const FinModel& m, const Env& env, const Formula& phi);

}  // namespace fsat
