#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fsat/semantics.hpp"

namespace fsat {

/// Unnormalized finitely branching tree; children may repeat and come in any order.
struct RawTree {
  std::vector<RawTree> children;
};

/// Hereditarily finite set in canonical form: children sorted under a total
/// order on trees and free of duplicates, so structural equality is set equality.
class Hfs {
 public:
  Hfs();  // the empty set

  /// Set with the given (canonical) members; sorts and deduplicates.
  static Hfs of(std::vector<Hfs> members);

  const std::vector<Hfs>& members() const { return *members_; }
  bool empty() const { return members_->empty(); }
  std::size_t rank() const;

  /// Total order: lexicographic on the sorted member sequences.
  friend int compare(const Hfs& a, const Hfs& b);
  friend bool operator==(const Hfs& a, const Hfs& b) { return compare(a, b) == 0; }
  friend bool operator<(const Hfs& a, const Hfs& b) { return compare(a, b) < 0; }

  std::string to_string() const;

 private:
  std::shared_ptr<const std::vector<Hfs>> members_;
};

Hfs normalize(const RawTree& t);
RawTree to_raw(const Hfs& h);

bool mem(const Hfs& x, const Hfs& y);
bool hfs_eq(const Hfs& x, const Hfs& y);

/// Kuratowski pair {{x},{x,y}}.
Hfs opair(const Hfs& x, const Hfs& y);
/// (x1,(x2,...(xn,{})...)); the empty tuple is the empty set.
Hfs tuple(const std::vector<Hfs>& v);
/// Von Neumann numeral: 0 = {}, n+1 = n u {n}.
Hfs numeral(std::size_t n);

/// The roots together with every member of a member, sorted and duplicate-free.
std::vector<Hfs> transitive_closure(const std::vector<Hfs>& roots);

constexpr std::size_t kPowersetGuard = 16;
Hfs powerset(const Hfs& h);

inline constexpr const char* kMembership = "in";

struct MembershipModel {
  /// Model over (no functions; {in^2}).
  FinModel model{1};
  Env env;
  std::vector<Hfs> universe;
  /// Index in the universe of the encoding of each source element.
  std::vector<Elem> element;
  Elem d = 0, r = 0;
};

constexpr std::size_t kMembershipUniverseGuard = 4096;

/// Builds the set-theoretic witness for a single n-ary relation: d holds the
/// numerals 0..k-1, r holds the tuples of related numerals, and the universe is
/// the transitive closure of {d, r}. Env values are mapped through the numeral
/// encoding; d and r are placed at env positions d_slot and d_slot + 1.
MembershipModel build_membership_model(const FinModel& m, const Env& env, std::size_t d_slot);

}  // namespace fsat
