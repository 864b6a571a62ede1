#pragma once

#include <set>

#include "fsat/semantics.hpp"

namespace fsat {

/// Possibly invalid address; nullopt is the null value.
using SlVal = std::optional<std::uint64_t>;
/// A term is null or a de Bruijn variable.
using SlTerm = std::optional<std::size_t>;

struct HeapCell {
  std::uint64_t addr = 0;
  SlVal first, second;
  friend auto operator<=>(const HeapCell&, const HeapCell&) = default;
};

using Heap = std::vector<HeapCell>;

struct Stack {
  std::vector<SlVal> prefix;
  SlVal fallback;

  SlVal lookup(std::size_t i) const { return i < prefix.size() ? prefix[i] : fallback; }
  friend bool operator==(const Stack&, const Stack&) = default;
};

class SlFormula {
 public:
  enum class Kind { PointsTo, Hooks, Emp, Star, Wand, Eq, Falsum, Bin, Quant };

  SlFormula();  // falsum

  static SlFormula points_to(SlTerm t, SlTerm a, SlTerm b);
  static SlFormula hooks(SlTerm t, SlTerm a, SlTerm b);
  static SlFormula emp();
  static SlFormula star(SlFormula l, SlFormula r);
  static SlFormula wand(SlFormula l, SlFormula r);
  static SlFormula eq(SlTerm a, SlTerm b);
  static SlFormula falsum();
  static SlFormula bin(BinOp op, SlFormula l, SlFormula r);
  static SlFormula quant(Quant q, SlFormula body);
  static SlFormula truth();

  Kind kind() const { return node_->kind; }
  BinOp op() const { return node_->op; }
  Quant quantifier() const { return node_->q; }
  /// Terms: (t, a, b) for cells, (a, b) for Eq.
  const std::vector<SlTerm>& terms() const { return node_->terms; }
  const SlFormula& lhs() const { return *node_->lhs; }
  const SlFormula& rhs() const { return *node_->rhs; }
  const SlFormula& body() const { return *node_->lhs; }

  friend bool operator==(const SlFormula& a, const SlFormula& b);

 private:
  struct Node {
    Kind kind = Kind::Falsum;
    BinOp op = BinOp::And;
    Quant q = Quant::All;
    std::vector<SlTerm> terms;
    std::shared_ptr<const SlFormula> lhs, rhs;
  };
  explicit SlFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Only Hooks, falsum, connectives and quantifiers.
bool is_msl(const SlFormula& phi);
bool uses_wand(const SlFormula& phi);

/// Sorted, duplicate-free copy; throws PreconditionError if not functional.
Heap normalize_heap(Heap h);

/// {null} plus heap addresses plus addresses the stack refers to.
std::set<SlVal> default_universe(const Heap& h, const Stack& s);

struct SlEvalOptions {
  /// Quantifier range; the default universe when empty.
  std::optional<std::set<SlVal>> universe;
  /// Largest extension heap tried for magic wands. Required if one occurs.
  std::optional<std::size_t> wand_bound;
};

/// Satisfaction over a functional heap. Exact for guarded formulas such as
/// those from encode_fsat_to_msl; with wands it is a bounded check only.
bool eval_sl(const Heap& h, const Stack& s, const SlFormula& phi, const SlEvalOptions& opts = {});

/// Closed formula over one binary relation and no functions, encoded so that
/// its finite models correspond to heaps satisfying the result.
SlFormula encode_fsat_to_msl(const Formula& phi, const Signature& sig);
/// The encoding without the nonemptiness conjunct; valid for open formulas.
SlFormula encode_body(const Formula& phi, const Signature& sig);

struct HeapStack {
  Heap heap;
  Stack stack;
};

/// Element d at address d, pair (d, e) at cantor(d, e) + k.
HeapStack model_to_heap(const FinModel& m, const Env& env, const std::string& rel);
/// Domain: addresses of empty cells in ascending order. Stack entries outside
/// the domain read as its first element.
Interpretation heap_to_model(const Heap& h, const Stack& s, const std::string& rel);

/// Replaces every Hooks with a points-to separated from truth.
SlFormula msl_to_sl(const SlFormula& phi);

/// Grammar: the first-order syntax with (pointsto t a b), (hooks t a b), emp,
/// (star f g), (wand f g), (eq t u); terms are names, #k or null.
SlFormula parse_sl(const std::string& text);
std::string print_sl(const SlFormula& phi);

}  // namespace fsat
