#pragma once

#include <sstream>

#include "fsat/passes.hpp"
#include "fsat/search.hpp"

namespace fsat::testing {

struct PassTally {
  std::size_t forward = 0;
  std::size_t backward = 0;
  /// Target searches that hit the resource guard.
  std::size_t skipped = 0;
  std::vector<std::string> failures;

  void merge(const PassTally& o) {
    forward += o.forward;
    backward += o.backward;
    skipped += o.skipped;
    failures.insert(failures.end(), o.failures.begin(), o.failures.end());
  }
};

struct PassBounds {
  /// Largest source domain used to produce forward witnesses.
  std::size_t k_forward = 2;
  /// Source search options; pins equality symbols for passes that assume them.
  SearchOptions forward_opts{};
  /// Largest target domain searched for backward witnesses; 0 disables.
  std::size_t k_backward = 2;
  SearchOptions backward_opts{};
};

/// Forward: the canonical source witness at each domain size maps to a target model, and mapping back yields
/// source models again. Backward: target witnesses found by search map to
/// source models.
inline PassTally check_step(const ReductionStep& s, const PassBounds& b) {
  PassTally t;
  auto fail = [&](const std::string& what) {
    t.failures.push_back(s.name + " " + what + " on " + print_formula(s.source));
  };
  for (std::size_t k = 1; k <= b.k_forward; ++k) {
    SearchOutcome src;
    try {
      src = decide_fixed_domain(s.source, s.source_sig, k, b.forward_opts);
    } catch (const ResourceError&) {
      ++t.skipped;
      continue;
    }
    if (!src.sat()) continue;
    ++t.forward;
    try {
      Interpretation fw = s.forward(*src.witness);
      if (!eval_formula(fw.model, fw.env, s.target)) {
        fail("forward model falsifies target at k=" + std::to_string(k));
        continue;
      }
      Interpretation back = s.backward(fw);
      if (!eval_formula(back.model, back.env, s.source)) fail("round trip falsifies source");
    } catch (const std::exception& e) {
      fail(std::string("forward threw: ") + e.what());
    }
  }
  if (b.k_backward == 0) return t;
  try {
    auto out = search_up_to(s.target, s.target_sig, b.k_backward, b.backward_opts);
    if (out.sat()) {
      ++t.backward;
      try {
        Interpretation bw = s.backward(*out.witness);
        if (!eval_formula(bw.model, bw.env, s.source)) fail("backward model falsifies source");
      } catch (const std::exception& e) {
        fail(std::string("backward threw: ") + e.what());
      }
    }
  } catch (const ResourceError&) {
    ++t.skipped;
  }
  return t;
}

}  // namespace fsat::testing
