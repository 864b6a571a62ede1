#include "fsat/search.hpp"

#include <algorithm>
#include <limits>

namespace fsat {

namespace {

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

std::uint64_t sat_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    r = sat_mul(r, base);
    if (r == std::numeric_limits<std::uint64_t>::max()) break;
  }
  return r;
}

// One digit of the odometer: a mutable table cell or an assignment slot.
struct Digit {
  Elem* fun_cell = nullptr;
  std::uint8_t* rel_cell = nullptr;
  Elem* env_cell = nullptr;
  Elem radix = 2;

  Elem get() const { return fun_cell ? *fun_cell : rel_cell ? *rel_cell : *env_cell; }
  void set(Elem v) const {
    if (fun_cell)
      *fun_cell = v;
    else if (rel_cell)
      *rel_cell = static_cast<std::uint8_t>(v);
    else
      *env_cell = v;
  }
};

struct Space {
  FinModel model;
  std::vector<std::string> rels, funs;
  std::vector<std::size_t> fv;

  Space(const Formula& phi, const Signature& sig, std::size_t k, const SearchOptions& opts) : model(k) {
    check_well_formed(phi, sig);
    if (opts.diagonal) {
      auto ar = sig.relation_arity(*opts.diagonal);
      if (!ar || *ar != 2) throw PreconditionError("pinned relation '" + *opts.diagonal + "' must be binary");
    }
    auto used = symbols_of(phi);
    auto occurs = [](const std::vector<std::string>& v, const std::string& s) {
      return std::find(v.begin(), v.end(), s) != v.end();
    };
    for (const auto& r : sig.relations()) {
      model.add_empty_relation(r.name, r.arity);
      if (opts.diagonal && r.name == *opts.diagonal) {
        for (Elem x = 0; x < k; ++x) model.set_holds(r.name, {x, x}, true);
      } else if (occurs(used.relations, r.name)) {
        rels.push_back(r.name);
      }
    }
    for (const auto& f : sig.functions()) {
      model.add_zero_function(f.name, f.arity);
      if (occurs(used.functions, f.name)) funs.push_back(f.name);
    }
    fv = free_vars(phi);
  }

  std::uint64_t count() const {
    std::size_t k = model.size();
    std::uint64_t n = 1;
    for (const auto& r : rels) n = sat_mul(n, sat_pow(2, model.relation(r)->bits.size()));
    for (const auto& f : funs) n = sat_mul(n, sat_pow(k, model.function(f)->table.size()));
    return sat_mul(n, sat_pow(k, fv.size()));
  }
};

}  // namespace

std::uint64_t candidate_count(const Formula& phi, const Signature& sig, std::size_t k, const SearchOptions& opts) {
  if (k == 0) throw PreconditionError("domain size must be at least 1");
  return Space(phi, sig, k, opts).count();
}

std::uint64_t for_each_witness(const Formula& phi, const Signature& sig, std::size_t k,
                               const std::function<bool(const Interpretation&)>& visit,
                               const SearchOptions& opts) {
  if (k == 0) throw PreconditionError("domain size must be at least 1");
  Space space(phi, sig, k, opts);
  std::uint64_t total = space.count();
  if (total > opts.max_candidates)
    throw ResourceError("search space at domain size " + std::to_string(k) + " has " +
                        (total == std::numeric_limits<std::uint64_t>::max() ? std::string("more than 2^64")
                                                                            : std::to_string(total)) +
                        " candidates, above the ceiling " + std::to_string(opts.max_candidates));

  Interpretation cur{space.model, Env{}};
  cur.env.prefix.assign(space.fv.empty() ? 0 : space.fv.back() + 1, 0);

  // Fastest digit first.
  std::vector<Digit> digits;
  for (auto it = space.fv.rbegin(); it != space.fv.rend(); ++it)
    digits.push_back(Digit{nullptr, nullptr, &cur.env.prefix[*it], static_cast<Elem>(k)});
  for (auto it = space.funs.rbegin(); it != space.funs.rend(); ++it)
    for (auto& cell : cur.model.mutable_function(*it)->table)
      digits.push_back(Digit{&cell, nullptr, nullptr, static_cast<Elem>(k)});
  for (auto it = space.rels.rbegin(); it != space.rels.rend(); ++it)
    for (auto& cell : cur.model.mutable_relation(*it)->bits) digits.push_back(Digit{nullptr, &cell, nullptr, 2});

  Evaluator eval(cur.model, phi);
  std::uint64_t found = 0;
  while (true) {
    if (eval(cur.env)) {
      ++found;
      if (!visit(cur)) return found;
    }
    std::size_t i = 0;
    for (; i < digits.size(); ++i) {
      Elem v = digits[i].get() + 1;
      if (v < digits[i].radix) {
        digits[i].set(v);
        break;
      }
      digits[i].set(0);
    }
    if (i == digits.size()) return found;
  }
}

SearchOutcome decide_fixed_domain(const Formula& phi, const Signature& sig, std::size_t k,
                                  const SearchOptions& opts) {
  SearchOutcome out;
  out.kind = SearchOutcome::Kind::UnsatOnDomain;
  out.bound = k;
  for_each_witness(
      phi, sig, k,
      [&](const Interpretation& w) {
        out.kind = SearchOutcome::Kind::Sat;
        out.witness = w;
        return false;
      },
      opts);
  if (out.witness && !eval_formula(out.witness->model, out.witness->env, phi))
    throw std::logic_error("search witness failed re-check");
  return out;
}

SearchOutcome search_up_to(const Formula& phi, const Signature& sig, std::size_t kmax, const SearchOptions& opts) {
  if (kmax == 0) throw PreconditionError("size bound must be at least 1");
  for (std::size_t k = 1; k <= kmax; ++k) {
    auto r = decide_fixed_domain(phi, sig, k, opts);
    if (r.sat()) return r;
  }
  SearchOutcome out;
  out.kind = SearchOutcome::Kind::UnsatUpTo;
  out.bound = kmax;
  return out;
}

SearchOutcome enumerate_fsat(const Formula& phi, const Signature& sig, std::size_t fuel, const SearchOptions& opts) {
  if (fuel == 0) throw PreconditionError("fuel must be at least 1");
  return search_up_to(phi, sig, fuel, opts);
}

}  // namespace fsat
