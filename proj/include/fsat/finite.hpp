#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fsat/logic.hpp"

namespace fsat {

/// First pair (i, j), i < j, with eq(l[i], l[j]), scanning j outer and i inner.
template <class T, class Eq>
std::optional<std::pair<std::size_t, std::size_t>> find_duplicate(const std::vector<T>& l, Eq eq) {
  for (std::size_t j = 1; j < l.size(); ++j)
    for (std::size_t i = 0; i < j; ++i)
      if (eq(l[i], l[j])) return std::make_pair(i, j);
  return std::nullopt;
}

/// Quotient of a finite list by a decidable equivalence onto {0..n-1}.
template <class T>
class Quotient {
 public:
  template <class Equiv>
  Quotient(std::vector<T> items, Equiv equiv) : items_(std::move(items)), equiv_(equiv) {
    class_of_item_.reserve(items_.size());
    for (std::size_t i = 0; i < items_.size(); ++i) {
      std::optional<std::size_t> found;
      for (std::size_t c = 0; c < repr_.size(); ++c)
        if (equiv_(items_[repr_[c]], items_[i])) {
          found = c;
          break;
        }
      if (!found) {
        found = repr_.size();
        repr_.push_back(i);
      }
      class_of_item_.push_back(*found);
    }
  }

  std::size_t size() const { return repr_.size(); }
  const T& repr(std::size_t c) const { return items_.at(repr_.at(c)); }
  std::size_t class_of_item(std::size_t i) const { return class_of_item_.at(i); }

  std::size_t class_of(const T& x) const {
    for (std::size_t c = 0; c < repr_.size(); ++c)
      if (equiv_(items_[repr_[c]], x)) return c;
    throw PreconditionError("element is not equivalent to any quotient item");
  }

 private:
  std::vector<T> items_;
  std::function<bool(const T&, const T&)> equiv_;
  std::vector<std::size_t> repr_;
  std::vector<std::size_t> class_of_item_;
};

template <class T, class Equiv>
Quotient<T> finite_quotient(std::vector<T> items, Equiv equiv) {
  return Quotient<T>(std::move(items), equiv);
}

/// Enumerates all 2^n bit vectors of length n, counting upward with bit 0 least significant.
class WeakPowerset {
 public:
  static constexpr std::size_t kMaxSize = 24;

  explicit WeakPowerset(std::size_t n);

  /// Advances to the next vector; false once all have been produced.
  bool next();
  const std::vector<std::uint8_t>& current() const { return bits_; }
  std::uint64_t count() const { return std::uint64_t{1} << bits_.size(); }

 private:
  std::vector<std::uint8_t> bits_;
  bool started_ = false;
};

std::uint64_t cantor_pair(std::uint64_t x, std::uint64_t y);
std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t z);

}  // namespace fsat
