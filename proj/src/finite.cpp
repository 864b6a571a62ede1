#include "fsat/finite.hpp"

#include <cmath>
#include <string>

namespace fsat {

WeakPowerset::WeakPowerset(std::size_t n) {
  if (n > kMaxSize)
    throw ResourceError("weak powerset of " + std::to_string(n) + " points exceeds the guard of " +
                        std::to_string(kMaxSize));
  bits_.assign(n, 0);
}

bool WeakPowerset::next() {
  if (!started_) {
    started_ = true;
    return true;
  }
  for (auto& b : bits_) {
    if (!b) {
      b = 1;
      return true;
    }
    b = 0;
  }
  return false;
}

std::uint64_t cantor_pair(std::uint64_t x, std::uint64_t y) { return (x + y) * (x + y + 1) / 2 + y; }

std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t z) {
  auto w = static_cast<std::uint64_t>((std::sqrt(8.0 * static_cast<double>(z) + 1.0) - 1.0) / 2.0);
  // Correct floating point drift.
  while (w * (w + 1) / 2 > z) --w;
  while ((w + 1) * (w + 2) / 2 <= z) ++w;
  std::uint64_t y = z - w * (w + 1) / 2;
  return {w - y, y};
}

}  // namespace fsat
