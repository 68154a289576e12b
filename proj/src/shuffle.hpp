#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace hypercomp::detail {

// Unbiased draw from [0, bound) using only the engine's raw output, so the
// sequence is identical across standard library implementations.
inline std::uint64_t draw_below(std::mt19937_64& engine, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x = engine();
  while (x >= limit) x = engine();
  return x % bound;
}

template <typename T>
void fisher_yates(std::vector<T>& items, std::mt19937_64& engine) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(draw_below(engine, i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace hypercomp::detail
