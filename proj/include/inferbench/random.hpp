#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace inferbench {

/// Every stochastic step draws from its own Rng seeded by derive_seed, so the
/// output of one step never depends on how many numbers another step consumed.
using Rng = std::mt19937_64;

/// Stable 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes,
                    std::uint64_t basis = 0xcbf29ce484222325ULL);

std::uint64_t splitmix64(std::uint64_t x);

/// Seed for (master seed, stage name, item id). Independent of platform,
/// thread count and iteration order.
std::uint64_t derive_seed(std::uint64_t master, std::string_view stage,
                          std::string_view item = {});

inline Rng make_rng(std::uint64_t master, std::string_view stage,
                    std::string_view item = {}) {
  return Rng(derive_seed(master, stage, item));
}

/// Uniform integer in [0, bound). bound must be positive. Implemented by
/// rejection so the result sequence is identical across standard libraries
/// (std::uniform_int_distribution is implementation-defined).
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

/// Uniform double in [0, 1) from the top 53 bits of one draw.
double uniform_unit(Rng& rng);

template <class T>
void shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

/// k distinct elements drawn uniformly without replacement (partial
/// Fisher-Yates over a copy). Returns all items, shuffled, when k >= size.
template <class T>
std::vector<T> sample_without_replacement(std::span<const T> items,
                                          std::size_t k, Rng& rng) {
  std::vector<T> pool(items.begin(), items.end());
  if (k > pool.size()) k = pool.size();
  for (std::size_t i = 0; i < k; ++i) {
    const auto j =
        i + static_cast<std::size_t>(uniform_below(rng, pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace inferbench
