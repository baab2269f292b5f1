#include "inferbench/random.hpp"

#include <limits>

namespace inferbench {

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view stage,
                          std::string_view item) {
  // Length prefixes keep ("ab","c") and ("a","bc") apart.
  std::uint64_t h = splitmix64(master);
  h = fnv1a(std::to_string(stage.size()), h);
  h = fnv1a(stage, h);
  h = fnv1a(std::to_string(item.size()), h);
  h = fnv1a(item, h);
  return splitmix64(h);
}

std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  // Reject the top partial bucket so every residue is equally likely.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    const std::uint64_t x = rng();
    if (x < limit) return x % bound;
  }
}

double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace inferbench
