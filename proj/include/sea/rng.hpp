#pragma once

#include <cstdint>
#include <random>

namespace sea {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Stream tags for deriving independent sub-seeds. Adding a tag never
// perturbs the streams of existing ones.
enum class SeedTag : std::uint64_t {
  matrix = 1,
  signal = 2,
  noise = 3,
  solver = 4,
  init = 5,
  probe = 6,
};

inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a,
                              std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = splitmix64(base);
  s = splitmix64(s ^ (a * 0xFF51AFD7ED558CCDULL));
  s = splitmix64(s ^ (b * 0xC4CEB9FE1A85EC53ULL));
  s = splitmix64(s ^ (c * 0x2545F4914F6CDD1DULL));
  return s;
}

inline std::uint64_t sub_seed(std::uint64_t base, std::uint64_t run_index,
                              SeedTag tag) {
  return mix_seed(base, run_index, static_cast<std::uint64_t>(tag));
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
  return std::mt19937_64(seed);
}

}  // namespace sea
