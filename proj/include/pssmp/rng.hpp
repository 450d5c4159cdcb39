#pragma once

#include <cstdint>
#include <random>

namespace pssmp {

using Rng = std::mt19937_64;

// Independent stream for path `index` under `seed`, so results do not depend
// on how paths are scheduled across threads.
inline Rng make_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x9e3779b9u};
  return Rng(seq);
}

// Uniform on the open interval (0, 1), 53 random bits.
inline double uniform_open(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace pssmp
