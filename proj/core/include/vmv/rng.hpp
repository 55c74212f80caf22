#pragma once

#include <cstdint>

namespace vmv {

/// Counter-based random numbers. Every draw is a pure function of
/// (seed, a, b, c), so results never depend on generation order or threads.
///
/// Construction: splitmix64(x) = mix(x + 0x9e3779b97f4a7c15) with the
/// standard splitmix64 finaliser; counter(seed, a, b, c) chains
/// h = splitmix64(seed), h = splitmix64(h ^ a), h = splitmix64(h ^ b),
/// h = splitmix64(h ^ c). A uniform on (0, 1] takes the top 53 bits,
/// u = ((h >> 11) + 1) * 2^-53. standard_normal(seed, a, b, c) applies
/// Box-Muller, sqrt(-2 ln u1) cos(2 pi u2), to u1 from counter c' = 2c and
/// u2 from c' = 2c + 1.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t counter(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c);
double uniform01(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c);
double standard_normal(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c);

/// Independent child seed for a named purpose (Brownian paths, initial
/// values, replication r, ...).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag);

namespace stream {
inline constexpr std::uint64_t brownian = 0x42524f574eULL;
inline constexpr std::uint64_t initial = 0x494e4954ULL;
inline constexpr std::uint64_t replication = 0x5245504cULL;
}  // namespace stream

}  // namespace vmv
