#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cstdint>

namespace wwnf {

// Exact integer / rational arithmetic for resonance tests and determinant
// certificates. Header-only backends, no GMP link needed at this scale.
using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// 256-bit binary float used by the high-precision shadow evaluations.
using HighFloat = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<256, boost::multiprecision::digit_base_2>>;

// Counter-based generator: every random draw is a pure function of
// (seed, stream, counter), so sharded runs are reproducible bit for bit.
inline std::uint64_t counter_rng_u64(std::uint64_t seed, std::uint64_t stream,
                                     std::uint64_t counter) {
    // SplitMix64 finalizer applied to the combined key
    std::uint64_t z = seed;
    z ^= 0x9e3779b97f4a7c15ull + stream * 0xbf58476d1ce4e5b9ull;
    z += 0x9e3779b97f4a7c15ull * (counter + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// uniform in [0,1)
inline double counter_rng_uniform(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t counter) {
    return static_cast<double>(counter_rng_u64(seed, stream, counter) >> 11) *
           0x1.0p-53;
}

} // namespace wwnf
