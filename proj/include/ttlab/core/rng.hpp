#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ttlab {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; bijective mixing of a 64-bit word.
std::uint64_t mix64(std::uint64_t x);

/// Counter-based seed derivation. The result depends only on the inputs, so a
/// seed for (run, iteration, direction, repeat, sign) can be produced on any
/// worker in any order.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> counters);

double uniform(Rng& rng, double lo, double hi);
double standard_normal(Rng& rng);

}  // namespace ttlab
