// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace rissrf {

/// All randomness in the library flows through explicitly passed streams of this type.
using RandomStream = std::mt19937_64;

/// SplitMix64 finalizer; a bijection on 64-bit integers with good avalanche.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Derives a child seed from a parent seed and an ordered list of indices.
///
/// The derivation is a pure function of its arguments, so streams built from
/// (master seed, point, trial) tuples are independent of scheduling order.
std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> indices) noexcept;

inline RandomStream make_stream(std::uint64_t seed) { return RandomStream(seed); }

}  // namespace rissrf
