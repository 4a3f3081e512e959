// SPDX-License-Identifier: Apache-2.0

#include "rissrf/random.hpp"

namespace rissrf {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> indices) noexcept {
  std::uint64_t h = splitmix64(parent);
  for (const auto index : indices) {
    h = splitmix64(h ^ splitmix64(index + 0x632be59bd9b4e019ULL));
  }
  return h;
}

}  // namespace rissrf
