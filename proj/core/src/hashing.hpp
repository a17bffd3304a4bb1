#pragma once

#include <cstddef>
#include <cstdint>

namespace amb::detail {

inline std::size_t mix(std::size_t x) {
  std::uint64_t z = static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return static_cast<std::size_t>(z ^ (z >> 31));
}

inline std::size_t combine(std::size_t seed, std::size_t v) { return mix(seed * 31 + v); }

}  // namespace amb::detail
