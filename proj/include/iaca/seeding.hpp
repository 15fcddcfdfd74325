#pragma once

#include <cstdint>
#include <initializer_list>

namespace iaca {

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Sub-seed for a path of counters below a master seed.
///
/// Each path component is folded in with its own SplitMix64 round, so
/// seed(master, {rep, node, stream}) is independent of every other path and
/// of how many siblings exist. Experiments key data on (rep, node, stream)
/// only, never on sweep position.
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t state = splitmix64(master);
  for (const auto component : path) {
    state = splitmix64(state ^ splitmix64(component + 0x632BE59BD9B4E019ULL));
  }
  return state;
}

/// Stream tags used as the last path component of derive_seed.
enum class StreamTag : std::uint64_t {
  Signal = 1,
  MeasurementNoise = 2,
  Input = 3,
};

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t rep, std::uint64_t node,
                                    StreamTag tag) noexcept {
  return derive_seed(master, {rep, node, static_cast<std::uint64_t>(tag)});
}

}  // namespace iaca
