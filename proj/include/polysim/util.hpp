#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace polysim {

// Thrown for malformed configuration (bad keys, out-of-range values).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown for filesystem / file-format failures.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// SplitMix64 finalizer. Used as the counter-based seed splitter: feeding a
// counter or a previous derivation through it yields an independent stream.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Uniform double in [0, 1) from 64 random bits.
inline double unit_real(std::uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

// Runs body(0..n-1) on up to `threads` workers (0 = hardware concurrency).
// Each index is executed exactly once; callers must write only to
// index-owned slots so results are identical for any thread count.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

}  // namespace polysim
