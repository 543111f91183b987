#pragma once

#include <cstdint>

#include "polysim/util.hpp"

namespace polysim {

// Every random draw in a run is keyed by (master, trial, cell, role, index)
// through a splittable counter-based derivation, so any single stream can be
// re-derived in isolation and runs are reproducible for any thread count.
enum class SeedRole : std::uint64_t {
  ValueSng = 1,    // pixel value streams (one shared source per cell for the
                   // density circuit, per-stream sources elsewhere)
  SelectSng = 2,   // mux select streams
  CoeffSng = 3,    // constant-coefficient streams
  ExpAux = 4,      // auxiliary streams inside exponential elements
  CellClock = 5,   // local clock period/phase draw
  FaultSource = 6  // per-cell fault source root
};

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial, std::uint64_t cell,
                                 SeedRole role, std::uint64_t index) {
  std::uint64_t h = mix64(master);
  h = mix64(h ^ trial);
  h = mix64(h ^ cell);
  h = mix64(h ^ static_cast<std::uint64_t>(role));
  h = mix64(h ^ index);
  return h;
}

// Maps a derived value onto a nonzero LFSR state of the given width.
inline std::uint32_t lfsr_seed_from(std::uint64_t derived, int width) {
  const std::uint64_t period = (1ull << width) - 1ull;
  return static_cast<std::uint32_t>(derived % period) + 1u;
}

}  // namespace polysim
