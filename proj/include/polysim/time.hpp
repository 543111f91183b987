#pragma once

#include <cmath>
#include <cstdint>

namespace polysim {

// Simulation time is kept as integer femtoseconds. 1 ns = 10^6 ticks, so the
// quantities the simulator deals in (2-4 ns clock periods, 0.2 ns spike
// threshold) are exact and transition instants compare deterministically.
using Tick = std::int64_t;

inline constexpr Tick kTicksPerNs = 1'000'000;

constexpr double ticks_to_ns(Tick t) { return static_cast<double>(t) / kTicksPerNs; }

// Quantization grid for mapping real-valued durations onto ticks. All stored
// instants are integer multiples of `resolution`.
struct TimeGrid {
  Tick resolution = 1;

  Tick quantize_ns(double ns) const {
    const double steps = ns * static_cast<double>(kTicksPerNs) / static_cast<double>(resolution);
    return static_cast<Tick>(std::llround(steps)) * resolution;
  }

  Tick quantize_ticks(double ticks) const {
    return static_cast<Tick>(std::llround(ticks / static_cast<double>(resolution))) * resolution;
  }
};

inline Tick ns_to_ticks(double ns) { return TimeGrid{}.quantize_ns(ns); }

}  // namespace polysim
