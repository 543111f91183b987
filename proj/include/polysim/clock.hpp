#pragma once

#include <cstdint>
#include <vector>

#include "polysim/time.hpp"

namespace polysim {

// A free-running local clock: rising edges at phase + k*period for k = 0,1,...
// while the edge lies inside [0, horizon).
struct ClockDomain {
  Tick period = 0;
  Tick phase = 0;
  Tick horizon = 0;

  void validate() const;

  std::size_t edge_count() const;
  Tick edge(std::size_t k) const { return phase + static_cast<Tick>(k) * period; }
  std::vector<Tick> edges() const;
};

// Draws period uniformly from [min_ns, max_ns] and phase uniformly from
// [0, period), both quantized to the grid. Deterministic in the seed.
ClockDomain random_clock(std::uint64_t seed, double min_ns, double max_ns, Tick horizon,
                         TimeGrid grid = {});

}  // namespace polysim
