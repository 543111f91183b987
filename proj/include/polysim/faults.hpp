#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "polysim/circuits.hpp"
#include "polysim/clock.hpp"
#include "polysim/lfsr.hpp"
#include "polysim/waveform.hpp"

namespace polysim {

// A transient-fault source: a free-running LFSR sampled once per clock cycle.
// On cycles where the source is armed and the sampled value lies below
// `threshold`, the tapped wire is inverted for that whole cycle.
struct ErrorSource {
  Lfsr lfsr;
  std::uint32_t threshold = 0;
  ClockDomain clock;
};

// XORs the source's flip pulses into `w`. Cycle c is armed iff enable(c); the
// LFSR steps every cycle regardless, so arming patterns select from one fixed
// pulse sequence. The result keeps w's horizon.
Waveform inject(const Waveform& w, ErrorSource src, const std::function<bool(std::size_t)>& enable);

struct FaultTap {
  int wire;
  int element;
  int slot;  // position in the owning element's tap list
  std::uint64_t seed;
};

// Where fault pulses may land in one cell. Every wire is tapped exactly once:
// elements claim their input wires in element-id order (a wire with fanout
// goes to its lowest-id consumer), then each element claims its still
// unclaimed output wires (the cell outputs). Tap seeds derive from
// `source_seed` by tap ordinal only, so changing the rate never reshuffles
// the pulse sequences: the fired set at a lower rate is a subset of the
// fired set at a higher one.
struct FaultPlan {
  double rate = 0.0;
  int wire_count = 0;
  std::vector<FaultTap> taps;            // ordered by (element, slot)
  std::vector<int> element_tap_count;    // indexed by element id
};

FaultPlan plan_for_circuit(const Netlist& nl, double rate, std::uint64_t source_seed);

// Builds one flip waveform per tapped wire on the cell's clock. An element's
// taps share its fault source round-robin: tap k of n is armed on cycles
// c % n == k, with per-tap firing probability min(1, rate * n) so each wire
// sees an expected flipped-cycle fraction of `rate` (saturating when
// rate * n exceeds 1). Rate 0 yields an inactive set.
FlipSet build_flips(const FaultPlan& plan, const ClockDomain& clock, Tick horizon,
                    int lfsr_width);

}  // namespace polysim
