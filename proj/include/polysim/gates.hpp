#pragma once

#include <cstdint>
#include <span>

#include "polysim/clock.hpp"
#include "polysim/waveform.hpp"

namespace polysim {

// Unipolar stochastic product: plain AND. Exact for independent inputs.
Waveform stochastic_multiply(const Waveform& a, const Waveform& b);

// Scaled addition (a + b) / 2 when sel carries probability 0.5.
Waveform scaled_add(const Waveform& a, const Waveform& b, const Waveform& sel);

// XOR-based absolute difference. The mode records what the caller provides:
// streams from a shared random source and clock measure |pa - pb| exactly,
// independent streams measure pa + pb - 2*pa*pb instead.
enum class DiffMode { correlated, independent };
Waveform abs_diff(const Waveform& a, const Waveform& b, DiffMode mode = DiffMode::independent);

// Saturating up/down counter comparing two streams. Samples (x, t) on each
// rising clock edge: (1,0) counts up, (0,1) counts down, clamped to
// [0, states-1]. Output is 1 iff counter >= states/2, held one period.
// Starts at the midpoint, so equal inputs keep the initial decision.
struct ComparatorState {
  int states;
  int counter;

  explicit ComparatorState(int states_) : states(states_), counter(states_ / 2) {}

  bool step(bool x, bool t) {
    if (x && !t && counter < states - 1) ++counter;
    if (!x && t && counter > 0) --counter;
    return counter >= states / 2;
  }

  bool output() const { return counter >= states / 2; }
};

Waveform comparator_fsm(const Waveform& x, const Waveform& t, const ClockDomain& clock,
                        int states = 32);

// Exponential decay element approximating e^(-gain * p) for an input stream
// of probability p. A saturating counter tracks clock cycles since the last
// coincidence of the input bit with an internal gain/states auxiliary stream;
// output is 1 iff the counter is saturated (no coincidence in the last
// `states` cycles), which settles to (1 - (gain/states) * p)^states.
struct ExpState {
  int states;
  int since;

  explicit ExpState(int states_) : states(states_), since(states_) {}

  bool step(bool d, bool aux) {
    if (d && aux) {
      since = 0;
    } else if (since < states) {
      ++since;
    }
    return since >= states;
  }

  bool output() const { return since >= states; }
};

Waveform exp_fsm(const Waveform& d, const ClockDomain& clock, int states = 8, int gain = 4,
                 std::uint64_t aux_seed = 1, int lfsr_width = 10);

// Balanced tree of 2:1 muxes over leaves (power-of-two count). Selects are
// consumed level by level, bottom first, left to right: sels[i] drives the
// i-th mux in creation order. Requires sels.size() == leaves.size() - 1.
Waveform mux_tree(std::span<const Waveform> leaves, std::span<const Waveform> sels);

}  // namespace polysim
