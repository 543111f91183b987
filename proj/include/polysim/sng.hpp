#pragma once

#include <cstdint>

#include "polysim/clock.hpp"
#include "polysim/lfsr.hpp"
#include "polysim/waveform.hpp"

namespace polysim {

// Stochastic number generator: an LFSR compared against a quantized target.
// Each rising clock edge emits one bit, held for the full period. The bit is
// 1 iff the LFSR value is strictly below the threshold, so a full LFSR period
// carries exactly `quantized` ones minus the one lost to the excluded
// all-zero state (when 0 < quantized). `invert_compare` flips the comparison
// (bit = value >= threshold), encoding 1 - target instead.
struct SngConfig {
  double target = 0.0;       // intended probability, in [0, 1]
  std::uint32_t quantized = 0;  // round(target * 2^width)
  Lfsr lfsr;
  ClockDomain clock;
  bool invert_compare = false;

  static SngConfig make(double target, Lfsr lfsr, ClockDomain clock, bool invert_compare = false);
};

// |target - quantized / 2^width| <= 2^-(width+1) by construction.
std::uint32_t quantize_target(double target, int width);

// Emits `length` bits; the waveform spans [0, phase + length*period) and is
// low before the first edge. Throws if the clock horizon cannot hold it.
Waveform generate(const SngConfig& cfg, std::size_t length);

// Emits bits at every clock edge below `horizon`; the waveform spans
// [0, horizon) with the last bit held up to the horizon.
Waveform generate_until(const SngConfig& cfg, Tick horizon);

}  // namespace polysim
