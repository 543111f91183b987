#pragma once

#include <cstdint>
#include <vector>

namespace polysim {

// Fibonacci LFSR. State is a `width`-bit value, shifted left one bit per step
// with the XOR of the tapped bits fed into bit 0. With a maximal-length tap
// set the state walks every nonzero value once per period (2^width - 1).
class Lfsr {
 public:
  // taps are 1-based bit positions (position `width` is the MSB).
  Lfsr(int width, const std::vector<int>& taps, std::uint32_t seed);

  // Default maximal-length tap set for widths 3..16.
  static Lfsr maximal(int width, std::uint32_t seed);
  static const std::vector<int>& default_taps(int width);

  // Advances one step and returns the new state value.
  std::uint32_t step();

  std::uint32_t state() const { return state_; }
  int width() const { return width_; }

 private:
  int width_;
  std::uint32_t tap_mask_;
  std::uint32_t state_mask_;
  std::uint32_t state_;
};

}  // namespace polysim
