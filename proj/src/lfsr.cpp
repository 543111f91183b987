#include "polysim/lfsr.hpp"

#include <bit>
#include <stdexcept>

namespace polysim {

namespace {

// Maximal-length tap sets for the supported widths (one per width, smallest
// common choice). Verified by the exhaustive cycle-walk test.
const std::vector<int>* tap_table(int width) {
  static const std::vector<int> taps[] = {
      /* 3*/ {3, 2},
      /* 4*/ {4, 3},
      /* 5*/ {5, 3},
      /* 6*/ {6, 5},
      /* 7*/ {7, 6},
      /* 8*/ {8, 6, 5, 4},
      /* 9*/ {9, 5},
      /*10*/ {10, 7},
      /*11*/ {11, 9},
      /*12*/ {12, 6, 4, 1},
      /*13*/ {13, 4, 3, 1},
      /*14*/ {14, 5, 3, 1},
      /*15*/ {15, 14},
      /*16*/ {16, 15, 13, 4},
  };
  if (width < 3 || width > 16) return nullptr;
  return &taps[width - 3];
}

}  // namespace

Lfsr::Lfsr(int width, const std::vector<int>& taps, std::uint32_t seed) : width_(width) {
  if (width < 3 || width > 16) throw std::invalid_argument("lfsr width must be in [3, 16]");
  state_mask_ = (1u << width) - 1u;
  tap_mask_ = 0;
  for (int p : taps) {
    if (p < 1 || p > width) throw std::invalid_argument("lfsr tap position out of range");
    tap_mask_ |= 1u << (p - 1);
  }
  if (tap_mask_ == 0) throw std::invalid_argument("lfsr needs at least one tap");
  state_ = seed & state_mask_;
  if (state_ == 0) throw std::invalid_argument("lfsr seed must be nonzero");
}

const std::vector<int>& Lfsr::default_taps(int width) {
  const auto* t = tap_table(width);
  if (!t) throw std::invalid_argument("no default taps for this lfsr width");
  return *t;
}

Lfsr Lfsr::maximal(int width, std::uint32_t seed) { return Lfsr(width, default_taps(width), seed); }

std::uint32_t Lfsr::step() {
  std::uint32_t fb = static_cast<std::uint32_t>(std::popcount(state_ & tap_mask_) & 1);
  state_ = ((state_ << 1) | fb) & state_mask_;
  return state_;
}

}  // namespace polysim
