#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "polysim/time.hpp"

namespace polysim {

// Piecewise-constant binary signal over [0, horizon). The level at time t is
// initial_level XOR (number of transitions <= t, mod 2): a transition at
// exactly t has already taken effect at t.
struct Waveform {
  bool initial_level = false;
  std::vector<Tick> transitions;  // strictly increasing, all inside (0, horizon)
  Tick horizon = 0;

  static Waveform constant(bool level, Tick horizon);

  // Throws std::invalid_argument if the invariants above do not hold.
  void validate() const;
};

bool value_at(const Waveform& w, Tick t);

// Total time the signal is high over [0, until). Exact integer arithmetic.
Tick high_time(const Waveform& w, Tick until);

// Fraction of time high over the full horizon / over [0, until).
double measure(const Waveform& w);
double measure_until(const Waveform& w, Tick until);

// Two-input boolean function as a truth table; entry index is (a<<1 | b).
struct TruthTable2 {
  std::uint8_t bits = 0;
  constexpr bool operator()(bool a, bool b) const {
    return (bits >> ((static_cast<int>(a) << 1) | static_cast<int>(b))) & 1;
  }
};

inline constexpr TruthTable2 kAnd{0b1000};
inline constexpr TruthTable2 kOr{0b1110};
inline constexpr TruthTable2 kXor{0b0110};

// Pointwise combination. Both inputs must share the same horizon; coincident
// transitions are resolved together and redundant output transitions are
// coalesced. Throws std::invalid_argument on horizon mismatch.
Waveform combine2(const Waveform& a, const Waveform& b, TruthTable2 f);

// Pointwise 2:1 multiplexer: output follows a where sel is 0, b where sel is 1.
Waveform mux(const Waveform& sel, const Waveform& a, const Waveform& b);

// Exact logical negation (no sampling involved).
Waveform invert(const Waveform& w);

// Removes every maximal high interval strictly shorter than min_width.
// Intervals of exactly min_width survive. Idempotent.
Waveform filter_spikes(const Waveform& w, Tick min_width);

// Levels at the given sampling instants. Edges must be ascending and inside
// [0, horizon); throws std::out_of_range otherwise.
std::vector<std::uint8_t> sample(const Waveform& w, std::span<const Tick> edges);

// Builds a held-bit waveform: bits[k] covers [edges[k], edges[k+1]) and the
// last bit runs to the horizon; pre_level covers [0, edges[0]).
Waveform hold_bits(std::span<const Tick> edges, std::span<const std::uint8_t> bits, Tick horizon,
                   bool pre_level);

// Binary layout: u64 transition count, count x u64 instants (femtoseconds),
// u8 initial level, u64 horizon. All little-endian.
std::vector<std::uint8_t> serialize(const Waveform& w);
Waveform deserialize(std::span<const std::uint8_t> bytes);

// Text dump, one line per level segment start: "t=<ns> level=<0|1>".
void dump_text(const Waveform& w, std::ostream& os);

// Forward-only level reader; query times must be non-decreasing.
class WaveCursor {
 public:
  WaveCursor() = default;
  explicit WaveCursor(const Waveform& w) : w_(&w), level_(w.initial_level) {}

  bool at(Tick t) {
    const auto& tr = w_->transitions;
    while (idx_ < tr.size() && tr[idx_] <= t) {
      level_ = !level_;
      ++idx_;
    }
    return level_;
  }

 private:
  const Waveform* w_ = nullptr;
  std::size_t idx_ = 0;
  bool level_ = false;
};

// Incremental construction helper; callers feed non-decreasing instants.
class WaveformBuilder {
 public:
  explicit WaveformBuilder(bool initial) : initial_(initial), level_(initial) {}

  void set_level(Tick t, bool level) {
    if (level == level_) return;
    if (t == 0) {
      // The domain starts at 0, so a change there is just the initial level.
      initial_ = level;
    } else if (!transitions_.empty() && transitions_.back() == t) {
      // A second flip at the same instant cancels the first.
      transitions_.pop_back();
    } else {
      transitions_.push_back(t);
    }
    level_ = level;
  }

  bool level() const { return level_; }

  Waveform finish(Tick horizon) && {
    // Drop any transition landing exactly on the horizon: the half-open
    // domain [0, horizon) never observes it.
    while (!transitions_.empty() && transitions_.back() >= horizon) transitions_.pop_back();
    return Waveform{initial_, std::move(transitions_), horizon};
  }

 private:
  bool initial_;
  bool level_;
  std::vector<Tick> transitions_;
};

}  // namespace polysim
