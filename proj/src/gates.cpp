#include "polysim/gates.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "polysim/sng.hpp"

namespace polysim {

Waveform stochastic_multiply(const Waveform& a, const Waveform& b) { return combine2(a, b, kAnd); }

Waveform scaled_add(const Waveform& a, const Waveform& b, const Waveform& sel) {
  return mux(sel, a, b);
}

Waveform abs_diff(const Waveform& a, const Waveform& b, DiffMode) { return combine2(a, b, kXor); }

Waveform comparator_fsm(const Waveform& x, const Waveform& t, const ClockDomain& clock,
                        int states) {
  if (states < 2 || states % 2 != 0) throw std::invalid_argument("comparator: states must be even and >= 2");
  clock.validate();
  Tick horizon = std::min(std::min(x.horizon, t.horizon), clock.horizon);
  ComparatorState fsm(states);
  WaveCursor cx(x), ct(t);
  WaveformBuilder out(fsm.output());
  for (Tick e = clock.phase; e < horizon; e += clock.period) {
    out.set_level(e, fsm.step(cx.at(e), ct.at(e)));
  }
  return std::move(out).finish(horizon);
}

Waveform exp_fsm(const Waveform& d, const ClockDomain& clock, int states, int gain,
                 std::uint64_t aux_seed, int lfsr_width) {
  if (states < 2) throw std::invalid_argument("exp_fsm: states must be >= 2");
  if (gain < 1 || gain >= states) throw std::invalid_argument("exp_fsm: gain must be in [1, states)");
  clock.validate();
  Tick horizon = std::min(d.horizon, clock.horizon);
  const double aux_p = static_cast<double>(gain) / static_cast<double>(states);
  const std::uint32_t aux_thr = quantize_target(aux_p, lfsr_width);
  Lfsr aux(Lfsr::maximal(lfsr_width, static_cast<std::uint32_t>(aux_seed % ((1u << lfsr_width) - 1)) + 1));
  ExpState fsm(states);
  WaveCursor cd(d);
  WaveformBuilder out(fsm.output());
  for (Tick e = clock.phase; e < horizon; e += clock.period) {
    const bool aux_bit = aux.step() < aux_thr;
    out.set_level(e, fsm.step(cd.at(e), aux_bit));
  }
  return std::move(out).finish(horizon);
}

Waveform mux_tree(std::span<const Waveform> leaves, std::span<const Waveform> sels) {
  if (leaves.empty() || (leaves.size() & (leaves.size() - 1)) != 0)
    throw std::invalid_argument("mux_tree: leaf count must be a power of two");
  if (sels.size() + 1 != leaves.size()) throw std::invalid_argument("mux_tree: need leaves-1 selects");
  std::vector<Waveform> level(leaves.begin(), leaves.end());
  std::size_t next_sel = 0;
  while (level.size() > 1) {
    std::vector<Waveform> up;
    up.reserve(level.size() / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
      up.push_back(mux(sels[next_sel++], level[i], level[i + 1]));
    }
    level = std::move(up);
  }
  return std::move(level.front());
}

}  // namespace polysim
