#include "polysim/faults.hpp"

#include <algorithm>

#include "polysim/seeds.hpp"
#include "polysim/sng.hpp"
#include "polysim/util.hpp"

namespace polysim {

Waveform inject(const Waveform& w, ErrorSource src,
                const std::function<bool(std::size_t)>& enable) {
  WaveformBuilder b(false);
  const Tick stop = std::min(w.horizon, src.clock.horizon);
  std::size_t c = 0;
  for (Tick e = src.clock.phase; e < stop; e += src.clock.period, ++c) {
    const std::uint32_t v = src.lfsr.step();  // steps every cycle, armed or not
    b.set_level(e, enable(c) && v < src.threshold);
  }
  const Waveform pulses = std::move(b).finish(w.horizon);
  return combine2(w, pulses, kXor);
}

FaultPlan plan_for_circuit(const Netlist& nl, double rate, std::uint64_t source_seed) {
  if (rate < 0.0 || rate > 1.0) throw ConfigError("fault rate must be in [0, 1]");
  FaultPlan plan;
  plan.rate = rate;
  plan.wire_count = nl.wire_count;
  plan.element_tap_count.assign(nl.elements.size(), 0);

  std::vector<int> owner(static_cast<std::size_t>(nl.wire_count), -1);
  std::vector<std::vector<int>> claimed(nl.elements.size());
  for (std::size_t e = 0; e < nl.elements.size(); ++e) {
    for (int w : nl.elements[e].inputs) {
      if (owner[static_cast<std::size_t>(w)] < 0) {
        owner[static_cast<std::size_t>(w)] = static_cast<int>(e);
        claimed[e].push_back(w);
      }
    }
  }
  for (std::size_t e = 0; e < nl.elements.size(); ++e) {
    for (int w : nl.elements[e].outputs) {
      if (owner[static_cast<std::size_t>(w)] < 0) {
        owner[static_cast<std::size_t>(w)] = static_cast<int>(e);
        claimed[e].push_back(w);
      }
    }
  }

  std::uint64_t ordinal = 0;
  for (std::size_t e = 0; e < nl.elements.size(); ++e) {
    plan.element_tap_count[e] = static_cast<int>(claimed[e].size());
    int slot = 0;
    for (int w : claimed[e]) {
      plan.taps.push_back({w, static_cast<int>(e), slot, mix64(source_seed ^ (ordinal + 1))});
      ++slot;
      ++ordinal;
    }
  }
  return plan;
}

FlipSet build_flips(const FaultPlan& plan, const ClockDomain& clock, Tick horizon,
                    int lfsr_width) {
  FlipSet fs;
  if (plan.rate <= 0.0 || plan.taps.empty()) return fs;
  fs.flips.assign(static_cast<std::size_t>(plan.wire_count), Waveform{});
  const Tick stop = std::min(horizon, clock.horizon);
  for (const FaultTap& tap : plan.taps) {
    const auto n = static_cast<std::size_t>(plan.element_tap_count[static_cast<std::size_t>(tap.element)]);
    const std::uint32_t thr = quantize_target(std::min(1.0, plan.rate * static_cast<double>(n)),
                                              lfsr_width);
    Lfsr src = Lfsr::maximal(lfsr_width, lfsr_seed_from(tap.seed, lfsr_width));
    WaveformBuilder b(false);
    std::size_t c = 0;
    for (Tick e = clock.phase; e < stop; e += clock.period, ++c) {
      const std::uint32_t v = src.step();
      b.set_level(e, c % n == static_cast<std::size_t>(tap.slot) && v < thr);
    }
    fs.flips[static_cast<std::size_t>(tap.wire)] = std::move(b).finish(horizon);
  }
  return fs;
}

}  // namespace polysim
