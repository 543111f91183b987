#include "polysim/sng.hpp"

#include <cmath>
#include <stdexcept>

namespace polysim {

std::uint32_t quantize_target(double target, int width) {
  if (!(target >= 0.0 && target <= 1.0)) throw std::invalid_argument("sng target must be in [0, 1]");
  const double scale = static_cast<double>(1u << width);
  return static_cast<std::uint32_t>(std::llround(target * scale));
}

SngConfig SngConfig::make(double target, Lfsr lfsr, ClockDomain clock, bool invert_compare) {
  clock.validate();
  SngConfig cfg{target, quantize_target(target, lfsr.width()), std::move(lfsr), clock,
                invert_compare};
  return cfg;
}

namespace {

Waveform run_sng(const SngConfig& cfg, Tick horizon) {
  Lfsr lfsr = cfg.lfsr;
  WaveformBuilder out(false);
  for (Tick t = cfg.clock.phase; t < horizon; t += cfg.clock.period) {
    const bool below = lfsr.step() < cfg.quantized;
    out.set_level(t, below != cfg.invert_compare);
  }
  return std::move(out).finish(horizon);
}

}  // namespace

Waveform generate(const SngConfig& cfg, std::size_t length) {
  if (length == 0) throw std::invalid_argument("sng: zero-length stream");
  const Tick horizon = cfg.clock.phase + static_cast<Tick>(length) * cfg.clock.period;
  if (horizon > cfg.clock.horizon) throw std::invalid_argument("sng: stream exceeds clock horizon");
  return run_sng(cfg, horizon);
}

Waveform generate_until(const SngConfig& cfg, Tick horizon) {
  if (horizon <= 0 || horizon > cfg.clock.horizon)
    throw std::invalid_argument("sng: bad generation horizon");
  return run_sng(cfg, horizon);
}

}  // namespace polysim
