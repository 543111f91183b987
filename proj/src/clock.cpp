#include "polysim/clock.hpp"

#include <stdexcept>

#include "polysim/util.hpp"

namespace polysim {

void ClockDomain::validate() const {
  if (period <= 0) throw std::invalid_argument("clock period must be positive");
  if (phase < 0 || phase >= period) throw std::invalid_argument("clock phase must be in [0, period)");
  if (horizon <= 0) throw std::invalid_argument("clock horizon must be positive");
}

std::size_t ClockDomain::edge_count() const {
  if (phase >= horizon) return 0;
  return static_cast<std::size_t>((horizon - phase - 1) / period) + 1;
}

std::vector<Tick> ClockDomain::edges() const {
  std::vector<Tick> out;
  out.reserve(edge_count());
  for (Tick t = phase; t < horizon; t += period) out.push_back(t);
  return out;
}

ClockDomain random_clock(std::uint64_t seed, double min_ns, double max_ns, Tick horizon,
                         TimeGrid grid) {
  if (min_ns <= 0 || max_ns < min_ns) throw std::invalid_argument("random_clock: bad period range");
  const double u_period = unit_real(mix64(seed ^ 0x70657269u));
  const double u_phase = unit_real(mix64(seed ^ 0x70686173u));
  Tick period = grid.quantize_ns(min_ns + u_period * (max_ns - min_ns));
  if (period <= 0) period = grid.resolution;
  Tick phase = grid.quantize_ticks(u_phase * static_cast<double>(period));
  if (phase >= period) phase = period - grid.resolution;
  if (phase < 0) phase = 0;
  ClockDomain c{period, phase, horizon};
  c.validate();
  return c;
}

}  // namespace polysim
