#include "polysim/waveform.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace polysim {

Waveform Waveform::constant(bool level, Tick horizon) {
  Waveform w{level, {}, horizon};
  w.validate();
  return w;
}

void Waveform::validate() const {
  if (horizon <= 0) throw std::invalid_argument("waveform horizon must be positive");
  Tick prev = 0;
  for (Tick t : transitions) {
    if (t <= prev) throw std::invalid_argument("waveform transitions must be strictly increasing and > 0");
    if (t >= horizon) throw std::invalid_argument("waveform transition at or beyond horizon");
    prev = t;
  }
}

bool value_at(const Waveform& w, Tick t) {
  if (t < 0 || t >= w.horizon) throw std::out_of_range("value_at: instant outside [0, horizon)");
  auto it = std::upper_bound(w.transitions.begin(), w.transitions.end(), t);
  auto flips = static_cast<std::size_t>(it - w.transitions.begin());
  return w.initial_level ^ static_cast<bool>(flips & 1);
}

Tick high_time(const Waveform& w, Tick until) {
  if (until < 0 || until > w.horizon) throw std::out_of_range("high_time: bound outside [0, horizon]");
  Tick total = 0;
  bool level = w.initial_level;
  Tick seg_start = 0;
  for (Tick t : w.transitions) {
    if (t >= until) break;
    if (level) total += t - seg_start;
    seg_start = t;
    level = !level;
  }
  if (level) total += until - seg_start;
  return total;
}

double measure(const Waveform& w) { return measure_until(w, w.horizon); }

double measure_until(const Waveform& w, Tick until) {
  if (until <= 0) throw std::out_of_range("measure_until: window must be positive");
  return static_cast<double>(high_time(w, until)) / static_cast<double>(until);
}

Waveform combine2(const Waveform& a, const Waveform& b, TruthTable2 f) {
  if (a.horizon != b.horizon) throw std::invalid_argument("combine2: horizon mismatch");
  bool la = a.initial_level, lb = b.initial_level;
  WaveformBuilder out(f(la, lb));
  std::size_t ia = 0, ib = 0;
  const auto& ta = a.transitions;
  const auto& tb = b.transitions;
  while (ia < ta.size() || ib < tb.size()) {
    Tick t;
    if (ib >= tb.size() || (ia < ta.size() && ta[ia] <= tb[ib])) {
      t = ta[ia];
    } else {
      t = tb[ib];
    }
    if (ia < ta.size() && ta[ia] == t) {
      la = !la;
      ++ia;
    }
    if (ib < tb.size() && tb[ib] == t) {
      lb = !lb;
      ++ib;
    }
    out.set_level(t, f(la, lb));
  }
  return std::move(out).finish(a.horizon);
}

Waveform mux(const Waveform& sel, const Waveform& a, const Waveform& b) {
  if (sel.horizon != a.horizon || a.horizon != b.horizon)
    throw std::invalid_argument("mux: horizon mismatch");
  bool ls = sel.initial_level, la = a.initial_level, lb = b.initial_level;
  auto pick = [&] { return ls ? lb : la; };
  WaveformBuilder out(pick());
  std::size_t is = 0, ia = 0, ib = 0;
  const auto& ts = sel.transitions;
  const auto& ta = a.transitions;
  const auto& tb = b.transitions;
  while (is < ts.size() || ia < ta.size() || ib < tb.size()) {
    Tick t = std::numeric_limits<Tick>::max();
    if (is < ts.size()) t = std::min(t, ts[is]);
    if (ia < ta.size()) t = std::min(t, ta[ia]);
    if (ib < tb.size()) t = std::min(t, tb[ib]);
    if (is < ts.size() && ts[is] == t) {
      ls = !ls;
      ++is;
    }
    if (ia < ta.size() && ta[ia] == t) {
      la = !la;
      ++ia;
    }
    if (ib < tb.size() && tb[ib] == t) {
      lb = !lb;
      ++ib;
    }
    out.set_level(t, pick());
  }
  return std::move(out).finish(sel.horizon);
}

Waveform invert(const Waveform& w) {
  return Waveform{!w.initial_level, w.transitions, w.horizon};
}

Waveform filter_spikes(const Waveform& w, Tick min_width) {
  if (min_width < 0) throw std::invalid_argument("filter_spikes: negative width");
  if (min_width == 0) return w;
  WaveformBuilder out(false);
  bool level = w.initial_level;
  Tick seg_start = 0;
  auto emit_high = [&](Tick s, Tick e) {
    if (e - s >= min_width) {
      out.set_level(s, true);
      out.set_level(e, false);
    }
  };
  for (Tick t : w.transitions) {
    if (level) emit_high(seg_start, t);
    seg_start = t;
    level = !level;
  }
  if (level) emit_high(seg_start, w.horizon);
  return std::move(out).finish(w.horizon);
}

std::vector<std::uint8_t> sample(const Waveform& w, std::span<const Tick> edges) {
  std::vector<std::uint8_t> bits;
  bits.reserve(edges.size());
  WaveCursor cur(w);
  Tick prev = -1;
  for (Tick e : edges) {
    if (e <= prev) throw std::out_of_range("sample: edges must be strictly ascending");
    if (e < 0 || e >= w.horizon) throw std::out_of_range("sample: edge outside [0, horizon)");
    prev = e;
    bits.push_back(cur.at(e) ? 1 : 0);
  }
  return bits;
}

Waveform hold_bits(std::span<const Tick> edges, std::span<const std::uint8_t> bits, Tick horizon,
                   bool pre_level) {
  if (edges.size() != bits.size()) throw std::invalid_argument("hold_bits: size mismatch");
  WaveformBuilder out(pre_level);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    out.set_level(edges[k], bits[k] != 0);
  }
  return std::move(out).finish(horizon);
}

namespace {

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_u64(std::span<const std::uint8_t> in, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in[at + i]) << (8 * i);
  return v;
}

}  // namespace

std::vector<std::uint8_t> serialize(const Waveform& w) {
  std::vector<std::uint8_t> out;
  out.reserve(8 * (w.transitions.size() + 2) + 1);
  put_u64(out, w.transitions.size());
  for (Tick t : w.transitions) put_u64(out, static_cast<std::uint64_t>(t));
  out.push_back(w.initial_level ? 1 : 0);
  put_u64(out, static_cast<std::uint64_t>(w.horizon));
  return out;
}

Waveform deserialize(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 17) throw std::invalid_argument("deserialize: truncated waveform");
  std::uint64_t count = get_u64(bytes, 0);
  if (bytes.size() != 8 * (count + 2) + 1) throw std::invalid_argument("deserialize: length mismatch");
  Waveform w;
  w.transitions.reserve(count);
  std::size_t at = 8;
  for (std::uint64_t i = 0; i < count; ++i, at += 8)
    w.transitions.push_back(static_cast<Tick>(get_u64(bytes, at)));
  w.initial_level = bytes[at] != 0;
  w.horizon = static_cast<Tick>(get_u64(bytes, at + 1));
  w.validate();
  return w;
}

void dump_text(const Waveform& w, std::ostream& os) {
  char buf[64];
  auto line = [&](Tick t, bool level) {
    std::snprintf(buf, sizeof buf, "t=%.6f level=%d\n", ticks_to_ns(t), level ? 1 : 0);
    os << buf;
  };
  bool level = w.initial_level;
  line(0, level);
  for (Tick t : w.transitions) {
    level = !level;
    line(t, level);
  }
}

}  // namespace polysim
