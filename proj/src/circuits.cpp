#include "polysim/circuits.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include "polysim/faults.hpp"
#include "polysim/gates.hpp"
#include "polysim/metrics.hpp"
#include "polysim/seeds.hpp"
#include "polysim/sng.hpp"
#include "polysim/util.hpp"

namespace polysim {

std::string to_string(CircuitKind k) {
  switch (k) {
    case CircuitKind::Robert: return "robert";
    case CircuitKind::Gamma: return "gamma";
    case CircuitKind::Threshold: return "threshold";
    case CircuitKind::Kde: return "kde";
  }
  return "?";
}

std::string to_string(Mode m) { return m == Mode::Sync ? "sync" : "poly"; }

CircuitKind circuit_from_string(const std::string& s) {
  if (s == "robert") return CircuitKind::Robert;
  if (s == "gamma") return CircuitKind::Gamma;
  if (s == "threshold") return CircuitKind::Threshold;
  if (s == "kde") return CircuitKind::Kde;
  throw ConfigError("unknown circuit: " + s);
}

Mode mode_from_string(const std::string& s) {
  if (s == "sync") return Mode::Sync;
  if (s == "poly") return Mode::Poly;
  throw ConfigError("unknown mode: " + s);
}

MuxTreeWires add_mux_tree(Netlist& nl, const std::vector<int>& leaves) {
  if (leaves.empty() || (leaves.size() & (leaves.size() - 1)) != 0) {
    throw ConfigError("mux tree needs a power-of-two leaf count");
  }
  MuxTreeWires t;
  std::vector<int> level = leaves;
  while (level.size() > 1) {
    std::vector<int> next(level.size() / 2);
    for (std::size_t i = 0; i < next.size(); ++i) {
      const int sel = nl.new_wire();
      const int out = nl.new_wire();
      nl.add(GateKind::Mux, {level[2 * i], level[2 * i + 1], sel}, {out});
      t.sels.push_back(sel);
      t.nodes.push_back(out);
      next[i] = out;
    }
    level = std::move(next);
  }
  return t;
}

RobertCell make_robert_cell() {
  RobertCell c;
  Netlist& nl = c.nl;
  c.w_r00 = nl.new_wire();
  c.w_r11 = nl.new_wire();
  c.w_r01 = nl.new_wire();
  c.w_r10 = nl.new_wire();
  c.w_sel = nl.new_wire();
  c.w_x0 = nl.new_wire();
  c.w_x1 = nl.new_wire();
  c.w_out = nl.new_wire();
  nl.add(GateKind::Xor, {c.w_r00, c.w_r11}, {c.w_x0});
  nl.add(GateKind::Xor, {c.w_r01, c.w_r10}, {c.w_x1});
  nl.add(GateKind::Mux, {c.w_x0, c.w_x1, c.w_sel}, {c.w_out});
  nl.output_wire = c.w_out;
  return c;
}

GammaCell make_gamma_cell() {
  GammaCell c;
  Netlist& nl = c.nl;
  for (int i = 0; i < 6; ++i) c.w_x[i] = nl.new_wire();
  for (int i = 0; i < 7; ++i) c.w_coeff[i] = nl.new_wire();
  for (int i = 0; i < 3; ++i) c.w_bus[i] = nl.new_wire();
  nl.add(GateKind::Adder, std::vector<int>(c.w_x.begin(), c.w_x.end()),
         std::vector<int>(c.w_bus.begin(), c.w_bus.end()));
  // Mux tree over {c0..c6, c6}; the whole level shares one count bit as its
  // select, so nodes 0-3 switch on bit 0, nodes 4-5 on bit 1, node 6 on bit 2.
  std::array<int, 8> level = {c.w_coeff[0], c.w_coeff[1], c.w_coeff[2], c.w_coeff[3],
                              c.w_coeff[4], c.w_coeff[5], c.w_coeff[6], c.w_coeff[6]};
  std::size_t sz = 8;
  int bit = 0;
  while (sz > 1) {
    for (std::size_t i = 0; i < sz / 2; ++i) {
      const int out = nl.new_wire();
      nl.add(GateKind::Mux, {level[2 * i], level[2 * i + 1], c.w_bus[bit]}, {out});
      c.w_node.push_back(out);
      level[i] = out;
    }
    sz /= 2;
    ++bit;
  }
  c.w_out = c.w_node.back();
  nl.output_wire = c.w_out;
  return c;
}

ThresholdCell make_threshold_cell(int window_k) {
  if (window_k < 2 || (window_k & (window_k - 1)) != 0) {
    throw ConfigError("window size must be a power of two");
  }
  ThresholdCell c;
  c.window_k = window_k;
  Netlist& nl = c.nl;
  const int k2 = window_k * window_k;
  c.w_window.resize(k2);
  for (int i = 0; i < k2; ++i) c.w_window[i] = nl.new_wire();
  c.center_index = (window_k / 2) * window_k + window_k / 2;
  MuxTreeWires t = add_mux_tree(nl, c.w_window);
  c.w_sel = std::move(t.sels);
  c.w_node = std::move(t.nodes);
  c.w_out = nl.new_wire();
  nl.add(GateKind::Comparator, {c.w_window[c.center_index], c.w_node.back()}, {c.w_out});
  nl.output_wire = c.w_out;
  return c;
}

KdeCell make_kde_cell(int frames) {
  if (frames < 2 || (frames & (frames - 1)) != 0) {
    throw ConfigError("frame count must be a power of two");
  }
  KdeCell c;
  c.frames = frames;
  Netlist& nl = c.nl;
  c.w_x = nl.new_wire();
  c.w_hist.resize(frames);
  c.w_d.resize(frames);
  c.w_e.resize(frames);
  for (int i = 0; i < frames; ++i) c.w_hist[i] = nl.new_wire();
  for (int i = 0; i < frames; ++i) {
    c.w_d[i] = nl.new_wire();
    nl.add(GateKind::Xor, {c.w_x, c.w_hist[i]}, {c.w_d[i]});
  }
  for (int i = 0; i < frames; ++i) {
    c.w_e[i] = nl.new_wire();
    nl.add(GateKind::Exp, {c.w_d[i]}, {c.w_e[i]});
  }
  MuxTreeWires t = add_mux_tree(nl, c.w_e);
  c.w_sel = std::move(t.sels);
  c.w_node = std::move(t.nodes);
  c.w_out = c.w_node.back();
  nl.output_wire = c.w_out;
  return c;
}

namespace {

// Forward-only readers over a FlipSet, one per tapped wire. Flip waveforms
// are cycle-aligned on the cell clock, so sampling at a rising edge reads
// that cycle's flip state.
class FlipCursors {
 public:
  explicit FlipCursors(const FlipSet& fs) : fs_(fs) {
    if (fs_.active()) {
      cur_.reserve(fs_.flips.size());
      for (const Waveform& w : fs_.flips) cur_.emplace_back(w);
    }
  }

  bool at(int wire, Tick t) {
    if (cur_.empty()) return false;
    const auto i = static_cast<std::size_t>(wire);
    if (fs_.flips[i].horizon == 0) return false;
    return cur_[i].at(t);
  }

 private:
  const FlipSet& fs_;
  std::vector<WaveCursor> cur_;
};

}  // namespace

Waveform eval_robert(const RobertCell& cell, const Waveform& r00, const Waveform& r11,
                     const Waveform& r01, const Waveform& r10, const Waveform& sel,
                     const FlipSet& flips) {
  if (!flips.active()) {
    return mux(sel, combine2(r00, r11, kXor), combine2(r01, r10, kXor));
  }
  auto tap = [&](const Waveform& w, int wire) -> Waveform {
    const Waveform* f = flips.for_wire(wire);
    return f ? combine2(w, *f, kXor) : w;
  };
  const Waveform x0 = tap(combine2(tap(r00, cell.w_r00), tap(r11, cell.w_r11), kXor), cell.w_x0);
  const Waveform x1 = tap(combine2(tap(r01, cell.w_r01), tap(r10, cell.w_r10), kXor), cell.w_x1);
  return tap(mux(tap(sel, cell.w_sel), x0, x1), cell.w_out);
}

Waveform eval_gamma(const GammaCell& cell, std::span<const Waveform> xs,
                    std::span<const Waveform> coeffs, const ClockDomain& clock,
                    const FlipSet& flips) {
  const Tick horizon = xs[0].horizon;
  std::array<WaveCursor, 6> xc;
  std::array<WaveCursor, 7> cc;
  for (int i = 0; i < 6; ++i) xc[i] = WaveCursor(xs[i]);
  for (int i = 0; i < 7; ++i) cc[i] = WaveCursor(coeffs[i]);
  FlipCursors fc(flips);

  WaveformBuilder b(false);  // the output register starts cleared
  for (Tick e = clock.phase; e < horizon; e += clock.period) {
    int count = 0;
    for (int i = 0; i < 6; ++i) count += static_cast<int>(xc[i].at(e) != fc.at(cell.w_x[i], e));
    std::array<bool, 3> bus;
    for (int i = 0; i < 3; ++i) bus[i] = (((count >> i) & 1) != 0) != fc.at(cell.w_bus[i], e);
    std::array<bool, 8> lv;
    for (int i = 0; i < 7; ++i) lv[i] = cc[i].at(e) != fc.at(cell.w_coeff[i], e);
    lv[7] = lv[6];  // duplicated last-coefficient leaf: same wire, same flip
    std::size_t sz = 8;
    int node = 0;
    int bit = 0;
    while (sz > 1) {
      for (std::size_t i = 0; i < sz / 2; ++i) {
        bool v = bus[bit] ? lv[2 * i + 1] : lv[2 * i];
        v = v != fc.at(cell.w_node[node], e);
        lv[i] = v;
        ++node;
      }
      sz /= 2;
      ++bit;
    }
    b.set_level(e, lv[0]);
  }
  return std::move(b).finish(horizon);
}

Waveform eval_threshold(const ThresholdCell& cell, std::span<const Waveform* const> window,
                        std::span<const Waveform> sels, const ClockDomain& clock,
                        int comparator_states, const FlipSet& flips) {
  const std::size_t k2 = window.size();
  const Tick horizon = window[0]->horizon;
  std::vector<WaveCursor> wc(k2);
  for (std::size_t i = 0; i < k2; ++i) wc[i] = WaveCursor(*window[i]);
  std::vector<WaveCursor> sc(sels.size());
  for (std::size_t i = 0; i < sels.size(); ++i) sc[i] = WaveCursor(sels[i]);
  FlipCursors fc(flips);

  ComparatorState cmp(comparator_states);
  std::vector<bool> lv(k2);
  WaveformBuilder b(cmp.output());  // initial decision holds until the first edge
  for (Tick e = clock.phase; e < horizon; e += clock.period) {
    for (std::size_t i = 0; i < k2; ++i) lv[i] = wc[i].at(e) != fc.at(cell.w_window[i], e);
    const bool xb = lv[static_cast<std::size_t>(cell.center_index)];
    std::size_t sz = k2;
    int node = 0;
    while (sz > 1) {
      for (std::size_t i = 0; i < sz / 2; ++i) {
        const bool sb = sc[static_cast<std::size_t>(node)].at(e) != fc.at(cell.w_sel[node], e);
        bool v = sb ? lv[2 * i + 1] : lv[2 * i];
        v = v != fc.at(cell.w_node[node], e);
        lv[i] = v;
        ++node;
      }
      sz /= 2;
    }
    bool ob = cmp.step(xb, lv[0]);
    ob = ob != fc.at(cell.w_out, e);
    b.set_level(e, ob);
  }
  return std::move(b).finish(horizon);
}

Waveform eval_kde(const KdeCell& cell, const Waveform& x, std::span<const Waveform> hist,
                  std::span<const Waveform> sels, std::span<const Waveform> aux,
                  const ClockDomain& clock, int exp_states, const FlipSet& flips) {
  const std::size_t n = hist.size();
  const Tick horizon = x.horizon;
  WaveCursor xc(x);
  std::vector<WaveCursor> hc(n), ac(n), sc(sels.size());
  for (std::size_t i = 0; i < n; ++i) hc[i] = WaveCursor(hist[i]);
  for (std::size_t i = 0; i < n; ++i) ac[i] = WaveCursor(aux[i]);
  for (std::size_t i = 0; i < sels.size(); ++i) sc[i] = WaveCursor(sels[i]);
  FlipCursors fc(flips);

  std::vector<ExpState> es(n, ExpState(exp_states));
  std::vector<bool> lv(n);
  // Every exponential element starts saturated (output 1), so the tree output
  // is 1 before the first edge no matter what the selects hold.
  WaveformBuilder b(true);
  for (Tick e = clock.phase; e < horizon; e += clock.period) {
    const bool xb = xc.at(e) != fc.at(cell.w_x, e);
    for (std::size_t i = 0; i < n; ++i) {
      const bool hb = hc[i].at(e) != fc.at(cell.w_hist[i], e);
      const bool db = (xb != hb) != fc.at(cell.w_d[i], e);
      const bool eb = es[i].step(db, ac[i].at(e));
      lv[i] = eb != fc.at(cell.w_e[i], e);
    }
    std::size_t sz = n;
    int node = 0;
    while (sz > 1) {
      for (std::size_t i = 0; i < sz / 2; ++i) {
        const bool sb = sc[static_cast<std::size_t>(node)].at(e) != fc.at(cell.w_sel[node], e);
        bool v = sb ? lv[2 * i + 1] : lv[2 * i];
        v = v != fc.at(cell.w_node[node], e);
        lv[i] = v;
        ++node;
      }
      sz /= 2;
    }
    b.set_level(e, lv[0]);
  }
  return std::move(b).finish(horizon);
}

void ArraySettings::validate() const {
  if (stream_length == 0) throw ConfigError("stream length must be positive");
  if (clock_min_ns <= 0 || clock_max_ns < clock_min_ns) {
    throw ConfigError("clock range must satisfy 0 < min <= max");
  }
  if (sync_period_ns <= 0) throw ConfigError("sync period must be positive");
  if (spike_min_ns < 0) throw ConfigError("spike width must be non-negative");
  if (lfsr_width < 3 || lfsr_width > 16) throw ConfigError("lfsr width must be in [3, 16]");
  if (comparator_states < 2 || comparator_states % 2 != 0) {
    throw ConfigError("comparator states must be even and >= 2");
  }
  if (exp_states < 1) throw ConfigError("exp states must be positive");
  if (exp_gain < 1 || exp_gain > exp_states) {
    throw ConfigError("exp gain must be in [1, states]");
  }
  if (kde_threshold < 0 || kde_threshold > 1) throw ConfigError("kde threshold must be in [0, 1]");
  if (window_k < 2 || (window_k & (window_k - 1)) != 0) {
    throw ConfigError("window size must be a power of two");
  }
  if (fault_rate < 0 || fault_rate > 1) throw ConfigError("fault rate must be in [0, 1]");
  if (threads < 0) throw ConfigError("thread count must be non-negative");
}

Tick ArraySettings::generate_horizon() const {
  const double per = (mode == Mode::Sync) ? sync_period_ns : clock_max_ns;
  return static_cast<Tick>(stream_length) * ns_to_ticks(per);
}

Tick ArraySettings::measure_window() const {
  const double per = (mode == Mode::Sync) ? sync_period_ns : clock_min_ns;
  return static_cast<Tick>(stream_length) * ns_to_ticks(per);
}

namespace {

ClockDomain cell_clock(const ArraySettings& s, std::uint64_t cell, Tick horizon) {
  if (s.mode == Mode::Sync) {
    return ClockDomain{ns_to_ticks(s.sync_period_ns), 0, horizon};
  }
  return random_clock(derive_seed(s.master_seed, s.trial, cell, SeedRole::CellClock, 0),
                      s.clock_min_ns, s.clock_max_ns, horizon);
}

// One cell's stream factory. The invert_compare flag flips the SNG comparison
// polarity; the complemented threshold keeps the encoded probability equal to
// `target` either way.
struct CellStreams {
  const ArraySettings& s;
  std::uint64_t cell;
  ClockDomain clk;

  Lfsr lfsr(SeedRole role, std::uint64_t index) const {
    return Lfsr::maximal(
        s.lfsr_width,
        lfsr_seed_from(derive_seed(s.master_seed, s.trial, cell, role, index), s.lfsr_width));
  }

  Waveform sng(SeedRole role, std::uint64_t index, double target, Tick horizon) const {
    const double t = s.invert_compare ? 1.0 - target : target;
    return generate_until(SngConfig::make(t, lfsr(role, index), clk, s.invert_compare), horizon);
  }

  Waveform sng_shared(Lfsr source, double target, Tick horizon) const {
    const double t = s.invert_compare ? 1.0 - target : target;
    return generate_until(SngConfig::make(t, std::move(source), clk, s.invert_compare), horizon);
  }
};

FlipSet cell_flips(const Netlist& nl, const ArraySettings& s, std::uint64_t cell,
                   const ClockDomain& clk, Tick horizon) {
  if (s.fault_rate <= 0.0) return {};
  const FaultPlan plan = plan_for_circuit(
      nl, s.fault_rate, derive_seed(s.master_seed, s.trial, cell, SeedRole::FaultSource, 0));
  return build_flips(plan, clk, horizon, s.lfsr_width);
}

std::uint8_t to_px(double m) {
  return static_cast<std::uint8_t>(std::llround(std::clamp(m, 0.0, 1.0) * 255.0));
}

Image run_robert(const Image& img, const ArraySettings& s) {
  const Tick d = s.generate_horizon();
  const Tick wm = s.measure_window();
  const Tick spike = ns_to_ticks(s.spike_min_ns);
  const int h = img.height;
  const int w = img.width;
  const std::size_t n = static_cast<std::size_t>(h) * w;

  std::vector<ClockDomain> clocks(n);
  std::vector<Waveform> value(n);     // each cell's own-domain pixel stream
  std::vector<Waveform> boundary(n);  // the spike-filtered view neighbours see
  parallel_for(n, s.threads, [&](std::size_t i) {
    clocks[i] = cell_clock(s, i, d);
    CellStreams cs{s, i, clocks[i]};
    value[i] = cs.sng(SeedRole::ValueSng, 0, img.px[i] / 255.0, d);
    boundary[i] = filter_spikes(value[i], spike);
  });

  const RobertCell cell = make_robert_cell();
  Image out = Image::filled(w, h, 0);
  parallel_for(n, s.threads, [&](std::size_t i) {
    const int r = static_cast<int>(i) / w;
    const int c = static_cast<int>(i) % w;
    const int r1 = std::min(r + 1, h - 1);
    const int c1 = std::min(c + 1, w - 1);
    const std::size_t i11 = static_cast<std::size_t>(r1) * w + c1;
    const std::size_t i01 = static_cast<std::size_t>(r) * w + c1;
    const std::size_t i10 = static_cast<std::size_t>(r1) * w + c;
    CellStreams cs{s, i, clocks[i]};
    const Waveform sel = cs.sng(SeedRole::SelectSng, 0, 0.5, d);
    const FlipSet flips = cell_flips(cell.nl, s, i, clocks[i], d);
    const Waveform& w11 = (i11 == i) ? value[i] : boundary[i11];
    const Waveform& w01 = (i01 == i) ? value[i] : boundary[i01];
    const Waveform& w10 = (i10 == i) ? value[i] : boundary[i10];
    Waveform o = eval_robert(cell, value[i], w11, w01, w10, sel, flips);
    o = filter_spikes(o, spike);
    out.px[i] = to_px(measure_until(o, wm));
  });
  return out;
}

Image run_gamma(const Image& img, const ArraySettings& s) {
  const Tick d = s.generate_horizon();
  const Tick wm = s.measure_window();
  const Tick spike = ns_to_ticks(s.spike_min_ns);
  const std::size_t n = static_cast<std::size_t>(img.height) * img.width;

  const GammaCell cell = make_gamma_cell();
  Image out = Image::filled(img.width, img.height, 0);
  parallel_for(n, s.threads, [&](std::size_t i) {
    CellStreams cs{s, i, cell_clock(s, i, d)};
    std::array<Waveform, 6> xs;
    for (int k = 0; k < 6; ++k) xs[k] = cs.sng(SeedRole::ValueSng, k, img.px[i] / 255.0, d);
    std::array<Waveform, 7> coeff;
    for (int k = 0; k < 7; ++k) coeff[k] = cs.sng(SeedRole::CoeffSng, k, kGammaCoeff[k], d);
    const FlipSet flips = cell_flips(cell.nl, s, i, cs.clk, d);
    Waveform o = eval_gamma(cell, xs, coeff, cs.clk, flips);
    o = filter_spikes(o, spike);
    out.px[i] = to_px(measure_until(o, wm));
  });
  return out;
}

Image run_threshold(const Image& img, const ArraySettings& s) {
  const Tick d = s.generate_horizon();
  const Tick wm = s.measure_window();
  const Tick spike = ns_to_ticks(s.spike_min_ns);
  const int h = img.height;
  const int w = img.width;
  const int k = s.window_k;
  const std::size_t n = static_cast<std::size_t>(h) * w;

  std::vector<ClockDomain> clocks(n);
  std::vector<Waveform> value(n);
  std::vector<Waveform> boundary(n);
  parallel_for(n, s.threads, [&](std::size_t i) {
    clocks[i] = cell_clock(s, i, d);
    CellStreams cs{s, i, clocks[i]};
    value[i] = cs.sng(SeedRole::ValueSng, 0, img.px[i] / 255.0, d);
    boundary[i] = filter_spikes(value[i], spike);
  });

  const ThresholdCell cell = make_threshold_cell(k);
  const std::size_t k2 = static_cast<std::size_t>(k) * k;
  Image out = Image::filled(w, h, 0);
  parallel_for(n, s.threads, [&](std::size_t i) {
    const int r = static_cast<int>(i) / w;
    const int c = static_cast<int>(i) % w;
    CellStreams cs{s, i, clocks[i]};
    std::vector<const Waveform*> window(k2);
    std::size_t j = 0;
    for (int dr = -k / 2; dr < k / 2; ++dr) {
      for (int dc = -k / 2; dc < k / 2; ++dc, ++j) {
        const int rr = std::clamp(r + dr, 0, h - 1);
        const int cc = std::clamp(c + dc, 0, w - 1);
        const std::size_t src = static_cast<std::size_t>(rr) * w + cc;
        window[j] = (src == i) ? &value[i] : &boundary[src];
      }
    }
    std::vector<Waveform> sels(k2 - 1);
    for (std::size_t t = 0; t < sels.size(); ++t) {
      sels[t] = cs.sng(SeedRole::SelectSng, t, 0.5, d);
    }
    const FlipSet flips = cell_flips(cell.nl, s, i, clocks[i], d);
    Waveform o = eval_threshold(cell, window, sels, clocks[i], s.comparator_states, flips);
    o = filter_spikes(o, spike);
    out.px[i] = measure_until(o, wm) >= 0.5 ? 255 : 0;
  });
  return out;
}

Image run_kde(const Image& img, std::span<const Image> history, const ArraySettings& s) {
  if (history.empty()) throw ConfigError("density circuit needs history frames");
  const int frames = static_cast<int>(history.size());
  for (const Image& f : history) {
    if (!f.same_shape(img)) throw ConfigError("history frame shape mismatch");
  }
  const Tick d = s.generate_horizon();
  const Tick wm = s.measure_window();
  const Tick spike = ns_to_ticks(s.spike_min_ns);
  const std::size_t n = static_cast<std::size_t>(img.height) * img.width;

  const KdeCell cell = make_kde_cell(frames);
  const double aux_target = static_cast<double>(s.exp_gain) / s.exp_states;
  Image out = Image::filled(img.width, img.height, 0);
  parallel_for(n, s.threads, [&](std::size_t i) {
    CellStreams cs{s, i, cell_clock(s, i, d)};
    // The current pixel and every history stream share one source so the
    // XORed pairs measure exact absolute differences.
    const Lfsr shared = cs.lfsr(SeedRole::ValueSng, 0);
    const Waveform x = cs.sng_shared(shared, img.px[i] / 255.0, d);
    std::vector<Waveform> hist(static_cast<std::size_t>(frames));
    for (int f = 0; f < frames; ++f) {
      hist[static_cast<std::size_t>(f)] = cs.sng_shared(shared, history[f].px[i] / 255.0, d);
    }
    std::vector<Waveform> sels(static_cast<std::size_t>(frames) - 1);
    for (std::size_t t = 0; t < sels.size(); ++t) {
      sels[t] = cs.sng(SeedRole::SelectSng, t, 0.5, d);
    }
    std::vector<Waveform> aux(static_cast<std::size_t>(frames));
    for (int f = 0; f < frames; ++f) {
      aux[static_cast<std::size_t>(f)] = cs.sng(SeedRole::ExpAux, f, aux_target, d);
    }
    const FlipSet flips = cell_flips(cell.nl, s, i, cs.clk, d);
    Waveform o = eval_kde(cell, x, hist, sels, aux, cs.clk, s.exp_states, flips);
    o = filter_spikes(o, spike);
    out.px[i] = measure_until(o, wm) < s.kde_threshold ? 0 : 255;
  });
  return out;
}

}  // namespace

Image run_array(CircuitKind kind, const Image& img, std::span<const Image> history,
                const ArraySettings& s) {
  s.validate();
  if (img.width <= 0 || img.height <= 0) throw ConfigError("empty input image");
  switch (kind) {
    case CircuitKind::Robert: return run_robert(img, s);
    case CircuitKind::Gamma: return run_gamma(img, s);
    case CircuitKind::Threshold: return run_threshold(img, s);
    case CircuitKind::Kde: return run_kde(img, history, s);
  }
  throw ConfigError("unknown circuit kind");
}

}  // namespace polysim
