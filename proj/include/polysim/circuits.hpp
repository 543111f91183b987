#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "polysim/clock.hpp"
#include "polysim/image.hpp"
#include "polysim/waveform.hpp"

namespace polysim {

enum class CircuitKind { Robert, Gamma, Threshold, Kde };
enum class Mode { Sync, Poly };

std::string to_string(CircuitKind k);
std::string to_string(Mode m);
CircuitKind circuit_from_string(const std::string& s);
Mode mode_from_string(const std::string& s);

// ---------------------------------------------------------------------------
// Netlist model
//
// A cell is described as elements connected by numbered wires. The netlist is
// what the fault planner walks; evaluation uses the same wire ids so injected
// flips land on exactly the signals the plan names. Mux inputs are ordered
// {a, b, sel} with sel=0 passing a.

enum class GateKind { Xor, Mux, Adder, Comparator, Exp };

struct NetElement {
  GateKind kind;
  std::vector<int> inputs;
  std::vector<int> outputs;
};

struct Netlist {
  int wire_count = 0;
  std::vector<NetElement> elements;
  int output_wire = -1;

  int new_wire() { return wire_count++; }
  int add(GateKind kind, std::vector<int> inputs, std::vector<int> outputs) {
    elements.push_back({kind, std::move(inputs), std::move(outputs)});
    return static_cast<int>(elements.size()) - 1;
  }
};

// Balanced mux tree over a power-of-two leaf list. Nodes are created level by
// level from the leaves up, left to right; `nodes.back()` is the root output.
// Every mux gets its own select wire, appended to `sels` in creation order.
struct MuxTreeWires {
  std::vector<int> sels;
  std::vector<int> nodes;
};
MuxTreeWires add_mux_tree(Netlist& nl, const std::vector<int>& leaves);

// Edge-detection cell: two cross-difference XORs merged by a scaled adder.
struct RobertCell {
  Netlist nl;
  int w_r00, w_r11, w_r01, w_r10;  // own pixel and the three neighbours
  int w_sel;
  int w_x0, w_x1;
  int w_out;
};
RobertCell make_robert_cell();

// Gamma-correction cell: six copies of the pixel stream are summed into a
// 3-bit count that steers a mux tree over the seven coefficient streams (the
// eighth leaf reuses the last coefficient; counts never reach it).
struct GammaCell {
  Netlist nl;
  std::array<int, 6> w_x;
  std::array<int, 7> w_coeff;
  std::array<int, 3> w_bus;
  std::vector<int> w_node;  // 7 mux outputs, level order; back() is the cell output
  int w_out;
};
GammaCell make_gamma_cell();

// Mean-thresholding cell: a KxK window average from a mux tree, compared
// against the centre pixel by a saturating up/down counter.
struct ThresholdCell {
  Netlist nl;
  int window_k;
  std::vector<int> w_window;  // K*K leaves, row-major over the window
  std::vector<int> w_sel;     // K*K-1 selects
  std::vector<int> w_node;
  int center_index;  // offset of the cell's own pixel in w_window
  int w_out;
};
ThresholdCell make_threshold_cell(int window_k);

// Density-estimation cell: the current pixel stream is XORed against each
// history frame's stream, each difference drives an exponential element, and
// a mux tree averages the results into a probability-density stream.
struct KdeCell {
  Netlist nl;
  int frames;
  int w_x;
  std::vector<int> w_hist;
  std::vector<int> w_d;
  std::vector<int> w_e;
  std::vector<int> w_sel;
  std::vector<int> w_node;
  int w_out;
};
KdeCell make_kde_cell(int frames);

// ---------------------------------------------------------------------------
// Fault flip streams
//
// One waveform per tapped wire, on the cell's clock, high during cycles where
// the wire's value is inverted. A default-constructed FlipSet means fault-free
// evaluation. Built by the fault planner; consumed by the evaluators below.
struct FlipSet {
  std::vector<Waveform> flips;  // indexed by wire id; horizon 0 = no tap

  bool active() const { return !flips.empty(); }
  const Waveform* for_wire(int wire) const {
    if (flips.empty() || flips[static_cast<std::size_t>(wire)].horizon == 0) return nullptr;
    return &flips[static_cast<std::size_t>(wire)];
  }
};

// ---------------------------------------------------------------------------
// Cell evaluators
//
// The edge-detection cell is pure combinational logic, so it is evaluated by
// direct waveform algebra and reacts to every input transition. The other
// cells contain clocked elements; all of their inputs are generated on the
// cell's own clock (held between edges), so they are evaluated one local
// rising edge at a time, which reproduces the continuous behaviour exactly.

Waveform eval_robert(const RobertCell& cell, const Waveform& r00, const Waveform& r11,
                     const Waveform& r01, const Waveform& r10, const Waveform& sel,
                     const FlipSet& flips);

Waveform eval_gamma(const GammaCell& cell, std::span<const Waveform> xs,
                    std::span<const Waveform> coeffs, const ClockDomain& clock,
                    const FlipSet& flips);

Waveform eval_threshold(const ThresholdCell& cell, std::span<const Waveform* const> window,
                        std::span<const Waveform> sels, const ClockDomain& clock,
                        int comparator_states, const FlipSet& flips);

// `aux` carries the exponential elements' gain/states auxiliary streams.
Waveform eval_kde(const KdeCell& cell, const Waveform& x, std::span<const Waveform> hist,
                  std::span<const Waveform> sels, std::span<const Waveform> aux,
                  const ClockDomain& clock, int exp_states, const FlipSet& flips);

// ---------------------------------------------------------------------------
// Array runner

struct ArraySettings {
  Mode mode = Mode::Sync;
  std::size_t stream_length = 1024;  // cycles consumed per cell
  double clock_min_ns = 2.0;
  double clock_max_ns = 4.0;
  double sync_period_ns = 2.0;
  double spike_min_ns = 0.2;
  int lfsr_width = 10;
  bool invert_compare = false;
  int comparator_states = 32;
  int exp_states = 8;
  int exp_gain = 4;
  double kde_threshold = 0.5;
  int window_k = 8;
  std::uint64_t master_seed = 1;
  std::uint64_t trial = 0;
  double fault_rate = 0.0;
  int threads = 0;  // 0 = hardware concurrency

  void validate() const;

  // Streams are generated out to the slowest legal clock's span so every cell
  // sees enough input, and measured over the fastest clock's span so every
  // cell has finished producing. Synchronous mode collapses the two.
  Tick generate_horizon() const;
  Tick measure_window() const;
};

// Runs one whole-image experiment. `history` is only used by the density
// circuit (one frame per tree leaf). Output pixels are 0..255 for the two
// grayscale circuits and {0, 255} for the two binary ones.
Image run_array(CircuitKind kind, const Image& img, std::span<const Image> history,
                const ArraySettings& s);

}  // namespace polysim
