#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "polysim/circuits.hpp"
#include "polysim/image.hpp"

namespace polysim {

// Everything one run needs, filled from defaults, a config file, and CLI
// overrides (in that order). The flat dotted key for each field is listed in
// the README; parse_config accepts both dotted keys and [section] grouping.
struct RunSettings {
  ArraySettings array;  // mode/trial/fault_rate are filled per experiment
  CircuitKind circuit = CircuitKind::Robert;
  std::vector<Mode> modes = {Mode::Sync, Mode::Poly};
  int trials = 1;
  std::vector<double> fault_rates = {0.0, 0.05, 0.10, 0.20};
  std::string image_spec = "random";
  int image_width = 32;
  int image_height = 32;
  std::uint64_t image_seed = 7;
  int kde_frames = 32;
  std::string out_dir = "out";
  bool write_images = true;

  void validate() const;
};

// Input image plus history frames (history only populated for the density
// circuit, which always works on the synthetic frame stack).
struct Scene {
  Image input;
  std::vector<Image> history;
};
Scene make_scene(const RunSettings& rs);

// Reference output the stochastic result is scored against.
Image golden_for(const RunSettings& rs, const Scene& scene);

struct ExperimentResult {
  Mode mode;
  std::uint64_t trial;
  double fault_rate;
  Image output;
  double error_pct;
  std::optional<double> error_pct_ideal;  // gamma only: error against the pure power law
};

ExperimentResult run_experiment(const RunSettings& rs, const Scene& scene, const Image& golden,
                                Mode mode, std::uint64_t trial, double fault_rate);

struct SweepRow {
  CircuitKind circuit;
  Mode mode;
  double rate;
  std::uint64_t trial;
  double error_pct;
};

// modes x rates x trials, rows in that nesting order.
std::vector<SweepRow> run_sweep(const RunSettings& rs);

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);
std::vector<SweepRow> read_sweep_csv(const std::string& path);

// Config files: `key = value` lines, `#` comments, optional `[section]`
// headers that prefix following keys with "section.". Unknown keys throw.
RunSettings parse_config_text(const std::string& text);
RunSettings parse_config_file(const std::string& path);
void apply_config_key(RunSettings& rs, const std::string& key, const std::string& value);

// Canonical flat echo of every effective setting; reparses to the same
// settings.
void write_config_echo(const RunSettings& rs, std::ostream& os);

// Full runs behind the CLI subcommands. Both create out_dir and report what
// they wrote on `log` (one line per file).
void run_simulate(const RunSettings& rs, std::ostream& log);
void run_inject_sweep(const RunSettings& rs, std::ostream& log);
void write_report(const std::string& sweep_csv, const std::string& out_dir, std::ostream& log);

}  // namespace polysim
