#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "polysim/harness.hpp"
#include "polysim/util.hpp"

namespace {

// Shortcut flags shared by simulate and inject-sweep; everything funnels
// through the config-key machinery so CLI and file settings validate the
// same way. Precedence: defaults < --config < --set < shortcut flags.
struct CommonArgs {
  std::string config;
  std::vector<std::string> sets;
  std::string circuit;
  std::string image;
  std::string mode;
  std::string out;
  std::string rates;
  int width = 0;
  int height = 0;
  int trials = 0;
  int threads = 0;
  long long length = 0;
  unsigned long long master_seed = 0;
};

void add_common(CLI::App* sub, CommonArgs& a, bool with_rates) {
  sub->add_option("--config", a.config, "config file with key = value lines");
  sub->add_option("--set", a.sets, "single key=value override, repeatable");
  sub->add_option("--circuit", a.circuit, "robert, gamma, threshold or kde");
  sub->add_option("--image", a.image, "image spec (gray:<v>, ramp, vramp, stripes, "
                                      "checkerboard, random, binary-random, document) or a "
                                      "PGM path");
  sub->add_option("--width", a.width, "image width in pixels");
  sub->add_option("--height", a.height, "image height in pixels");
  sub->add_option("--trials", a.trials, "independent trials per mode");
  sub->add_option("--mode", a.mode, "sync, poly or both");
  sub->add_option("--threads", a.threads, "worker threads (0 = all cores)");
  sub->add_option("--out", a.out, "output directory");
  sub->add_option("--length", a.length, "stream length in clock cycles");
  sub->add_option("--master-seed", a.master_seed, "root seed for every random draw");
  if (with_rates) {
    sub->add_option("--rates", a.rates, "comma-separated fault rates, e.g. 0,0.05,0.1,0.2");
  }
}

polysim::RunSettings settings_from(const CLI::App* sub, const CommonArgs& a) {
  polysim::RunSettings rs;
  if (!a.config.empty()) rs = polysim::parse_config_file(a.config);
  for (const std::string& kv : a.sets) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos) throw polysim::ConfigError("--set expects key=value: " + kv);
    polysim::apply_config_key(rs, kv.substr(0, eq), kv.substr(eq + 1));
  }
  auto touch = [&](const std::string& flag, const std::string& key, const std::string& value) {
    if (sub->count(flag) > 0) polysim::apply_config_key(rs, key, value);
  };
  touch("--circuit", "circuit.kind", a.circuit);
  touch("--image", "image.spec", a.image);
  touch("--width", "image.width", std::to_string(a.width));
  touch("--height", "image.height", std::to_string(a.height));
  touch("--trials", "run.trials", std::to_string(a.trials));
  touch("--threads", "run.threads", std::to_string(a.threads));
  touch("--out", "run.out", a.out);
  touch("--length", "stream.length", std::to_string(a.length));
  touch("--master-seed", "sng.master_seed", std::to_string(a.master_seed));
  if (sub->count("--mode") > 0) {
    polysim::apply_config_key(rs, "run.modes", a.mode == "both" ? "sync,poly" : a.mode);
  }
  if (sub->count("--rates") > 0) polysim::apply_config_key(rs, "fault.rates", a.rates);
  return rs;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event-driven simulator for self-timed stochastic image circuits"};
  app.require_subcommand(1);

  CommonArgs sim_args;
  CLI::App* sim = app.add_subcommand("simulate", "run fault-free trials and score them");
  add_common(sim, sim_args, false);

  CommonArgs sweep_args;
  CLI::App* sweep = app.add_subcommand("inject-sweep", "sweep soft-error rates");
  add_common(sweep, sweep_args, true);

  std::string sweep_csv;
  std::string report_out = "out";
  CLI::App* report = app.add_subcommand("report", "summarize a sweep.csv into plot data");
  report->add_option("--sweep", sweep_csv, "sweep.csv produced by inject-sweep")->required();
  report->add_option("--out", report_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sim->parsed()) {
      polysim::run_simulate(settings_from(sim, sim_args), std::cout);
    } else if (sweep->parsed()) {
      polysim::run_inject_sweep(settings_from(sweep, sweep_args), std::cout);
    } else if (report->parsed()) {
      polysim::write_report(sweep_csv, report_out, std::cout);
    }
  } catch (const polysim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const polysim::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
