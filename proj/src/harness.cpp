#include "polysim/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "polysim/metrics.hpp"
#include "polysim/seeds.hpp"
#include "polysim/util.hpp"

namespace polysim {

namespace {

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long r = std::stoll(trim(v), &pos);
    if (pos != trim(v).size()) throw std::invalid_argument("trailing");
    return r;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not an integer: '" + v + "'");
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long long r = std::stoull(trim(v), &pos);
    if (pos != trim(v).size()) throw std::invalid_argument("trailing");
    return r;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not an unsigned integer: '" + v + "'");
  }
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double r = std::stod(trim(v), &pos);
    if (pos != trim(v).size()) throw std::invalid_argument("trailing");
    return r;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not a number: '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t == "true" || t == "1") return true;
  if (t == "false" || t == "0") return false;
  throw ConfigError(key + ": not a boolean: '" + v + "'");
}

}  // namespace

void RunSettings::validate() const {
  array.validate();
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (modes.empty()) throw ConfigError("at least one mode is required");
  if (image_width < 1 || image_height < 1) throw ConfigError("image size must be positive");
  if (kde_frames < 2 || (kde_frames & (kde_frames - 1)) != 0) {
    throw ConfigError("frame count must be a power of two");
  }
  for (double r : fault_rates) {
    if (r < 0.0 || r > 1.0) throw ConfigError("fault rates must be in [0, 1]");
  }
  if (out_dir.empty()) throw ConfigError("output directory must be set");
}

Scene make_scene(const RunSettings& rs) {
  Scene sc;
  if (rs.circuit == CircuitKind::Kde) {
    // The density circuit always works on the synthetic frame stack: a flat
    // jittered background history and a current frame with a bright object.
    sc.history = make_kde_history(rs.image_width, rs.image_height, rs.kde_frames, rs.image_seed);
    sc.input = make_kde_current(rs.image_width, rs.image_height, rs.image_seed);
  } else {
    sc.input = make_image(rs.image_spec, rs.image_width, rs.image_height, rs.image_seed);
  }
  return sc;
}

Image golden_for(const RunSettings& rs, const Scene& scene) {
  switch (rs.circuit) {
    case CircuitKind::Robert: return oracle_robert(scene.input);
    case CircuitKind::Gamma: return oracle_gamma(scene.input);
    case CircuitKind::Threshold: return oracle_threshold(scene.input, rs.array.window_k);
    case CircuitKind::Kde: return oracle_kde(scene.history, scene.input, rs.array.kde_threshold);
  }
  throw ConfigError("unknown circuit kind");
}

ExperimentResult run_experiment(const RunSettings& rs, const Scene& scene, const Image& golden,
                                Mode mode, std::uint64_t trial, double fault_rate) {
  ArraySettings as = rs.array;
  as.mode = mode;
  as.trial = trial;
  as.fault_rate = fault_rate;
  ExperimentResult res;
  res.mode = mode;
  res.trial = trial;
  res.fault_rate = fault_rate;
  res.output = run_array(rs.circuit, scene.input, scene.history, as);
  res.error_pct = error_rate(golden, res.output);
  if (rs.circuit == CircuitKind::Gamma) {
    res.error_pct_ideal = error_rate(oracle_gamma_ideal(scene.input), res.output);
  }
  return res;
}

std::vector<SweepRow> run_sweep(const RunSettings& rs) {
  rs.validate();
  const Scene scene = make_scene(rs);
  const Image golden = golden_for(rs, scene);
  std::vector<SweepRow> rows;
  for (Mode mode : rs.modes) {
    for (double rate : rs.fault_rates) {
      for (int t = 0; t < rs.trials; ++t) {
        const ExperimentResult r =
            run_experiment(rs, scene, golden, mode, static_cast<std::uint64_t>(t), rate);
        rows.push_back({rs.circuit, mode, rate, static_cast<std::uint64_t>(t), r.error_pct});
      }
    }
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path);
  os << "circuit,mode,rate,trial,error_pct\n";
  for (const SweepRow& r : rows) {
    os << to_string(r.circuit) << ',' << to_string(r.mode) << ',' << fmt6(r.rate) << ','
       << r.trial << ',' << fmt6(r.error_pct) << '\n';
  }
  if (!os) throw IoError("failed writing " + path);
}

std::vector<SweepRow> read_sweep_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot read " + path);
  std::string line;
  if (!std::getline(is, line) || trim(line) != "circuit,mode,rate,trial,error_pct") {
    throw IoError(path + ": unexpected header");
  }
  std::vector<SweepRow> rows;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const std::vector<std::string> f = split(trim(line), ',');
    if (f.size() != 5) throw IoError(path + ": bad row at line " + std::to_string(lineno));
    try {
      rows.push_back({circuit_from_string(f[0]), mode_from_string(f[1]),
                      to_double("rate", f[2]), to_u64("trial", f[3]),
                      to_double("error_pct", f[4])});
    } catch (const ConfigError& e) {
      throw IoError(path + ": line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

void apply_config_key(RunSettings& rs, const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "circuit.kind") {
    rs.circuit = circuit_from_string(v);
  } else if (key == "circuit.window") {
    rs.array.window_k = static_cast<int>(to_int(key, v));
  } else if (key == "circuit.kde.frames") {
    rs.kde_frames = static_cast<int>(to_int(key, v));
  } else if (key == "circuit.kde.threshold") {
    rs.array.kde_threshold = to_double(key, v);
  } else if (key == "comparator.states") {
    rs.array.comparator_states = static_cast<int>(to_int(key, v));
  } else if (key == "exp.states") {
    rs.array.exp_states = static_cast<int>(to_int(key, v));
  } else if (key == "exp.gain") {
    rs.array.exp_gain = static_cast<int>(to_int(key, v));
  } else if (key == "clock.min_ns") {
    rs.array.clock_min_ns = to_double(key, v);
  } else if (key == "clock.max_ns") {
    rs.array.clock_max_ns = to_double(key, v);
  } else if (key == "clock.sync_ns") {
    rs.array.sync_period_ns = to_double(key, v);
  } else if (key == "stream.length") {
    rs.array.stream_length = static_cast<std::size_t>(to_u64(key, v));
  } else if (key == "stream.spike_ns") {
    rs.array.spike_min_ns = to_double(key, v);
  } else if (key == "sng.width") {
    rs.array.lfsr_width = static_cast<int>(to_int(key, v));
  } else if (key == "sng.invert_compare") {
    rs.array.invert_compare = to_bool(key, v);
  } else if (key == "sng.master_seed") {
    rs.array.master_seed = to_u64(key, v);
  } else if (key == "image.spec") {
    rs.image_spec = v;
  } else if (key == "image.width") {
    rs.image_width = static_cast<int>(to_int(key, v));
  } else if (key == "image.height") {
    rs.image_height = static_cast<int>(to_int(key, v));
  } else if (key == "image.seed") {
    rs.image_seed = to_u64(key, v);
  } else if (key == "run.trials") {
    rs.trials = static_cast<int>(to_int(key, v));
  } else if (key == "run.modes") {
    rs.modes.clear();
    for (const std::string& m : split(v, ',')) rs.modes.push_back(mode_from_string(trim(m)));
  } else if (key == "run.threads") {
    rs.array.threads = static_cast<int>(to_int(key, v));
  } else if (key == "run.out") {
    rs.out_dir = v;
  } else if (key == "run.write_images") {
    rs.write_images = to_bool(key, v);
  } else if (key == "fault.rates") {
    rs.fault_rates.clear();
    for (const std::string& r : split(v, ',')) rs.fault_rates.push_back(to_double(key, trim(r)));
  } else {
    throw ConfigError("unknown config key: " + key);
  }
}

RunSettings parse_config_text(const std::string& text) {
  RunSettings rs;
  std::istringstream is(text);
  std::string line;
  std::string prefix;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": bad section");
      const std::string name = trim(t.substr(1, t.size() - 2));
      prefix = name.empty() ? "" : name + ".";
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    apply_config_key(rs, prefix + trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return rs;
}

RunSettings parse_config_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str());
}

void write_config_echo(const RunSettings& rs, std::ostream& os) {
  std::string modes;
  for (std::size_t i = 0; i < rs.modes.size(); ++i) {
    if (i) modes += ',';
    modes += to_string(rs.modes[i]);
  }
  std::string rates;
  for (std::size_t i = 0; i < rs.fault_rates.size(); ++i) {
    if (i) rates += ',';
    rates += fmt6(rs.fault_rates[i]);
  }
  os << "circuit.kind = " << to_string(rs.circuit) << '\n'
     << "circuit.window = " << rs.array.window_k << '\n'
     << "circuit.kde.frames = " << rs.kde_frames << '\n'
     << "circuit.kde.threshold = " << fmt6(rs.array.kde_threshold) << '\n'
     << "comparator.states = " << rs.array.comparator_states << '\n'
     << "exp.states = " << rs.array.exp_states << '\n'
     << "exp.gain = " << rs.array.exp_gain << '\n'
     << "clock.min_ns = " << fmt6(rs.array.clock_min_ns) << '\n'
     << "clock.max_ns = " << fmt6(rs.array.clock_max_ns) << '\n'
     << "clock.sync_ns = " << fmt6(rs.array.sync_period_ns) << '\n'
     << "stream.length = " << rs.array.stream_length << '\n'
     << "stream.spike_ns = " << fmt6(rs.array.spike_min_ns) << '\n'
     << "sng.width = " << rs.array.lfsr_width << '\n'
     << "sng.invert_compare = " << (rs.array.invert_compare ? "true" : "false") << '\n'
     << "sng.master_seed = " << rs.array.master_seed << '\n'
     << "image.spec = " << rs.image_spec << '\n'
     << "image.width = " << rs.image_width << '\n'
     << "image.height = " << rs.image_height << '\n'
     << "image.seed = " << rs.image_seed << '\n'
     << "run.trials = " << rs.trials << '\n'
     << "run.modes = " << modes << '\n'
     << "run.threads = " << rs.array.threads << '\n'
     << "run.out = " << rs.out_dir << '\n'
     << "run.write_images = " << (rs.write_images ? "true" : "false") << '\n'
     << "fault.rates = " << rates << '\n';
}

namespace {

void write_clocks_csv(const RunSettings& rs, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path);
  os << "cell,row,col,period_ns,phase_ns\n";
  ArraySettings as = rs.array;
  as.mode = Mode::Poly;
  const Tick d = as.generate_horizon();
  for (int r = 0; r < rs.image_height; ++r) {
    for (int c = 0; c < rs.image_width; ++c) {
      const std::uint64_t cell = static_cast<std::uint64_t>(r) * rs.image_width + c;
      const ClockDomain clk =
          random_clock(derive_seed(as.master_seed, 0, cell, SeedRole::CellClock, 0),
                       as.clock_min_ns, as.clock_max_ns, d);
      os << cell << ',' << r << ',' << c << ',' << fmt6(ticks_to_ns(clk.period)) << ','
         << fmt6(ticks_to_ns(clk.phase)) << '\n';
    }
  }
}

}  // namespace

void run_simulate(const RunSettings& rs, std::ostream& log) {
  rs.validate();
  std::filesystem::create_directories(rs.out_dir);
  const Scene scene = make_scene(rs);
  const Image golden = golden_for(rs, scene);

  {
    std::ofstream os(rs.out_dir + "/config_echo.cfg", std::ios::binary);
    if (!os) throw IoError("cannot write " + rs.out_dir + "/config_echo.cfg");
    write_config_echo(rs, os);
  }
  log << "wrote " << rs.out_dir << "/config_echo.cfg\n";
  save_pgm(scene.input, rs.out_dir + "/input.pgm");
  log << "wrote " << rs.out_dir << "/input.pgm\n";
  save_pgm(golden, rs.out_dir + "/golden.pgm");
  log << "wrote " << rs.out_dir << "/golden.pgm\n";

  const std::string results_path = rs.out_dir + "/results.csv";
  std::ofstream results(results_path, std::ios::binary);
  if (!results) throw IoError("cannot write " + results_path);
  results << "circuit,mode,trial,error_pct,error_pct_ideal\n";

  struct Agg {
    int n = 0;
    double sum = 0, mn = 1e300, mx = -1e300;
  };
  std::vector<std::pair<Mode, Agg>> agg;
  for (Mode mode : rs.modes) {
    Agg a;
    for (int t = 0; t < rs.trials; ++t) {
      const ExperimentResult r =
          run_experiment(rs, scene, golden, mode, static_cast<std::uint64_t>(t), 0.0);
      results << to_string(rs.circuit) << ',' << to_string(mode) << ',' << t << ','
              << fmt6(r.error_pct) << ','
              << (r.error_pct_ideal ? fmt6(*r.error_pct_ideal) : std::string()) << '\n';
      a.n += 1;
      a.sum += r.error_pct;
      a.mn = std::min(a.mn, r.error_pct);
      a.mx = std::max(a.mx, r.error_pct);
      if (rs.write_images) {
        const std::string img_path =
            rs.out_dir + "/out_" + to_string(mode) + "_t" + std::to_string(t) + ".pgm";
        save_pgm(r.output, img_path);
        log << "wrote " << img_path << '\n';
      }
    }
    agg.emplace_back(mode, a);
  }
  results.flush();
  if (!results) throw IoError("failed writing " + results_path);
  log << "wrote " << results_path << '\n';

  const std::string summary_path = rs.out_dir + "/summary.csv";
  std::ofstream summary(summary_path, std::ios::binary);
  if (!summary) throw IoError("cannot write " + summary_path);
  summary << "circuit,mode,trials,mean_error_pct,min_error_pct,max_error_pct\n";
  for (const auto& [mode, a] : agg) {
    summary << to_string(rs.circuit) << ',' << to_string(mode) << ',' << a.n << ','
            << fmt6(a.sum / a.n) << ',' << fmt6(a.mn) << ',' << fmt6(a.mx) << '\n';
  }
  summary.flush();
  if (!summary) throw IoError("failed writing " + summary_path);
  log << "wrote " << summary_path << '\n';

  if (std::find(rs.modes.begin(), rs.modes.end(), Mode::Poly) != rs.modes.end()) {
    write_clocks_csv(rs, rs.out_dir + "/clocks.csv");
    log << "wrote " << rs.out_dir << "/clocks.csv\n";
  }
}

void run_inject_sweep(const RunSettings& rs, std::ostream& log) {
  rs.validate();
  std::filesystem::create_directories(rs.out_dir);
  const std::vector<SweepRow> rows = run_sweep(rs);
  const std::string path = rs.out_dir + "/sweep.csv";
  write_sweep_csv(rows, path);
  log << "wrote " << path << '\n';
  {
    std::ofstream os(rs.out_dir + "/config_echo.cfg", std::ios::binary);
    if (!os) throw IoError("cannot write " + rs.out_dir + "/config_echo.cfg");
    write_config_echo(rs, os);
  }
  log << "wrote " << rs.out_dir << "/config_echo.cfg\n";
}

void write_report(const std::string& sweep_csv, const std::string& out_dir, std::ostream& log) {
  const std::vector<SweepRow> rows = read_sweep_csv(sweep_csv);
  std::filesystem::create_directories(out_dir);
  // circuit -> rate -> per-mode (sum, n)
  std::map<std::string, std::map<double, std::array<std::pair<double, int>, 2>>> by;
  for (const SweepRow& r : rows) {
    auto& slot = by[to_string(r.circuit)][r.rate][r.mode == Mode::Sync ? 0 : 1];
    slot.first += r.error_pct;
    slot.second += 1;
  }
  for (const auto& [circuit, rates] : by) {
    const std::string path = out_dir + "/plot_" + circuit + ".dat";
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write " + path);
    os << "# rate mean_error_pct_sync mean_error_pct_poly\n";
    for (const auto& [rate, slots] : rates) {
      os << fmt6(rate);
      for (const auto& [sum, n] : slots) {
        os << ' ' << (n ? fmt6(sum / n) : "nan");
      }
      os << '\n';
    }
    if (!os) throw IoError("failed writing " + path);
    log << "wrote " << path << '\n';
  }
}

}  // namespace polysim
