#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "polysim/harness.hpp"
#include "polysim/image.hpp"
#include "polysim/seeds.hpp"
#include "polysim/util.hpp"

using namespace polysim;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "polysim_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

RunSettings small_settings() {
  RunSettings rs;
  rs.circuit = CircuitKind::Robert;
  rs.image_width = 4;
  rs.image_height = 4;
  rs.array.stream_length = 256;
  rs.trials = 2;
  rs.fault_rates = {0.0, 0.05};
  return rs;
}

}  // namespace

TEST_CASE("seed derivation is frozen") {
  // Golden values pin the exact derivation chain; any change to it silently
  // reshuffles every stream, so it must fail loudly here instead.
  CHECK(derive_seed(1, 0, 0, SeedRole::ValueSng, 0) == 0xe3edde919c2add2bull);
  CHECK(derive_seed(1, 0, 0, SeedRole::SelectSng, 0) == 0x0785ffb86c7f250dull);
  CHECK(derive_seed(1, 0, 5, SeedRole::SelectSng, 3) == 0x98b007ef8fc221d0ull);
  CHECK(derive_seed(12345, 7, 42, SeedRole::CellClock, 0) == 0xf616c01d162e0adbull);
  CHECK(derive_seed(1, 1, 0, SeedRole::ValueSng, 0) == 0xe8b2e90fdc725b93ull);

  CHECK(lfsr_seed_from(0xe3edde919c2add2bull, 10) == 724);
  CHECK(lfsr_seed_from(0xf616c01d162e0adbull, 10) == 139);

  // Every coordinate of the key must matter.
  const std::uint64_t base = derive_seed(1, 0, 0, SeedRole::ValueSng, 0);
  CHECK(derive_seed(2, 0, 0, SeedRole::ValueSng, 0) != base);
  CHECK(derive_seed(1, 1, 0, SeedRole::ValueSng, 0) != base);
  CHECK(derive_seed(1, 0, 1, SeedRole::ValueSng, 0) != base);
  CHECK(derive_seed(1, 0, 0, SeedRole::SelectSng, 0) != base);
  CHECK(derive_seed(1, 0, 0, SeedRole::ValueSng, 1) != base);

  for (std::uint64_t i = 0; i < 200; ++i) {
    const std::uint64_t d = derive_seed(9, 3, i, SeedRole::FaultSource, i);
    const std::uint32_t s10 = lfsr_seed_from(d, 10);
    const std::uint32_t s3 = lfsr_seed_from(d, 3);
    CHECK(s10 >= 1);
    CHECK(s10 <= 1023);
    CHECK(s3 >= 1);
    CHECK(s3 <= 7);
  }
}

TEST_CASE("config keys reach their fields") {
  RunSettings rs;
  apply_config_key(rs, "circuit.kind", "gamma");
  apply_config_key(rs, "image.spec", "ramp");
  apply_config_key(rs, "image.width", "16");
  apply_config_key(rs, "image.height", "8");
  apply_config_key(rs, "stream.length", "512");
  apply_config_key(rs, "sng.master_seed", "99");
  apply_config_key(rs, "sng.invert_compare", "true");
  apply_config_key(rs, "run.modes", "poly");
  apply_config_key(rs, "run.trials", "3");
  apply_config_key(rs, "fault.rates", "0,0.1,0.2");
  apply_config_key(rs, "run.write_images", "0");
  CHECK(rs.circuit == CircuitKind::Gamma);
  CHECK(rs.image_spec == "ramp");
  CHECK(rs.image_width == 16);
  CHECK(rs.image_height == 8);
  CHECK(rs.array.stream_length == 512);
  CHECK(rs.array.master_seed == 99);
  CHECK(rs.array.invert_compare);
  CHECK(rs.modes == std::vector<Mode>{Mode::Poly});
  CHECK(rs.trials == 3);
  CHECK(rs.fault_rates == std::vector<double>{0.0, 0.1, 0.2});
  CHECK(!rs.write_images);

  CHECK_THROWS_AS(apply_config_key(rs, "no.such.key", "1"), ConfigError);
  CHECK_THROWS_AS(apply_config_key(rs, "image.width", "wide"), ConfigError);
  CHECK_THROWS_AS(apply_config_key(rs, "fault.rates", "0,zero"), ConfigError);
  CHECK_THROWS_AS(apply_config_key(rs, "run.write_images", "maybe"), ConfigError);
  CHECK_THROWS_AS(apply_config_key(rs, "run.modes", "fast"), ConfigError);
  CHECK_THROWS_AS(apply_config_key(rs, "circuit.kind", "sobel"), ConfigError);
}

TEST_CASE("config text supports sections and comments") {
  const std::string text =
      "# top comment\n"
      "circuit.kind = threshold\n"
      "\n"
      "[image]\n"
      "spec = document  # trailing comment\n"
      "width = 12\n"
      "height = 10\n"
      "[run]\n"
      "trials = 4\n"
      "modes = sync,poly\n";
  const RunSettings rs = parse_config_text(text);
  CHECK(rs.circuit == CircuitKind::Threshold);
  CHECK(rs.image_spec == "document");
  CHECK(rs.image_width == 12);
  CHECK(rs.image_height == 10);
  CHECK(rs.trials == 4);
  CHECK(rs.modes == std::vector<Mode>({Mode::Sync, Mode::Poly}));

  CHECK_THROWS_AS(parse_config_text("just words\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[image\nspec = ramp\n"), ConfigError);
}

TEST_CASE("the config echo reparses to itself") {
  RunSettings rs = small_settings();
  rs.circuit = CircuitKind::Kde;
  rs.kde_frames = 16;
  rs.array.kde_threshold = 0.42;
  rs.array.invert_compare = true;
  rs.modes = {Mode::Poly};
  rs.out_dir = "some/dir";
  rs.write_images = false;

  std::ostringstream first;
  write_config_echo(rs, first);
  const RunSettings back = parse_config_text(first.str());
  std::ostringstream second;
  write_config_echo(back, second);
  CHECK(first.str() == second.str());
  CHECK(back.circuit == CircuitKind::Kde);
  CHECK(back.kde_frames == 16);
  CHECK(back.array.kde_threshold == doctest::Approx(0.42));
  CHECK(back.out_dir == "some/dir");
  CHECK(!back.write_images);
}

TEST_CASE("sweep csv round-trips and rejects foreign files") {
  const fs::path dir = fresh_dir("sweep_csv");
  const std::vector<SweepRow> rows = {
      {CircuitKind::Robert, Mode::Sync, 0.0, 0, 1.25},
      {CircuitKind::Robert, Mode::Poly, 0.05, 1, 2.5},
      {CircuitKind::Gamma, Mode::Poly, 0.2, 3, 0.015625},
  };
  const std::string path = (dir / "sweep.csv").string();
  write_sweep_csv(rows, path);
  const std::vector<SweepRow> back = read_sweep_csv(path);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].circuit == rows[i].circuit);
    CHECK(back[i].mode == rows[i].mode);
    CHECK(back[i].rate == doctest::Approx(rows[i].rate));
    CHECK(back[i].trial == rows[i].trial);
    CHECK(back[i].error_pct == doctest::Approx(rows[i].error_pct).epsilon(1e-6));
  }

  {
    std::ofstream os(dir / "bad_header.csv", std::ios::binary);
    os << "a,b,c\n";
  }
  CHECK_THROWS_AS(read_sweep_csv((dir / "bad_header.csv").string()), IoError);
  {
    std::ofstream os(dir / "bad_row.csv", std::ios::binary);
    os << "circuit,mode,rate,trial,error_pct\nrobert,sync,0.0,zero,1.0\n";
  }
  CHECK_THROWS_AS(read_sweep_csv((dir / "bad_row.csv").string()), IoError);
  CHECK_THROWS_AS(read_sweep_csv((dir / "missing.csv").string()), IoError);
}

TEST_CASE("sweep rows come out in mode, rate, trial order") {
  RunSettings rs = small_settings();
  rs.image_width = 3;
  rs.image_height = 3;
  const std::vector<SweepRow> rows = run_sweep(rs);
  REQUIRE(rows.size() == 2 * 2 * 2);
  std::size_t i = 0;
  for (Mode mode : {Mode::Sync, Mode::Poly}) {
    for (double rate : {0.0, 0.05}) {
      for (std::uint64_t t = 0; t < 2; ++t, ++i) {
        CHECK(rows[i].circuit == CircuitKind::Robert);
        CHECK(rows[i].mode == mode);
        CHECK(rows[i].rate == rate);
        CHECK(rows[i].trial == t);
        CHECK(rows[i].error_pct >= 0.0);
      }
    }
  }
}

TEST_CASE("simulate writes the documented file set") {
  const fs::path dir = fresh_dir("simulate");
  RunSettings rs = small_settings();
  rs.out_dir = dir.string();
  std::ostringstream log;
  run_simulate(rs, log);

  for (const char* name : {"config_echo.cfg", "input.pgm", "golden.pgm", "results.csv",
                           "summary.csv", "clocks.csv", "out_sync_t0.pgm", "out_sync_t1.pgm",
                           "out_poly_t0.pgm", "out_poly_t1.pgm"}) {
    CAPTURE(name);
    CHECK(fs::exists(dir / name));
    CHECK(log.str().find(name) != std::string::npos);
  }

  const std::string results = slurp(dir / "results.csv");
  CHECK(results.rfind("circuit,mode,trial,error_pct,error_pct_ideal\n", 0) == 0);
  CHECK(count_lines(results) == 1 + 4);
  // Only the correction circuit reports an ideal-curve error.
  CHECK(results.find("robert,sync,0,") != std::string::npos);
  std::istringstream rls(results);
  std::string line;
  std::getline(rls, line);
  while (std::getline(rls, line)) CHECK(line.back() == ',');

  const std::string summary = slurp(dir / "summary.csv");
  CHECK(summary.rfind("circuit,mode,trials,mean_error_pct,min_error_pct,max_error_pct\n", 0) == 0);
  CHECK(count_lines(summary) == 1 + 2);

  const std::string clocks = slurp(dir / "clocks.csv");
  CHECK(clocks.rfind("cell,row,col,period_ns,phase_ns\n", 0) == 0);
  CHECK(count_lines(clocks) == 1 + 16);

  const Image in = load_pgm((dir / "input.pgm").string());
  CHECK(in.width == 4);
  CHECK(in.height == 4);

  // The echo is a valid config describing this run.
  const RunSettings back = parse_config_file((dir / "config_echo.cfg").string());
  CHECK(back.circuit == rs.circuit);
  CHECK(back.image_width == rs.image_width);
  CHECK(back.trials == rs.trials);

  // A sync-only run has no clock table and writes no per-cell clocks line.
  const fs::path dir2 = fresh_dir("simulate_sync");
  rs.out_dir = dir2.string();
  rs.modes = {Mode::Sync};
  rs.write_images = false;
  std::ostringstream log2;
  run_simulate(rs, log2);
  CHECK(!fs::exists(dir2 / "clocks.csv"));
  CHECK(!fs::exists(dir2 / "out_sync_t0.pgm"));
  CHECK(log2.str().find("clocks.csv") == std::string::npos);
}

TEST_CASE("the correction circuit reports the ideal-curve column") {
  const fs::path dir = fresh_dir("simulate_gamma");
  RunSettings rs = small_settings();
  rs.circuit = CircuitKind::Gamma;
  rs.image_spec = "ramp";
  rs.trials = 1;
  rs.modes = {Mode::Sync};
  rs.write_images = false;
  rs.out_dir = dir.string();
  std::ostringstream log;
  run_simulate(rs, log);
  const std::string results = slurp(dir / "results.csv");
  std::istringstream rls(results);
  std::string header, row;
  std::getline(rls, header);
  REQUIRE(std::getline(rls, row));
  CHECK(row.back() != ',');
  const std::size_t last_comma = row.rfind(',');
  const double ideal = std::stod(row.substr(last_comma + 1));
  CHECK(ideal >= 0.0);
  CHECK(ideal < 100.0);
}

TEST_CASE("inject-sweep output is identical for any thread count") {
  RunSettings rs = small_settings();
  rs.trials = 1;
  std::array<std::string, 3> bytes;
  int i = 0;
  for (int threads : {1, 2, 4}) {
    const fs::path dir = fresh_dir("sweep_threads_" + std::to_string(threads));
    rs.out_dir = dir.string();
    rs.array.threads = threads;
    std::ostringstream log;
    run_inject_sweep(rs, log);
    bytes[i++] = slurp(dir / "sweep.csv");
  }
  CHECK(bytes[0] == bytes[1]);
  CHECK(bytes[0] == bytes[2]);
  CHECK(count_lines(bytes[0]) == 1 + 2 * 2);
}

TEST_CASE("report aggregates per-rate means and marks missing modes") {
  const fs::path dir = fresh_dir("report");
  const std::vector<SweepRow> rows = {
      {CircuitKind::Robert, Mode::Sync, 0.0, 0, 1.0},
      {CircuitKind::Robert, Mode::Sync, 0.0, 1, 2.0},
      {CircuitKind::Robert, Mode::Poly, 0.0, 0, 3.0},
      {CircuitKind::Robert, Mode::Sync, 0.1, 0, 2.0},
      {CircuitKind::Gamma, Mode::Poly, 0.2, 0, 4.0},
  };
  const std::string sweep = (dir / "sweep.csv").string();
  write_sweep_csv(rows, sweep);
  std::ostringstream log;
  write_report(sweep, dir.string(), log);

  const std::string robert = slurp(dir / "plot_robert.dat");
  CHECK(robert ==
        "# rate mean_error_pct_sync mean_error_pct_poly\n"
        "0.000000 1.500000 3.000000\n"
        "0.100000 2.000000 nan\n");
  const std::string gamma = slurp(dir / "plot_gamma.dat");
  CHECK(gamma ==
        "# rate mean_error_pct_sync mean_error_pct_poly\n"
        "0.200000 nan 4.000000\n");
  CHECK(log.str().find("plot_robert.dat") != std::string::npos);
  CHECK(log.str().find("plot_gamma.dat") != std::string::npos);
}

TEST_CASE("settings validation rejects nonsense") {
  RunSettings rs;
  rs.trials = 0;
  CHECK_THROWS_AS(rs.validate(), ConfigError);
  rs = RunSettings{};
  rs.modes.clear();
  CHECK_THROWS_AS(rs.validate(), ConfigError);
  rs = RunSettings{};
  rs.kde_frames = 12;
  CHECK_THROWS_AS(rs.validate(), ConfigError);
  rs = RunSettings{};
  rs.fault_rates = {0.5, 1.5};
  CHECK_THROWS_AS(rs.validate(), ConfigError);
  rs = RunSettings{};
  rs.out_dir.clear();
  CHECK_THROWS_AS(rs.validate(), ConfigError);
  rs = RunSettings{};
  rs.image_width = 0;
  CHECK_THROWS_AS(rs.validate(), ConfigError);
}
