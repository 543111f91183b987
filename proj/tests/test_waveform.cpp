#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>
#include <stdexcept>

#include "polysim/waveform.hpp"
#include "test_util.hpp"

using namespace polysim;

namespace {

Waveform wave_ns(bool init, std::initializer_list<double> transitions_ns, double horizon_ns) {
  Waveform w;
  w.initial_level = init;
  for (double t : transitions_ns) w.transitions.push_back(ns_to_ticks(t));
  w.horizon = ns_to_ticks(horizon_ns);
  w.validate();
  return w;
}

}  // namespace

TEST_CASE("measure integrates level segments exactly") {
  // Hand integration: low [0,1), high [1,3), low [3,4), high [4,10) = 8 ns high.
  const Waveform w = wave_ns(false, {1, 3, 4}, 10);
  CHECK(high_time(w, w.horizon) == 8 * kTicksPerNs);
  CHECK(measure(w) == doctest::Approx(0.8));

  CHECK(measure(Waveform::constant(true, ns_to_ticks(5))) == doctest::Approx(1.0));
  CHECK(measure(Waveform::constant(false, ns_to_ticks(5))) == doctest::Approx(0.0));
}

TEST_CASE("value_at uses the post-transition level at the instant itself") {
  const Waveform w = wave_ns(false, {1, 3, 4}, 10);
  CHECK(value_at(w, 0) == false);
  CHECK(value_at(w, ns_to_ticks(1)) == true);   // exactly on a transition
  CHECK(value_at(w, ns_to_ticks(2)) == true);
  CHECK(value_at(w, ns_to_ticks(3)) == false);
  CHECK(value_at(w, ns_to_ticks(3.5)) == false);
  CHECK(value_at(w, ns_to_ticks(4)) == true);
  CHECK(value_at(w, ns_to_ticks(9.999)) == true);
}

TEST_CASE("high_time over partial windows") {
  const Waveform w = wave_ns(false, {1, 3, 4}, 10);
  CHECK(high_time(w, ns_to_ticks(0.5)) == 0);
  CHECK(high_time(w, ns_to_ticks(1)) == 0);  // window [0,1) excludes the new level
  CHECK(high_time(w, ns_to_ticks(2)) == kTicksPerNs);
  CHECK(high_time(w, ns_to_ticks(3)) == 2 * kTicksPerNs);
  CHECK(high_time(w, ns_to_ticks(4)) == 2 * kTicksPerNs);
  CHECK(high_time(w, ns_to_ticks(5)) == 3 * kTicksPerNs);
  CHECK(measure_until(w, ns_to_ticks(5)) == doctest::Approx(0.6));
}

TEST_CASE("validate rejects malformed signals") {
  Waveform w;
  w.horizon = 10;
  w.transitions = {5, 5};
  CHECK_THROWS_AS(w.validate(), std::invalid_argument);
  w.transitions = {0};
  CHECK_THROWS_AS(w.validate(), std::invalid_argument);
  w.transitions = {10};
  CHECK_THROWS_AS(w.validate(), std::invalid_argument);
  w.transitions = {7, 3};
  CHECK_THROWS_AS(w.validate(), std::invalid_argument);
  w.transitions = {};
  w.horizon = 0;
  CHECK_THROWS_AS(w.validate(), std::invalid_argument);
}

TEST_CASE("combine2 matches pointwise logic on random signals") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const Waveform a = testutil::random_wave(seed, 100000, 80);
    const Waveform b = testutil::random_wave(seed + 1000, 100000, 80);
    const Waveform g = combine2(a, b, kAnd);
    const Waveform o = combine2(a, b, kOr);
    const Waveform x = combine2(a, b, kXor);
    g.validate();
    o.validate();
    x.validate();
    testutil::Rng rng(seed * 77);
    for (int i = 0; i < 200; ++i) {
      const Tick t = static_cast<Tick>(rng.below(100000));
      const bool av = value_at(a, t);
      const bool bv = value_at(b, t);
      CHECK(value_at(g, t) == (av && bv));
      CHECK(value_at(o, t) == (av || bv));
      CHECK(value_at(x, t) == (av != bv));
    }
    // AND can only be high where both inputs are, so its high time is bounded.
    CHECK(high_time(g, g.horizon) <= std::min(high_time(a, a.horizon), high_time(b, b.horizon)));
  }
}

TEST_CASE("combine2 requires matching horizons") {
  const Waveform a = Waveform::constant(true, 10);
  const Waveform b = Waveform::constant(true, 11);
  CHECK_THROWS_AS(combine2(a, b, kAnd), std::invalid_argument);
}

TEST_CASE("mux follows a when sel low and b when sel high") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Waveform sel = testutil::random_wave(seed, 50000, 40);
    const Waveform a = testutil::random_wave(seed + 500, 50000, 40);
    const Waveform b = testutil::random_wave(seed + 900, 50000, 40);
    const Waveform m = mux(sel, a, b);
    m.validate();
    testutil::Rng rng(seed * 31);
    for (int i = 0; i < 200; ++i) {
      const Tick t = static_cast<Tick>(rng.below(50000));
      CHECK(value_at(m, t) == (value_at(sel, t) ? value_at(b, t) : value_at(a, t)));
    }
  }
}

TEST_CASE("invert flips every level") {
  const Waveform w = wave_ns(false, {1, 3, 4}, 10);
  const Waveform v = invert(w);
  CHECK(measure(v) == doctest::Approx(0.2));
  const Waveform back = invert(v);
  CHECK(back.initial_level == w.initial_level);
  CHECK(back.transitions == w.transitions);
}

TEST_CASE("filter_spikes removes only intervals strictly below the width") {
  // Three pulses: 0.19 ns, 0.20 ns, 0.21 ns. The 0.2 ns filter kills the first.
  const Waveform w = wave_ns(false, {1, 1.19, 2, 2.20, 3, 3.21}, 5);
  const Waveform f = filter_spikes(w, ns_to_ticks(0.2));
  CHECK(f.transitions ==
        std::vector<Tick>{ns_to_ticks(2), ns_to_ticks(2.20), ns_to_ticks(3), ns_to_ticks(3.21)});
  CHECK(high_time(f, f.horizon) == ns_to_ticks(0.20) + ns_to_ticks(0.21));
}

TEST_CASE("filter_spikes keeps a trailing high run that touches the horizon") {
  // [4.9, 5.0) is 0.1 ns long but is not a complete pulse; it survives only
  // if at least min_width of it fits before the horizon. It does not, so the
  // filter removes it.
  const Waveform w = wave_ns(false, {4.9}, 5);
  const Waveform f = filter_spikes(w, ns_to_ticks(0.2));
  CHECK(f.transitions.empty());
  const Waveform w2 = wave_ns(false, {4.5}, 5);
  const Waveform f2 = filter_spikes(w2, ns_to_ticks(0.2));
  CHECK(f2.transitions == std::vector<Tick>{ns_to_ticks(4.5)});
}

TEST_CASE("filter_spikes is idempotent and never adds high time") {
  const Tick min_w = ns_to_ticks(0.2);
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const Waveform w = testutil::random_wave(seed, ns_to_ticks(40), 60);
    const Waveform f = filter_spikes(w, min_w);
    f.validate();
    CHECK(high_time(f, f.horizon) <= high_time(w, w.horizon));
    // No remaining high interval is shorter than the width.
    Tick start = -1;
    bool level = f.initial_level;
    Tick prev = 0;
    std::vector<std::pair<Tick, Tick>> highs;
    if (level) start = 0;
    for (Tick t : f.transitions) {
      if (level) highs.emplace_back(start, t);
      level = !level;
      if (level) start = t;
      prev = t;
    }
    (void)prev;
    if (level) highs.emplace_back(start, f.horizon);
    for (auto [s, e] : highs) CHECK(e - s >= min_w);
    const Waveform ff = filter_spikes(f, min_w);
    CHECK(ff.initial_level == f.initial_level);
    CHECK(ff.transitions == f.transitions);
  }
}

TEST_CASE("sample reads held levels at given edges") {
  const Waveform w = wave_ns(false, {1, 3}, 5);
  const std::vector<Tick> edges = {ns_to_ticks(0.5), ns_to_ticks(2), ns_to_ticks(4)};
  const std::vector<std::uint8_t> bits = sample(w, edges);
  CHECK(bits == std::vector<std::uint8_t>{0, 1, 0});
  const std::vector<Tick> bad = {ns_to_ticks(5)};
  CHECK_THROWS_AS(sample(w, bad), std::out_of_range);
}

TEST_CASE("hold_bits and sample round-trip") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    testutil::Rng rng(seed);
    const Tick period = 1000 + static_cast<Tick>(rng.below(2000));
    const Tick phase = static_cast<Tick>(rng.below(static_cast<std::uint64_t>(period)));
    std::vector<Tick> edges;
    std::vector<std::uint8_t> bits;
    const Tick horizon = phase + 64 * period;
    for (int k = 0; k < 64; ++k) {
      edges.push_back(phase + k * period);
      bits.push_back(static_cast<std::uint8_t>(rng.below(2)));
    }
    const Waveform w = hold_bits(edges, bits, horizon, false);
    w.validate();
    CHECK(sample(w, edges) == bits);
    CHECK(value_at(w, 0) == (phase == 0 ? bits[0] != 0 : false));
  }
}

TEST_CASE("serialize round-trips and rejects truncation") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Waveform w = testutil::random_wave(seed, 123456, 50);
    const std::vector<std::uint8_t> bytes = serialize(w);
    const Waveform r = deserialize(bytes);
    CHECK(r.initial_level == w.initial_level);
    CHECK(r.transitions == w.transitions);
    CHECK(r.horizon == w.horizon);
    std::vector<std::uint8_t> cut(bytes.begin(), bytes.end() - 1);
    CHECK_THROWS(deserialize(cut));
  }
}

TEST_CASE("dump_text lists each level segment") {
  const Waveform w = wave_ns(true, {1.5}, 3);
  std::ostringstream os;
  dump_text(w, os);
  CHECK(os.str() == "t=0.000000 level=1\nt=1.500000 level=0\n");
}

TEST_CASE("WaveCursor agrees with value_at on forward queries") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Waveform w = testutil::random_wave(seed, 100000, 100);
    WaveCursor cur(w);
    testutil::Rng rng(seed + 3);
    Tick t = 0;
    for (int i = 0; i < 100; ++i) {
      t += static_cast<Tick>(rng.below(1500));
      if (t >= w.horizon) break;
      CHECK(cur.at(t) == value_at(w, t));
    }
  }
}

TEST_CASE("builder cancels double flips at one instant") {
  WaveformBuilder b(false);
  b.set_level(10, true);
  b.set_level(10, false);  // same instant: net no change
  b.set_level(20, true);
  const Waveform w = std::move(b).finish(100);
  CHECK(w.initial_level == false);
  CHECK(w.transitions == std::vector<Tick>{20});
}

TEST_CASE("measure over a binomial sample concentrates near p") {
  // 1000 held bits at p = 0.3: the measured fraction stays within 5 sigma.
  testutil::Rng rng(99);
  std::vector<Tick> edges;
  std::vector<std::uint8_t> bits;
  int ones = 0;
  for (int k = 0; k < 1000; ++k) {
    edges.push_back(k * 100);
    const std::uint8_t bit = rng.real() < 0.3 ? 1 : 0;
    ones += bit;
    bits.push_back(bit);
  }
  const Waveform w = hold_bits(edges, bits, 100000, false);
  CHECK(measure(w) == doctest::Approx(ones / 1000.0));
  CHECK(measure(w) == doctest::Approx(0.3).epsilon(0.35));
}
