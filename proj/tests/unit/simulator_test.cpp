#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "airgap/dut_simulator.hpp"
#include "airgap/signal_model.hpp"
#include "airgap/stats.hpp"

using namespace airgap;

namespace {

double sample_std(std::span<const double> x) { return std::sqrt(stats::variance(x)); }

SimulatedDut quiet_dut(const CouplingModel& m, std::uint64_t seed = 1) {
  LinkGeometry link;
  link.g_tx_dbi = 0.0;
  SimulatedDut dut(DutDescriptor{}, m, link, seed);
  dut.set_model(0, PathConfig{}, m);
  return dut;
}

RfStimulus carrier(double freq_hz, double power_dbm, bool on) {
  RfStimulus s;
  s.freq_hz = freq_hz;
  s.power_dbm = power_dbm;
  s.enabled = on;
  return s;
}

}  // namespace

TEST_CASE("coupling gain") {
  CouplingModel m;
  CHECK(coupling_gain(m, 868e6) == 0.0);
  m.resonances = {{500e6, 50e6, 1.0}};
  CHECK(coupling_gain(m, 500e6) == doctest::Approx(1.0));
  CHECK(coupling_gain(m, 550e6) == doctest::Approx(0.5));
  CHECK(coupling_gain(m, 450e6) == doctest::Approx(0.5));
  m.resonances.push_back({800e6, 10e6, 3.0});
  CHECK(coupling_gain(m, 800e6) == doctest::Approx(3.0 + 1.0 / (1.0 + 36.0)));
}

TEST_CASE("detector output") {
  const std::vector<double> zero(10, 0.0);
  for (double v : detector_output(zero, 5.0, 1.0)) CHECK(v == 0.0);
  const std::vector<double> p{1.0, 2.0, 4.0};
  const auto lin = detector_output(p, 3.0, 1.0);
  CHECK(lin[1] == doctest::Approx(2.0 * lin[0]));
  CHECK(lin[2] == doctest::Approx(2.0 * lin[1]));
  const auto sq = detector_output(p, 1.0, 2.0);
  CHECK(sq[2] == doctest::Approx(16.0));
}

TEST_CASE("SNR slope against power is 2 for gamma 1") {
  // Regress estimated SNR on transmit power; noise fixed.
  CouplingModel m;
  m.resonances = {{868e6, 50e6, 1.0}};
  m.noise_sigma = 4.0;
  std::vector<double> xs, ys;
  for (double p : {30.0, 33.0, 36.0, 39.0}) {
    auto dut = quiet_dut(m, 5);
    dut.configure(0, PathConfig{}, AdcConfig{});
    dut.apply_stimulus(carrier(868e6, p, false));
    const auto off = stats::to_double(dut.capture(200).samples);
    dut.apply_stimulus(carrier(868e6, p, true));
    const auto on = stats::to_double(dut.capture(200).samples);
    const double d = stats::mean(on) - stats::mean(off);
    xs.push_back(p);
    ys.push_back(10.0 * std::log10(d * d / stats::variance(off)));
  }
  const double mx = stats::mean(xs), my = stats::mean(ys);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  CHECK(sxy / sxx == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("one-pole step response") {
  const double fs = 100e3, bw = 500.0;
  const std::vector<double> step(2000, 1.0);
  const auto y = apply_bandwidth(step, bw, fs);
  std::size_t i63 = 0;
  while (y[i63] < 1.0 - std::exp(-1.0)) ++i63;
  const double t63 = static_cast<double>(i63 + 1) / fs;
  CHECK(std::abs(t63 - 1.0 / (2.0 * std::numbers::pi * bw)) <= 1.0 / fs);
  CHECK(y.back() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(apply_bandwidth(step, 0.0, fs), std::invalid_argument);
}

TEST_CASE("impairments") {
  Rng rng(3);
  const std::vector<double> x(1000, 7.0);
  CHECK(add_impairments(x, 1e3, CouplingModel{}, rng) == x);

  CouplingModel noisy;
  noisy.noise_sigma = 6.0;
  const auto n = add_impairments(std::vector<double>(100'000, 0.0), 1e4, noisy, rng);
  CHECK(std::abs(sample_std(n) - 6.0) <= 0.02 * 6.0);
  CHECK(std::abs(stats::mean(n)) < 0.1);

  SUBCASE("burst arrivals are Poisson") {
    CouplingModel b;
    b.burst = {5.0, 1.0, 1e-3};
    const double fs = 1e4, duration = 4.0;
    std::vector<double> counts;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      Rng r(seed);
      ImpairmentState st;
      std::vector<double> env(static_cast<std::size_t>(fs * duration), 0.0);
      add_impairments(env, fs, b, r, st);
      counts.push_back(static_cast<double>(st.bursts_started));
    }
    const double lambda = 5.0 * duration;
    // Mean of 100 Poisson(20) counts: standard error sqrt(20 / 100).
    CHECK(std::abs(stats::mean(counts) - lambda) <= 3.0 * std::sqrt(lambda / 100.0));
    CHECK(stats::variance(counts) == doctest::Approx(lambda).epsilon(0.4));
  }
}

TEST_CASE("adc sampling") {
  AdcConfig adc;
  adc.samples_per_block = 16;
  CHECK(adc_sample(std::vector<double>(16, 2048.0), adc) == std::vector<int>(16, 2048));
  CHECK(adc_sample(std::vector<double>(16, 1e6), adc) == std::vector<int>(16, 4095));
  CHECK(adc_sample(std::vector<double>(16, -50.0), adc) == std::vector<int>(16, 0));
  CHECK_THROWS_AS(adc_sample(std::vector<double>(15, 0.0), adc), std::invalid_argument);

  adc.oversampling_ratio = 4;
  const std::vector<double> raw{1, 2, 3, 4, 10, 10, 10, 11};
  adc.samples_per_block = 2;
  CHECK(adc_sample(raw, adc) == std::vector<int>{2, 10});  // 2.5 rounds to even, 10.25 to 10

  SUBCASE("oversampling by 4 halves the noise") {
    Rng rng(8);
    CouplingModel m;
    m.noise_sigma = 8.0;
    std::vector<double> base(4 * 20'000, 2048.0);
    const auto noisy = add_impairments(base, 1e4, m, rng);
    AdcConfig a1;
    a1.samples_per_block = 20'000;
    AdcConfig a4 = a1;
    a4.oversampling_ratio = 4;
    const auto s1 = sample_std(stats::to_double(adc_sample(noisy, a1)));
    const auto s4 = sample_std(stats::to_double(adc_sample(noisy, a4)));
    CHECK(s1 / s4 == doctest::Approx(2.0).epsilon(0.05));
  }
}

TEST_CASE("simulated capture") {
  CouplingModel m;
  m.resonances = {{868e6, 50e6, 20.0}};
  m.noise_sigma = 3.0;
  auto dut = quiet_dut(m, 11);
  AdcConfig adc;
  dut.configure(0, PathConfig{}, adc);

  dut.apply_stimulus(carrier(868e6, 31.2, false));
  const auto off = stats::to_double(dut.capture(100).samples);
  CHECK(off.size() == 3200);
  CHECK(std::abs(stats::mean(off) - 2048.0) < 3.0 * 3.0 / std::sqrt(3200.0) + 0.5);
  CHECK(sample_std(off) == doctest::Approx(3.0).epsilon(0.1));

  dut.apply_stimulus(carrier(868e6, 31.2, true));  // ~0 dBm incident, shift ~20 codes
  const auto on = stats::to_double(dut.capture(100).samples);
  CHECK(stats::mean(on) - stats::mean(off) > 10.0 * 3.0 * 0.5);
  CHECK(stats::mean(on) - stats::mean(off) == doctest::Approx(20.0).epsilon(0.05));

  dut.apply_stimulus(carrier(868e6, 31.2, false));
  const auto back = stats::to_double(dut.capture(100).samples);
  CHECK(std::abs(stats::mean(back) - 2048.0) < 0.5);
}

TEST_CASE("absent cells see no RF") {
  CouplingModel m;
  m.resonances = {{868e6, 50e6, 1000.0}};
  SimulatedDut dut(DutDescriptor{}, m, LinkGeometry{}, 2);
  CHECK(dut.model(0, PathConfig{}).resonances.empty());
  const auto t = simulate_capture(dut, 0, PathConfig{}, carrier(868e6, 40.0, true), 4);
  for (int c : t.samples) CHECK(c == 2048);
}

TEST_CASE("same seed, same commands, same bytes") {
  CouplingModel m;
  m.resonances = {{600e6, 80e6, 5.0}};
  m.noise_sigma = 2.0;
  m.drift = {0.01, 1.0, 0.3};
  m.burst = {20.0, -15.0, 2e-3};
  m.baseband_bandwidth_hz = 2000.0;
  auto run = [&] {
    auto dut = quiet_dut(m, 99);
    std::vector<int> all;
    for (bool on : {false, true, false, true}) {
      auto t = simulate_capture(dut, 0, PathConfig{}, carrier(620e6, 30.0, on), 7);
      all.insert(all.end(), t.samples.begin(), t.samples.end());
    }
    return all;
  };
  CHECK(run() == run());
}

TEST_CASE("model validation") {
  CouplingModel m;
  m.gamma = 0.0;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  m.gamma = 1.0;
  m.noise_sigma = -1.0;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  m.noise_sigma = 0.0;
  m.resonances = {{868e6, 0.0, 1.0}};
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
}
