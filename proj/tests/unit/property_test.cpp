// Randomized invariants, driven by mt19937_64 with fixed seeds.

#include <doctest.h>

#include <cmath>
#include <random>

#include "airgap/receiver.hpp"
#include "airgap/sensitivity_sweep.hpp"
#include "airgap/stats.hpp"

using namespace airgap;

namespace {

double uniform(std::mt19937_64& g, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); }

std::size_t longest_run(const BitSequence& b) {
  std::size_t best = 0, run = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    run = i > 0 && b.bits[i] == b.bits[i - 1] ? run + 1 : 1;
    best = std::max(best, run);
  }
  return best;
}

// A random payload whose runs stay shorter than the DC window.
BitSequence payload(std::mt19937_64& g, std::size_t n) {
  for (;;) {
    auto b = generate_bits(n, g());
    if (longest_run(b) < 10) return b;
  }
}

}  // namespace

TEST_CASE("fspl laws") {
  std::mt19937_64 g(1);
  for (int i = 0; i < 1000; ++i) {
    const double d = uniform(g, 0.01, 1000.0), f = uniform(g, 1e6, 6e9), k = uniform(g, 0.01, 100.0);
    CHECK(fspl_db(k * d, f) - fspl_db(d, f) == doctest::Approx(20.0 * std::log10(k)).epsilon(1e-9));
    CHECK(fspl_db(d * 1.001, f) > fspl_db(d, f));
    CHECK(fspl_db(d, f * 1.001) > fspl_db(d, f));
  }
}

TEST_CASE("dBm and mW round trip") {
  std::mt19937_64 g(2);
  for (int i = 0; i < 1000; ++i) {
    const double mw = std::exp(uniform(g, -30.0, 30.0));
    CHECK(dbm_to_mw(mw_to_dbm(mw)) == doctest::Approx(mw).epsilon(1e-9));
  }
}

TEST_CASE("noiseless OOK round trip") {
  std::mt19937_64 g(3);
  for (int i = 0; i < 40; ++i) {
    const auto sps = static_cast<std::size_t>(2 + g() % 30);
    const auto bits = payload(g, 300);
    const auto env = modulate_ook(bits, sps, uniform(g, 1e-3, 1e3));
    DemodParams p;
    p.samples_per_symbol = sps;
    CHECK(demodulate(env.values, p) == bits);
  }
}

TEST_CASE("demodulate ignores gain and offset") {
  std::mt19937_64 g(4);
  Rng noise(5);
  for (int i = 0; i < 30; ++i) {
    const std::size_t sps = 10;
    const auto bits = generate_bits(500, g());
    auto x = modulate_ook(bits, sps, 1.0).values;
    for (auto& v : x) v += 0.3 * noise.normal();
    DemodParams p;
    p.samples_per_symbol = sps;
    const auto ref = demodulate(x, p);
    const double a = std::exp(uniform(g, -5.0, 5.0)), b = uniform(g, -1e3, 1e3);
    auto y = x;
    for (auto& v : y) v = a * v + b;
    CHECK(demodulate(y, p) == ref);
  }
}

TEST_CASE("timing offsets within 0.45 symbol decode cleanly") {
  std::mt19937_64 g(6);
  const std::size_t sps = 40;
  for (int k = -18; k <= 18; k += 2) {
    const auto bits = payload(g, 402);
    std::vector<double> x(400 * sps);
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] = bits.bits[static_cast<std::size_t>(static_cast<long>(i) + k + static_cast<long>(sps)) / sps];
    BitSequence ref;
    ref.bits.assign(bits.bits.begin() + 1, bits.bits.begin() + 401);
    DemodParams p;
    p.samples_per_symbol = sps;
    CHECK(ber(demodulate(x, p), ref).error_count == 0);
  }
}

TEST_CASE("ber is symmetric and zero only for equal inputs") {
  std::mt19937_64 g(7);
  for (int i = 0; i < 200; ++i) {
    const auto n = static_cast<std::size_t>(1 + g() % 200);
    const auto a = generate_bits(n, g()), b = generate_bits(n, g());
    const auto ab = ber(a, b), ba = ber(b, a);
    CHECK(ab.error_positions == ba.error_positions);
    CHECK(ab.ber == ba.ber);
    CHECK((ab.error_count == 0) == (a == b));
    CHECK(ber(a, a).error_count == 0);
  }
}

TEST_CASE("snr is invariant under affine maps of the samples") {
  std::mt19937_64 g(8);
  std::normal_distribution<double> z;
  for (int i = 0; i < 100; ++i) {
    std::vector<int> off(32 * 8), on(32 * 8);
    for (auto& c : off) c = static_cast<int>(std::lround(2048.0 + 6.0 * z(g)));
    for (auto& c : on) c = static_cast<int>(std::lround(2055.0 + 6.0 * z(g)));
    const int a = static_cast<int>(g() % 9) + 1, b = static_cast<int>(g() % 2000) - 1000;
    auto off2 = off, on2 = on;
    for (auto& c : off2) c = a * c + b;
    for (auto& c : on2) c = a * c + b;
    const auto s1 = estimate_snr(block_mean(on, 32), block_mean(off, 32));
    const auto s2 = estimate_snr(block_mean(on2, 32), block_mean(off2, 32));
    CHECK(s1.db() == doctest::Approx(s2.db()).epsilon(1e-9));
  }
}

TEST_CASE("raising the threshold never adds sensitive cells") {
  std::mt19937_64 g(9);
  for (int i = 0; i < 200; ++i) {
    SnrSpectrum s;
    for (int k = 0; k < 20; ++k) {
      const auto r = g() % 20;
      s.points.push_back({1e8 * k, r == 0   ? SnrEstimate::high()
                                   : r == 1 ? SnrEstimate::no_response()
                                            : SnrEstimate::finite(uniform(g, -20.0, 40.0))});
    }
    double t = -30.0;
    bool prev = classify_sensitive(s, t);
    for (t = -30.0; t <= 60.0; t += 0.5) {
      const bool now = classify_sensitive(s, t);
      CHECK((prev || !now));
      prev = now;
    }
  }
}

TEST_CASE("codes stay in range and the off state sits at the operating point") {
  std::mt19937_64 g(10);
  for (int i = 0; i < 30; ++i) {
    CouplingModel m;
    m.resonances = {{uniform(g, 2e8, 1e9), uniform(g, 1e6, 2e8), uniform(g, 0.0, 1e6)}};
    m.noise_sigma = uniform(g, 0.0, 800.0);
    m.drift = {uniform(g, 0.0, 5.0), uniform(g, 0.0, 500.0), 0.1};
    m.burst = {uniform(g, 0.0, 50.0), uniform(g, -3000.0, 3000.0), 1e-3};
    m.dc_operating_point = uniform(g, -500.0, 5000.0);
    AdcConfig adc;
    adc.resolution_bits = 6 + static_cast<int>(g() % 11);
    adc.oversampling_ratio = 1 << (g() % 5);
    SimulatedDut dut(DutDescriptor{}, m, LinkGeometry{}, g());
    dut.set_model(0, PathConfig{}, m);
    dut.configure(0, PathConfig{}, adc);
    RfStimulus s;
    s.freq_hz = m.resonances[0].center_hz;
    s.power_dbm = uniform(g, -40.0, 43.0);
    s.enabled = true;
    dut.apply_stimulus(s);
    for (int c : dut.capture(20).samples) {
      REQUIRE(c >= 0);
      REQUIRE(c <= adc.max_code());
    }
  }

  for (int i = 0; i < 10; ++i) {
    CouplingModel m;
    m.noise_sigma = uniform(g, 1.0, 20.0);
    m.dc_operating_point = std::round(uniform(g, 500.0, 3500.0));
    SimulatedDut dut(DutDescriptor{}, m, LinkGeometry{}, g());
    dut.configure(0, PathConfig{}, AdcConfig{});
    const auto x = stats::to_double(dut.capture(1000).samples);
    CHECK(std::abs(stats::mean(x) - m.dc_operating_point) <=
          3.0 * m.noise_sigma / std::sqrt(static_cast<double>(x.size())) + 1e-9);
  }
}

TEST_CASE("ideal-sync BER falls as power rises") {
  // Six incident levels, 1e5 bits each; allow two binomial sigmas of slack.
  DutDescriptor d;
  CouplingModel m;
  m.noise_sigma = 30.0;
  m.resonances = {{868e6, 100e6, 10.0}};
  LinkGeometry link;
  link.g_tx_dbi = 0.0;
  const std::size_t n = 100'000;
  double prev = 1.0;
  for (double incident : {-8.0, -5.0, -2.0, 0.0, 2.0, 4.0}) {
    SimulatedDut dut(d, m, link, 17);
    dut.set_model(0, PathConfig{}, m);
    SimulatorBackend be(dut);
    SimulatedRfSource src(dut);
    IdealSyncSetup s;
    s.n_bits = n;
    s.samples_per_bit = 16;
    s.power_dbm = incident + fspl_db(1.0, s.freq_hz);
    const double b = ideal_sync_ber_experiment(be, src, s).ber;
    const double slack = 2.0 * std::sqrt(std::max(prev, 1.0 / n) * (1.0 - prev) / n);
    CHECK(b <= prev + slack);
    prev = b;
  }
}
