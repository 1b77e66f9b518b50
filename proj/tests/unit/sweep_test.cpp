#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "airgap/sensitivity_sweep.hpp"
#include "airgap/serial_backend.hpp"

using namespace airgap;

namespace {

SnrSpectrum spectrum_of(std::vector<std::pair<double, SnrEstimate>> pts) {
  SnrSpectrum s;
  s.points = std::move(pts);
  return s;
}

// Counts commands and can fail configure for one path.
class FlakyBackend final : public DutBackend {
 public:
  FlakyBackend(SimulatedDut& dut, int bad_path) : inner_(dut), bad_(bad_path) {}
  DutDescriptor descriptor() override { return inner_.descriptor(); }
  void configure(const ReceptionPathId& p, const PathConfig& c, const AdcConfig& a) override {
    if (p.index == bad_) throw BackendError(BackendErrc::Timeout, "simulated timeout");
    inner_.configure(p, c, a);
  }
  AdcTrace capture(std::size_t n) override { return inner_.capture(n); }

 private:
  SimulatorBackend inner_;
  int bad_;
};

}  // namespace

TEST_CASE("block means") {
  CHECK(block_mean(std::vector<int>{1, 1, 3, 3}, 2) == std::vector<double>{1.0, 3.0});
  CHECK(block_mean(std::vector<int>(12, 5), 4) == std::vector<double>(3, 5.0));
  CHECK(block_mean(std::vector<int>(1024, 0), 32).size() == 32);
  CHECK_THROWS_AS(block_mean(std::vector<int>(10, 0), 4), std::invalid_argument);
}

TEST_CASE("snr sentinels") {
  const std::vector<double> c(4, 2048.0);
  CHECK(estimate_snr(c, c).is_no_response());
  const std::vector<double> on(4, 2064.0);
  CHECK(estimate_snr(on, c).is_high());
  CHECK(snr_from(0.0, 3.0).is_no_response());
  CHECK(snr_from(4.0, 1.0).db() == doctest::Approx(10.0 * std::log10(16.0)));
  CHECK_THROWS_AS(estimate_snr(std::vector<double>{}, c), std::invalid_argument);
  CHECK_THROWS_AS(estimate_snr(c, std::vector<double>{}), std::invalid_argument);

  CHECK(SnrEstimate::high().to_string() == "high");
  CHECK(SnrEstimate::no_response().to_string() == "none");
  CHECK(snr_less(SnrEstimate::no_response(), SnrEstimate::finite(-80.0)));
  CHECK(snr_less(SnrEstimate::finite(300.0), SnrEstimate::high()));
  CHECK_FALSE(snr_less(SnrEstimate::high(), SnrEstimate::high()));
}

TEST_CASE("snr Monte Carlo against the closed form") {
  std::mt19937_64 gen(12);
  std::normal_distribution<double> off(2048.0, 4.0), on(2064.0, 4.0);
  std::vector<double> a(10'000), b(10'000);
  for (auto& x : b) x = off(gen);
  for (auto& x : a) x = on(gen);
  CHECK(std::abs(estimate_snr(a, b).db() - 10.0 * std::log10(16.0 * 16.0 / 16.0)) <= 0.5);
}

TEST_CASE("peak and classification") {
  const auto f = SnrEstimate::finite;
  CHECK(peak_snr(spectrum_of({{1e8, f(3.0)}})).first == 1e8);
  CHECK(peak_snr(spectrum_of({{1e8, f(10.0)}, {2e8, SnrEstimate::high()}})).first == 2e8);
  CHECK(peak_snr(spectrum_of({{1e8, f(10.0)}, {2e8, f(10.0)}})).first == 1e8);
  CHECK_THROWS(peak_snr(SnrSpectrum{}));

  CHECK_FALSE(classify_sensitive(spectrum_of({{1e8, SnrEstimate::no_response()}}), 10.0));
  CHECK(classify_sensitive(spectrum_of({{1e8, f(33.0)}}), 10.0));
  CHECK_FALSE(classify_sensitive(spectrum_of({{1e8, f(9.9)}}), 10.0));
  CHECK(classify_sensitive(spectrum_of({{1e8, f(10.0)}}), 10.0));
  CHECK(classify_sensitive(spectrum_of({{1e8, SnrEstimate::high()}}), 1e6));
}

TEST_CASE("configuration lists") {
  const auto all = enumerate_configs();
  CHECK(all.size() == 64);
  CHECK(all.front() == PathConfig{GpioMode::Input, Pupd::None, OutputValue::High, OutputType::PushPull});
  CHECK(all[1].otype == OutputType::OpenDrain);
  CHECK(all.back().to_string() == "ANALOG/RSV/LO/OD");
  CHECK(std::set<PathConfig>(all.begin(), all.end()).size() == 64);

  const auto rec = recommended_configs();
  CHECK(rec.size() == 8);
  CHECK(rec[3] == PathConfig{GpioMode::Analog, Pupd::PullDown, OutputValue::High, OutputType::OpenDrain});
  for (const auto& c : rec) CHECK(std::find(all.begin(), all.end(), c) != all.end());
}

TEST_CASE("plan defaults and validation") {
  const auto f = SweepPlan::default_frequencies();
  CHECK(f.size() == 81);
  CHECK(f.front() == 200e6);
  CHECK(f.back() == doctest::Approx(1000e6));
  CHECK(f[1] - f[0] == doctest::Approx(10e6));

  SweepPlan p;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.paths = {{0, ""}};
  p.configs = {PathConfig{}};
  CHECK_NOTHROW(p.validate());
  p.freqs_hz = {3e8, 2e8};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("sweep cardinality, ordering and quiet cells") {
  DutDescriptor d;
  d.n_paths = 2;
  SimulatedDut dut(d, CouplingModel{}, LinkGeometry{}, 1);
  SimulatorBackend be(dut);
  SimulatedRfSource src(dut);
  SweepPlan p;
  p.paths = {{0, ""}, {1, ""}};
  p.configs = {enumerate_configs()[0], enumerate_configs()[5]};
  p.freqs_hz = {3e8, 4e8, 5e8};
  const auto r = run_sweep(p, be, src);
  REQUIRE(r.records.size() == 12);
  CHECK(r.failed.empty());
  CHECK(r.records[0].path == 0);
  CHECK(r.records[2].freq_hz == 5e8);
  CHECK(r.records[3].config == p.configs[1]);
  for (const auto& rec : r.records) {
    CHECK(rec.snr.is_no_response());
    CHECK(rec.diff == rec.mean_on - rec.mean_off);
  }
  CHECK_FALSE(src.state().enabled);
}

TEST_CASE("planted resonance shows up only in its cell") {
  DutDescriptor d;
  d.n_paths = 4;
  CouplingModel base;
  base.noise_sigma = 3.0;
  SimulatedDut dut(d, base, LinkGeometry{}, 8);
  const auto cfgs = enumerate_configs();
  auto planted = base;
  planted.resonances = {{450e6, 30e6, 40.0}};
  dut.set_model(3, cfgs[5], planted);

  SimulatorBackend be(dut);
  SimulatedRfSource src(dut);
  SweepPlan p;
  for (int i = 0; i < 4; ++i) p.paths.push_back({i, ""});
  p.configs = {cfgs[4], cfgs[5], cfgs[6]};
  p.power_dbm = 10.0;
  p.blocks_per_state = 8;
  const auto r = run_sweep(p, be, src);
  for (const auto& sp : spectra(r.records)) {
    const bool is_planted = sp.path == 3 && sp.config == cfgs[5];
    CHECK(classify_sensitive(sp, kDefaultThresholdDb) == is_planted);
    if (is_planted) CHECK(std::abs(peak_snr(sp).first - 450e6) <= 20e6);
  }
}

TEST_CASE("failed cells are reported, the sweep continues") {
  DutDescriptor d;
  d.n_paths = 3;
  SimulatedDut dut(d, CouplingModel{}, LinkGeometry{}, 1);
  FlakyBackend be(dut, 1);
  SimulatedRfSource src(dut);
  SweepPlan p;
  p.paths = {{0, ""}, {1, ""}, {2, ""}};
  p.configs = recommended_configs();
  p.freqs_hz = {5e8, 6e8};
  std::vector<std::string> log;
  const auto r = run_sweep(p, be, src, [&](const std::string& m) { log.push_back(m); });
  CHECK(r.records.size() == 2 * 8 * 2);
  CHECK(r.failed.size() == 8);
  for (const auto& f : r.failed) CHECK(f.path == 1);
  CHECK(log.size() >= 8);
}

TEST_CASE("pooled variance with one block per state") {
  DutDescriptor d;
  CouplingModel m;
  m.noise_sigma = 4.0;
  SimulatedDut dut(d, m, LinkGeometry{}, 2);
  SimulatorBackend be(dut);
  SimulatedRfSource src(dut);
  SweepPlan p;
  p.paths = {{0, ""}};
  p.configs = {PathConfig{}};
  const auto r = run_sweep(p, be, src);
  // All records share the pooled variance, close to sigma^2 / 32.
  for (const auto& rec : r.records) CHECK(rec.var_off == r.records[0].var_off);
  CHECK(r.records[0].var_off == doctest::Approx(16.0 / 32.0).epsilon(0.35));
}
