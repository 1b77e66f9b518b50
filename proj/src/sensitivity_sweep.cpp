#include "airgap/sensitivity_sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

#include "airgap/protocol.hpp"
#include "airgap/stats.hpp"

namespace airgap {

std::string SnrEstimate::to_string() const {
  switch (kind_) {
    case Kind::High:
      return "high";
    case Kind::NoResponse:
      return "none";
    case Kind::Finite:
      break;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f dB", db_);
  return buf;
}

bool snr_less(const SnrEstimate& a, const SnrEstimate& b) {
  if (a.kind() != b.kind()) return static_cast<int>(a.kind()) < static_cast<int>(b.kind());
  return a.is_finite() && a.db() < b.db();
}

std::vector<double> SweepPlan::default_frequencies() {
  std::vector<double> f(81);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = 200e6 + 10e6 * static_cast<double>(i);
  return f;
}

void SweepPlan::validate() const {
  if (paths.empty()) throw std::invalid_argument("plan has no paths");
  if (configs.empty()) throw std::invalid_argument("plan has no configurations");
  if (freqs_hz.empty()) throw std::invalid_argument("plan has no frequencies");
  for (std::size_t i = 0; i < freqs_hz.size(); ++i) {
    if (!std::isfinite(freqs_hz[i]) || freqs_hz[i] <= 0.0) throw std::invalid_argument("bad frequency");
    if (i > 0 && freqs_hz[i] <= freqs_hz[i - 1])
      throw std::invalid_argument("frequencies must be strictly increasing");
  }
  if (blocks_per_state == 0) throw std::invalid_argument("blocks_per_state must be >= 1");
  if (!std::isfinite(power_dbm)) throw std::invalid_argument("bad power");
  adc.validate();
}

std::vector<double> block_mean(std::span<const int> samples, std::size_t block_len) {
  if (block_len == 0 || samples.size() % block_len != 0)
    throw std::invalid_argument("trace length " + std::to_string(samples.size()) +
                                " not divisible by block length " + std::to_string(block_len));
  std::vector<double> means;
  means.reserve(samples.size() / block_len);
  for (std::size_t b = 0; b < samples.size(); b += block_len) {
    double sum = 0.0;
    for (std::size_t i = b; i < b + block_len; ++i) sum += samples[i];
    means.push_back(sum / static_cast<double>(block_len));
  }
  return means;
}

std::vector<double> block_mean(const AdcTrace& trace, std::size_t block_len) {
  return block_mean(std::span<const int>(trace.samples), block_len);
}

SnrEstimate snr_from(double diff, double variance) {
  if (variance > 0.0) {
    if (diff == 0.0) return SnrEstimate::no_response();
    return SnrEstimate::finite(10.0 * std::log10(diff * diff / variance));
  }
  return diff != 0.0 ? SnrEstimate::high() : SnrEstimate::no_response();
}

SnrEstimate estimate_snr(std::span<const double> on_means, std::span<const double> off_means) {
  if (on_means.empty() || off_means.empty()) throw std::invalid_argument("empty block means");
  return snr_from(stats::mean(on_means) - stats::mean(off_means), stats::variance(off_means));
}

namespace {

struct FreqBlocks {
  std::vector<double> on;
  std::vector<double> off;
};

std::vector<double> capture_state(DutBackend& backend, RfSource& source, const SweepPlan& plan, double freq_hz,
                                  bool enabled) {
  RfStimulus s;
  s.freq_hz = freq_hz;
  s.power_dbm = plan.power_dbm;
  s.enabled = enabled;
  source.set(s);
  const auto block = plan.adc.samples_per_block;
  const auto trace = backend.capture(plan.settle_blocks + plan.blocks_per_state);
  auto means = block_mean(trace, block);
  means.erase(means.begin(), means.begin() + static_cast<std::ptrdiff_t>(plan.settle_blocks));
  return means;
}

// Pooled off-state variance of one cell: with one block per state the off
// means of all frequencies form the sample, otherwise the per-frequency
// variances are averaged.
double pooled_variance(const std::vector<FreqBlocks>& blocks) {
  if (blocks.front().off.size() == 1) {
    std::vector<double> all;
    all.reserve(blocks.size());
    for (const auto& b : blocks) all.push_back(b.off.front());
    return stats::variance(all);
  }
  double sum = 0.0;
  for (const auto& b : blocks) sum += stats::variance(b.off);
  return sum / static_cast<double>(blocks.size());
}

}  // namespace

SweepResult run_sweep(const SweepPlan& plan, DutBackend& backend, RfSource& rf_source, const SweepLog& log) {
  plan.validate();
  SweepResult result;
  result.records.reserve(plan.paths.size() * plan.configs.size() * plan.freqs_hz.size());
  std::vector<FreqBlocks> blocks(plan.freqs_hz.size());

  for (const auto& path : plan.paths) {
    for (const auto& cfg : plan.configs) {
      try {
        backend.configure(path, cfg, plan.adc);
        for (std::size_t k = 0; k < plan.freqs_hz.size(); ++k) {
          blocks[k].off = capture_state(backend, rf_source, plan, plan.freqs_hz[k], false);
          blocks[k].on = capture_state(backend, rf_source, plan, plan.freqs_hz[k], true);
        }
        RfStimulus off;
        off.freq_hz = plan.freqs_hz.back();
        off.power_dbm = plan.power_dbm;
        rf_source.set(off);
      } catch (const BackendError& e) {
        result.failed.push_back({path.index, cfg, e.what()});
        if (log) log("cell " + std::to_string(path.index) + " " + cfg.to_string() + " failed: " + e.what());
        continue;
      } catch (const protocol::ProtocolError& e) {
        result.failed.push_back({path.index, cfg, e.what()});
        if (log) log("cell " + std::to_string(path.index) + " " + cfg.to_string() + " failed: " + e.what());
        continue;
      }

      const double v = pooled_variance(blocks);
      for (std::size_t k = 0; k < plan.freqs_hz.size(); ++k) {
        SensitivityRecord r;
        r.path = path.index;
        r.config = cfg;
        r.freq_hz = plan.freqs_hz[k];
        r.mean_on = stats::mean(blocks[k].on);
        r.mean_off = stats::mean(blocks[k].off);
        r.diff = r.mean_on - r.mean_off;
        r.var_off = v;
        r.snr = snr_from(r.diff, v);
        result.records.push_back(r);
      }
    }
  }
  return result;
}

std::vector<SnrSpectrum> spectra(std::span<const SensitivityRecord> records) {
  std::vector<SnrSpectrum> out;
  std::map<std::pair<int, int>, std::size_t> slot;
  for (const auto& r : records) {
    const auto key = std::make_pair(r.path, r.config.index());
    auto [it, inserted] = slot.try_emplace(key, out.size());
    if (inserted) out.push_back({r.path, r.config, {}});
    out[it->second].points.emplace_back(r.freq_hz, r.snr);
  }
  return out;
}

std::pair<double, SnrEstimate> peak_snr(const SnrSpectrum& spectrum) {
  if (spectrum.points.empty()) throw std::invalid_argument("empty spectrum");
  auto best = spectrum.points.front();
  for (const auto& p : spectrum.points) {
    if (snr_less(best.second, p.second) || (!snr_less(p.second, best.second) && p.first < best.first)) best = p;
  }
  return best;
}

bool classify_sensitive(const SnrSpectrum& spectrum, double threshold_db) {
  if (spectrum.points.empty()) return false;
  const auto snr = peak_snr(spectrum).second;
  return snr.is_high() || (snr.is_finite() && snr.db() >= threshold_db);
}

std::vector<PathConfig> enumerate_configs() {
  std::vector<PathConfig> out;
  out.reserve(kNumPathConfigs);
  for (int i = 0; i < kNumPathConfigs; ++i) out.push_back(PathConfig::from_index(i));
  return out;
}

std::vector<PathConfig> recommended_configs() {
  constexpr GpioMode modes[] = {GpioMode::Input, GpioMode::Output, GpioMode::AlternateFunction, GpioMode::Analog};
  std::vector<PathConfig> out;
  for (auto [pupd, value] : {std::pair{Pupd::PullDown, OutputValue::High}, std::pair{Pupd::PullUp, OutputValue::Low}})
    for (auto mode : modes) out.push_back({mode, pupd, value, OutputType::OpenDrain});
  return out;
}

}  // namespace airgap
