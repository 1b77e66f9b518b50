#include "airgap/dut_simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace airgap {

void CouplingModel::validate() const {
  for (const auto& r : resonances) {
    if (!(r.center_hz > 0.0)) throw std::invalid_argument("resonance center must be > 0");
    if (!(r.bandwidth_hz > 0.0)) throw std::invalid_argument("resonance bandwidth must be > 0");
    if (!(r.peak_gain >= 0.0)) throw std::invalid_argument("resonance gain must be >= 0");
  }
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
  if (!(baseband_bandwidth_hz >= 0.0)) throw std::invalid_argument("baseband bandwidth must be >= 0");
  if (!(noise_sigma >= 0.0)) throw std::invalid_argument("noise_sigma must be >= 0");
  if (!(drift.walk_step >= 0.0) || !(drift.sine_amplitude >= 0.0))
    throw std::invalid_argument("drift parameters must be >= 0");
  if (drift.sine_amplitude > 0.0 && !(drift.sine_period_s > 0.0))
    throw std::invalid_argument("drift sine period must be > 0");
  if (!(burst.rate_hz >= 0.0) || !(burst.duration_s >= 0.0))
    throw std::invalid_argument("burst rate and duration must be >= 0");
}

double coupling_gain(const CouplingModel& model, double freq_hz) {
  double g = 0.0;
  for (const auto& r : model.resonances) {
    const double x = (freq_hz - r.center_hz) / r.bandwidth_hz;
    g += r.peak_gain / (1.0 + x * x);
  }
  return g;
}

std::vector<double> detector_output(std::span<const double> incident_power_mw, double gain, double gamma) {
  std::vector<double> out(incident_power_mw.size());
  std::transform(incident_power_mw.begin(), incident_power_mw.end(), out.begin(), [&](double p) {
    return p > 0.0 ? gain * std::pow(p, gamma) : 0.0;
  });
  return out;
}

OnePoleLowPass::OnePoleLowPass(double cutoff_hz, double sample_rate_hz, double initial)
    : alpha_(cutoff_hz > 0.0 ? 1.0 - std::exp(-2.0 * std::numbers::pi * cutoff_hz / sample_rate_hz) : 1.0),
      state_(initial) {}

std::vector<double> apply_bandwidth(std::span<const double> envelope, double bandwidth_hz, double sample_rate_hz) {
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("bandwidth must be > 0");
  if (!(sample_rate_hz > 0.0)) throw std::invalid_argument("sample rate must be > 0");
  OnePoleLowPass lp(bandwidth_hz, sample_rate_hz);
  std::vector<double> out(envelope.size());
  std::transform(envelope.begin(), envelope.end(), out.begin(), [&](double x) { return lp.step(x); });
  return out;
}

void add_impairments(std::vector<double>& envelope, double sample_rate_hz, const CouplingModel& model, Rng& rng,
                     ImpairmentState& state) {
  const double dt = 1.0 / sample_rate_hz;
  const double t0 = state.time_s;
  const bool noise = model.noise_sigma > 0.0;
  const bool walk = model.drift.walk_step > 0.0;
  const bool sine = model.drift.sine_amplitude > 0.0;
  const bool bursts = model.burst.rate_hz > 0.0 && model.burst.duration_s > 0.0;
  if (bursts && state.next_burst_s < 0.0) state.next_burst_s = t0 + rng.exponential(model.burst.rate_hz);

  for (std::size_t i = 0; i < envelope.size(); ++i) {
    const double t = t0 + static_cast<double>(i) * dt;
    double v = envelope[i];
    if (noise) v += model.noise_sigma * rng.normal();
    if (walk) {
      state.walk += model.drift.walk_step * rng.normal();
      v += state.walk;
    }
    if (sine) v += model.drift.sine_amplitude * std::sin(2.0 * std::numbers::pi * t / model.drift.sine_period_s);
    if (bursts) {
      while (t >= state.next_burst_s) {
        state.burst_ends.push_back(state.next_burst_s + model.burst.duration_s);
        ++state.bursts_started;
        state.next_burst_s += rng.exponential(model.burst.rate_hz);
      }
      while (!state.burst_ends.empty() && state.burst_ends.front() <= t) state.burst_ends.pop_front();
      v += model.burst.amplitude * static_cast<double>(state.burst_ends.size());
    }
    envelope[i] = v;
  }
  state.time_s = t0 + static_cast<double>(envelope.size()) * dt;
}

std::vector<double> add_impairments(std::span<const double> envelope, double sample_rate_hz,
                                    const CouplingModel& model, Rng& rng) {
  std::vector<double> out(envelope.begin(), envelope.end());
  ImpairmentState state;
  add_impairments(out, sample_rate_hz, model, rng, state);
  return out;
}

std::vector<int> adc_sample(std::span<const double> analog, const AdcConfig& adc, std::size_t n_blocks) {
  const std::size_t n_out = n_blocks * adc.samples_per_block;
  const auto ratio = static_cast<std::size_t>(adc.oversampling_ratio);
  if (analog.size() < n_out * ratio) throw std::invalid_argument("insufficient envelope length for ADC capture");

  const double max_code = adc.max_code();
  std::vector<int> codes(n_out);
  for (std::size_t k = 0; k < n_out; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j < ratio; ++j)
      acc += std::clamp(std::nearbyint(analog[k * ratio + j]), 0.0, max_code);
    codes[k] = static_cast<int>(std::clamp(std::nearbyint(acc / static_cast<double>(ratio)), 0.0, max_code));
  }
  return codes;
}

SimulatedDut::SimulatedDut(DutDescriptor descriptor, CouplingModel baseline, LinkGeometry link, std::uint64_t seed)
    : descriptor_(std::move(descriptor)),
      baseline_(std::move(baseline)),
      link_(link),
      seed_(seed),
      rng_(seed),
      active_(baseline_) {
  baseline_.validate();
}

void SimulatedDut::set_model(int path, const PathConfig& cfg, CouplingModel model) {
  model.validate();
  cells_[{path, cfg.index()}] = std::move(model);
}

CouplingModel SimulatedDut::model(int path, const PathConfig& cfg) const {
  if (auto it = cells_.find({path, cfg.index()}); it != cells_.end()) return it->second;
  CouplingModel m = baseline_;
  m.resonances.clear();
  return m;
}

void SimulatedDut::configure(int path, const PathConfig& cfg, const AdcConfig& adc) {
  path_ = path;
  cfg_ = cfg;
  adc_ = adc;
  active_ = model(path, cfg);
  configured_ = true;
  filter_state_ = 0.0;
  const double now = impairments_.time_s;
  impairments_ = ImpairmentState{};
  impairments_.time_s = now;
}

void SimulatedDut::apply_stimulus(const RfStimulus& stimulus) {
  stimulus_ = stimulus;
  stimulus_start_s_ = impairments_.time_s;
}

double SimulatedDut::incident_power_mw(const RfStimulus& stimulus) const {
  if (!stimulus.enabled) return 0.0;
  const LinkBudget budget{stimulus.power_dbm, link_.g_tx_dbi, link_.g_rx_dbi, link_.distance_m, stimulus.freq_hz};
  return dbm_to_mw(incident_power_dbm(budget) - link_.shielding_db);
}

AdcTrace SimulatedDut::capture(std::size_t n_blocks) {
  const auto ratio = static_cast<std::size_t>(adc_.oversampling_ratio);
  const std::size_t n_raw = n_blocks * adc_.samples_per_block * ratio;
  const double fs = static_cast<double>(adc_.sample_rate_hz) * static_cast<double>(ratio);

  // Incident power over time; the envelope is indexed relative to the moment
  // the stimulus was applied and is silent once exhausted.
  const double p_mw = incident_power_mw(stimulus_);
  std::vector<double> power(n_raw, p_mw);
  if (p_mw > 0.0 && stimulus_.envelope) {
    const auto& env = *stimulus_.envelope;
    const double t_rel0 = impairments_.time_s - stimulus_start_s_;
    for (std::size_t i = 0; i < n_raw; ++i) {
      const double t_rel = t_rel0 + static_cast<double>(i) / fs;
      const double pos = std::floor(t_rel * env.sample_rate + 1e-9);
      const double m = pos >= 0.0 && pos < static_cast<double>(env.values.size())
                           ? env.values[static_cast<std::size_t>(pos)]
                           : 0.0;
      power[i] = p_mw * m * m;
    }
  }

  auto analog = detector_output(power, coupling_gain(active_, stimulus_.freq_hz), active_.gamma);
  if (active_.baseband_bandwidth_hz > 0.0) {
    OnePoleLowPass lp(active_.baseband_bandwidth_hz, fs, filter_state_);
    for (auto& v : analog) v = lp.step(v);
    filter_state_ = lp.state();
  } else if (!analog.empty()) {
    filter_state_ = analog.back();
  }
  add_impairments(analog, fs, active_, rng_, impairments_);
  for (auto& v : analog) v += active_.dc_operating_point;

  AdcTrace trace;
  trace.samples = adc_sample(analog, adc_, n_blocks);
  trace.config = adc_;
  trace.meta = TraceMeta{path_, cfg_, stimulus_, seed_};
  return trace;
}

AdcTrace simulate_capture(SimulatedDut& dut, int path, const PathConfig& cfg, const RfStimulus& stimulus,
                          std::size_t n_blocks) {
  dut.configure(path, cfg, dut.adc());
  dut.apply_stimulus(stimulus);
  return dut.capture(n_blocks);
}

}  // namespace airgap
