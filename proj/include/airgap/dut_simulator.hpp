#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "airgap/rng.hpp"
#include "airgap/types.hpp"

// Parametric model of a radio-less device that nevertheless responds to RF:
//
//   incident power -> frequency-selective coupling -> rectifying detector
//     -> baseband low-pass -> noise, drift, self-interference bursts -> ADC
//
// Every stage is available as a free function so it can be tested on its
// own; SimulatedDut strings them together with persistent state (filter
// memory, drift, burst schedule, time) so consecutive captures are continuous.

namespace airgap {

struct Resonance {
  double center_hz = 0.0;
  double bandwidth_hz = 1.0;  // half-width at half-maximum of the Lorentzian
  double peak_gain = 0.0;     // ADC codes per mW^gamma at the center
};

struct DriftParams {
  double walk_step = 0.0;       // codes per sqrt(raw conversion)
  double sine_amplitude = 0.0;  // codes
  double sine_period_s = 1.0;
};

struct BurstParams {
  double rate_hz = 0.0;     // Poisson arrivals per second
  double amplitude = 0.0;   // codes, signed
  double duration_s = 0.0;
};

struct CouplingModel {
  std::vector<Resonance> resonances;
  double gamma = 1.0;
  double baseband_bandwidth_hz = 0.0;  // 0 disables the low-pass
  double noise_sigma = 0.0;            // codes, per raw conversion
  DriftParams drift;
  BurstParams burst;
  double dc_operating_point = 2048.0;

  void validate() const;
};

/// Sum of Lorentzian responses 1 / (1 + ((f - f0) / bw)^2) scaled by peak gain.
double coupling_gain(const CouplingModel& model, double freq_hz);

/// offset = gain * power^gamma, element-wise.
std::vector<double> detector_output(std::span<const double> incident_power_mw, double gain, double gamma);

/// Exact discretization of a single-pole RC low-pass.
class OnePoleLowPass {
 public:
  OnePoleLowPass(double cutoff_hz, double sample_rate_hz, double initial = 0.0);
  double step(double x) {
    state_ += alpha_ * (x - state_);
    return state_;
  }
  double state() const { return state_; }

 private:
  double alpha_;
  double state_;
};

std::vector<double> apply_bandwidth(std::span<const double> envelope, double bandwidth_hz, double sample_rate_hz);

struct ImpairmentState {
  double time_s = 0.0;
  double walk = 0.0;
  double next_burst_s = -1.0;  // negative: not yet scheduled
  std::deque<double> burst_ends;
  std::size_t bursts_started = 0;
};

/// Adds white noise, random-walk plus sinusoidal drift and Poisson offset
/// bursts in place. `state` carries time and drift across calls.
void add_impairments(std::vector<double>& envelope, double sample_rate_hz, const CouplingModel& model, Rng& rng,
                     ImpairmentState& state);

/// Stateless convenience form starting at t = 0.
std::vector<double> add_impairments(std::span<const double> envelope, double sample_rate_hz,
                                    const CouplingModel& model, Rng& rng);

/// Hardware-style oversampling: each output code is the rounded mean of
/// `oversampling_ratio` clamped, rounded raw conversions. `analog` is in codes
/// at the raw conversion rate. Throws std::invalid_argument when too short.
std::vector<int> adc_sample(std::span<const double> analog, const AdcConfig& adc, std::size_t n_blocks = 1);

struct LinkGeometry {
  double g_tx_dbi = 6.5;
  double g_rx_dbi = 0.0;
  double distance_m = 1.0;
  double shielding_db = 0.0;  // scalar attenuation on incident power
};

class SimulatedDut {
 public:
  SimulatedDut(DutDescriptor descriptor, CouplingModel baseline, LinkGeometry link, std::uint64_t seed);

  const DutDescriptor& descriptor() const { return descriptor_; }
  const LinkGeometry& link() const { return link_; }
  void set_link(const LinkGeometry& link) { link_ = link; }
  std::uint64_t seed() const { return seed_; }

  void set_model(int path, const PathConfig& cfg, CouplingModel model);
  /// The cell's model, or the baseline with its resonances removed when the
  /// cell was never given one.
  CouplingModel model(int path, const PathConfig& cfg) const;

  void configure(int path, const PathConfig& cfg, const AdcConfig& adc);
  void set_adc(const AdcConfig& adc) { adc_ = adc; }
  const AdcConfig& adc() const { return adc_; }
  bool configured() const { return configured_; }

  void apply_stimulus(const RfStimulus& stimulus);
  const RfStimulus& stimulus() const { return stimulus_; }

  double incident_power_mw(const RfStimulus& stimulus) const;

  AdcTrace capture(std::size_t n_blocks);

  double time_s() const { return impairments_.time_s; }

 private:
  DutDescriptor descriptor_;
  CouplingModel baseline_;
  LinkGeometry link_;
  std::uint64_t seed_;
  Rng rng_;
  std::map<std::pair<int, int>, CouplingModel> cells_;

  bool configured_ = false;
  int path_ = 0;
  PathConfig cfg_;
  CouplingModel active_;
  AdcConfig adc_;
  RfStimulus stimulus_;
  double stimulus_start_s_ = 0.0;
  double filter_state_ = 0.0;
  ImpairmentState impairments_;
};

/// Configure, apply the stimulus and capture in one call.
AdcTrace simulate_capture(SimulatedDut& dut, int path, const PathConfig& cfg, const RfStimulus& stimulus,
                          std::size_t n_blocks);

}  // namespace airgap
