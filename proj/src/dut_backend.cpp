#include "airgap/dut_backend.hpp"

#include <algorithm>
#include <cmath>

namespace airgap {

void check_adc_capabilities(const DutDescriptor& d, const AdcConfig& adc) {
  if (!is_supported_oversampling(adc.oversampling_ratio) ||
      std::find(d.oversampling_ratios.begin(), d.oversampling_ratios.end(), adc.oversampling_ratio) ==
          d.oversampling_ratios.end())
    throw BackendError(BackendErrc::Unsupported,
                       "unsupported oversampling ratio " + std::to_string(adc.oversampling_ratio));
  if (adc.resolution_bits != d.resolution_bits)
    throw BackendError(BackendErrc::Unsupported, "unsupported resolution " + std::to_string(adc.resolution_bits));
  if (adc.sample_rate_hz == 0 || adc.sample_rate_hz > d.max_sample_rate_hz)
    throw BackendError(BackendErrc::Unsupported, "unsupported sample rate " + std::to_string(adc.sample_rate_hz));
  if (adc.samples_per_block == 0) throw BackendError(BackendErrc::Unsupported, "unsupported block size 0");
}

void SimulatorBackend::configure(const ReceptionPathId& path, const PathConfig& cfg, const AdcConfig& adc) {
  if (path.index < 0 || path.index >= dut_.descriptor().n_paths)
    throw BackendError(BackendErrc::UnknownPath, "unknown path " + std::to_string(path.index));
  check_adc_capabilities(dut_.descriptor(), adc);
  dut_.configure(path.index, cfg, adc);
}

AdcTrace SimulatorBackend::capture(std::size_t n_blocks) {
  if (!dut_.configured()) throw BackendError(BackendErrc::NotConfigured, "capture before configure");
  return dut_.capture(n_blocks);
}

void SimulatedRfSource::set(const RfStimulus& stimulus) {
  if (!std::isfinite(stimulus.power_dbm) || !std::isfinite(stimulus.freq_hz))
    throw BackendError(BackendErrc::OutOfRange, "non-finite stimulus");
  if (stimulus.power_dbm < limits_.min_power_dbm || stimulus.power_dbm > limits_.max_power_dbm)
    throw BackendError(BackendErrc::OutOfRange, "power out of range");
  if (stimulus.freq_hz < limits_.min_freq_hz || stimulus.freq_hz > limits_.max_freq_hz)
    throw BackendError(BackendErrc::OutOfRange, "frequency out of range");
  dut_.apply_stimulus(stimulus);
}

}  // namespace airgap
