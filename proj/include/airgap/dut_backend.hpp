#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "airgap/dut_simulator.hpp"
#include "airgap/types.hpp"

namespace airgap {

enum class BackendErrc { UnknownPath, Unsupported, NotConfigured, Timeout, Protocol, Device, OutOfRange };

class BackendError : public std::runtime_error {
 public:
  BackendError(BackendErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  BackendErrc code() const { return code_; }

 private:
  BackendErrc code_;
};

/// A device that can be pointed at a reception path and asked for ADC blocks.
/// One owner at a time; commands are not interleaved.
class DutBackend {
 public:
  virtual ~DutBackend() = default;
  virtual DutDescriptor descriptor() = 0;
  virtual void configure(const ReceptionPathId& path, const PathConfig& cfg, const AdcConfig& adc) = 0;
  /// n_blocks * samples_per_block codes in acquisition order.
  virtual AdcTrace capture(std::size_t n_blocks) = 0;
};

/// The signal generator (plus amplifier) that illuminates the device.
class RfSource {
 public:
  virtual ~RfSource() = default;
  virtual void set(const RfStimulus& stimulus) = 0;
  virtual RfStimulus state() const = 0;
};

struct RfSourceLimits {
  double min_power_dbm = -40.0;
  double max_power_dbm = 43.0;
  double min_freq_hz = 1e6;
  double max_freq_hz = 6e9;
};

/// Throws BackendError(Unsupported) when the ADC request exceeds the
/// descriptor's capabilities.
void check_adc_capabilities(const DutDescriptor& d, const AdcConfig& adc);

class SimulatorBackend final : public DutBackend {
 public:
  explicit SimulatorBackend(SimulatedDut& dut) : dut_(dut) {}

  DutDescriptor descriptor() override { return dut_.descriptor(); }
  void configure(const ReceptionPathId& path, const PathConfig& cfg, const AdcConfig& adc) override;
  AdcTrace capture(std::size_t n_blocks) override;

 private:
  SimulatedDut& dut_;
};

class SimulatedRfSource final : public RfSource {
 public:
  SimulatedRfSource(SimulatedDut& dut, RfSourceLimits limits = {}) : dut_(dut), limits_(limits) {}

  void set(const RfStimulus& stimulus) override;
  RfStimulus state() const override { return dut_.stimulus(); }
  const RfSourceLimits& limits() const { return limits_; }

 private:
  SimulatedDut& dut_;
  RfSourceLimits limits_;
};

}  // namespace airgap
