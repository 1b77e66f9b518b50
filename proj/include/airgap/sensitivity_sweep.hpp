#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "airgap/dut_backend.hpp"
#include "airgap/types.hpp"

// Sweep over (path x configuration x frequency): off blocks, on blocks,
// block means, on/off difference and SNR against the off-state noise.

namespace airgap {

class SnrEstimate {
 public:
  enum class Kind { NoResponse, Finite, High };

  static SnrEstimate finite(double db) { return {Kind::Finite, db}; }
  static SnrEstimate high() { return {Kind::High, 0.0}; }
  static SnrEstimate no_response() { return {Kind::NoResponse, 0.0}; }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_high() const { return kind_ == Kind::High; }
  bool is_no_response() const { return kind_ == Kind::NoResponse; }
  /// Only meaningful when is_finite().
  double db() const { return db_; }

  /// "12.3 dB", "high" or "none".
  std::string to_string() const;

  friend bool operator==(const SnrEstimate&, const SnrEstimate&) = default;

 private:
  SnrEstimate(Kind k, double db) : kind_(k), db_(db) {}
  Kind kind_;
  double db_;
};

/// Total order: no response < any finite value < high.
bool snr_less(const SnrEstimate& a, const SnrEstimate& b);

struct SweepPlan {
  std::vector<ReceptionPathId> paths;
  std::vector<PathConfig> configs;
  std::vector<double> freqs_hz = default_frequencies();
  double power_dbm = 0.0;
  std::size_t blocks_per_state = 1;
  std::size_t settle_blocks = 1;  // discarded after every RF toggle
  AdcConfig adc;                  // adc.samples_per_block is the block length

  /// 81 points evenly spaced over [200 MHz, 1 GHz].
  static std::vector<double> default_frequencies();
  /// Throws std::invalid_argument.
  void validate() const;
};

struct SensitivityRecord {
  int path = 0;
  PathConfig config;
  double freq_hz = 0.0;
  double mean_on = 0.0;
  double mean_off = 0.0;
  double diff = 0.0;
  double var_off = 0.0;
  SnrEstimate snr = SnrEstimate::no_response();
};

struct FailedCell {
  int path = 0;
  PathConfig config;
  std::string message;
};

struct SweepResult {
  std::vector<SensitivityRecord> records;
  std::vector<FailedCell> failed;
};

struct SnrSpectrum {
  int path = 0;
  PathConfig config;
  std::vector<std::pair<double, SnrEstimate>> points;
};

/// One mean per consecutive block. Throws std::invalid_argument when the
/// length is not a multiple of block_len.
std::vector<double> block_mean(std::span<const int> samples, std::size_t block_len);
std::vector<double> block_mean(const AdcTrace& trace, std::size_t block_len);

/// SNR from a difference and a noise variance (the sentinel rules).
SnrEstimate snr_from(double diff, double variance);

/// d = mean(on) - mean(off), v = unbiased variance of off (0 for a single
/// off mean). Throws std::invalid_argument on empty input.
SnrEstimate estimate_snr(std::span<const double> on_means, std::span<const double> off_means);

using SweepLog = std::function<void(const std::string&)>;

/// Backend and protocol errors abort only the current (path, config) cell,
/// which is reported in SweepResult::failed.
SweepResult run_sweep(const SweepPlan& plan, DutBackend& backend, RfSource& rf_source, const SweepLog& log = {});

/// Records grouped per (path, config), in record order.
std::vector<SnrSpectrum> spectra(std::span<const SensitivityRecord> records);

/// Maximum SNR; ties go to the lowest frequency. Throws on empty spectrum.
std::pair<double, SnrEstimate> peak_snr(const SnrSpectrum& spectrum);

bool classify_sensitive(const SnrSpectrum& spectrum, double threshold_db);

inline constexpr double kDefaultThresholdDb = 10.0;

/// All 64 configurations, mode-major, then pupd, value, output type.
std::vector<PathConfig> enumerate_configs();

/// The eight configurations that covered every sensitivity seen on real
/// boards: (PD, HI) and (PU, LO) under each mode, open drain.
std::vector<PathConfig> recommended_configs();

}  // namespace airgap
