#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "airgap/dut_backend.hpp"
#include "airgap/signal_model.hpp"
#include "airgap/types.hpp"

// Software OOK receiver: DC removal, robust scaling, symbol timing, slicing,
// plus BER bookkeeping and an eye-opening figure of merit.

namespace airgap {

struct DemodParams {
  std::size_t samples_per_symbol = 20;
  std::size_t dc_window_symbols = 15;  // odd
  std::size_t timing_grid = 16;        // phase hypotheses per symbol

  /// DC window in samples, forced odd.
  std::size_t dc_window_samples() const;
  void validate() const;
};

struct BerReport {
  std::size_t total_bits = 0;
  std::size_t error_count = 0;
  double ber = 0.0;
  std::vector<std::size_t> error_positions;
  std::vector<std::pair<std::size_t, std::size_t>> burst_runs;  // (start, length)

  /// Errors that sit in runs of at least `min_length`.
  std::size_t errors_in_runs(std::size_t min_length) const;
};

/// Subtracts a centered moving average, truncated at the edges. `window` must be odd and no longer than the input.
std::vector<double> remove_dc(std::span<const double> samples, std::size_t window);

/// Divides by the P90 - P10 spread. Throws on zero spread.
std::vector<double> normalize(std::span<const double> samples);

/// Phase in [0, 1) symbols maximizing the mean step size across hypothesized
/// symbol boundaries. Throws std::invalid_argument with fewer than ten
/// transitions.
double recover_timing(std::span<const double> samples, std::size_t samples_per_symbol, std::size_t grid = 16);

/// Mean of the central half of every symbol; > 0 gives 1, otherwise 0.
/// Phases at or above half a symbol are taken as early symbol starts.
BitSequence slice_bits(std::span<const double> samples, double phase, std::size_t samples_per_symbol);

BitSequence demodulate(std::span<const double> samples, const DemodParams& params);
BitSequence demodulate(const AdcTrace& trace, const DemodParams& params);

/// Throws std::invalid_argument on length mismatch.
BerReport ber(const BitSequence& decoded, const BitSequence& reference);

/// P10 of the 1-symbol levels minus P90 of the 0-symbol levels after
/// normalization, clamped at 0. Without `reference`, symbols are classified
/// against the mean level.
double eye_opening(std::span<const double> samples, std::size_t samples_per_symbol, double phase,
                   const BitSequence* reference = nullptr);

struct IdealSyncSetup {
  ReceptionPathId path;
  PathConfig config;
  AdcConfig adc;
  double freq_hz = 868e6;
  double power_dbm = 0.0;
  std::size_t n_bits = 10'000;
  std::size_t samples_per_bit = 127;
  std::size_t threshold_window_bits = 101;  // odd
  std::uint64_t seed = 1;
};

/// One block per bit with the carrier keyed by the bit; each block mean is
/// compared with a moving average of its neighbours.
BerReport ideal_sync_ber_experiment(DutBackend& backend, RfSource& rf_source, const IdealSyncSetup& setup);

}  // namespace airgap
