#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

// Transmit-side primitives: payload bits, rectangular OOK envelopes and the
// free-space link budget that turns a transmitter setup into incident power.

namespace airgap {

inline constexpr double kSpeedOfLight = 299'792'458.0;

struct BitSequence {
  std::vector<std::uint8_t> bits;
  std::optional<std::uint64_t> seed;

  std::size_t size() const { return bits.size(); }
  bool empty() const { return bits.empty(); }
  friend bool operator==(const BitSequence& a, const BitSequence& b) { return a.bits == b.bits; }
};

/// Normalized amplitude samples m(t). The carrier is never synthesized; its
/// frequency travels with the stimulus.
struct BasebandEnvelope {
  std::vector<double> values;
  double sample_rate = 1.0;

  double duration_s() const { return static_cast<double>(values.size()) / sample_rate; }
};

struct LinkBudget {
  double p_tx_dbm = 0.0;
  double g_tx_dbi = 0.0;
  double g_rx_dbi = 0.0;  // parasitic aperture gain is unknown; isotropic by default
  double distance_m = 1.0;
  double freq_hz = 868e6;
};

/// Uniform random bits, reproducible from (n, seed).
BitSequence generate_bits(std::size_t n, std::uint64_t seed);

/// Rectangular OOK: each 1 becomes `samples_per_symbol` samples of `amplitude`,
/// each 0 the same number of zeros. Envelope rate = symbol_rate * sps.
BasebandEnvelope modulate_ook(const BitSequence& bits, std::size_t samples_per_symbol,
                              double amplitude, double symbol_rate_hz = 1.0);

/// 20 log10(4 pi d f / c). Throws std::invalid_argument for non-positive input.
double fspl_db(double distance_m, double freq_hz);

double incident_power_dbm(const LinkBudget& b);

double dbm_to_mw(double dbm);
/// Throws std::invalid_argument for mw <= 0.
double mw_to_dbm(double mw);

}  // namespace airgap
