#include "airgap/signal_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "airgap/rng.hpp"

namespace airgap {

BitSequence generate_bits(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  BitSequence out;
  out.seed = seed;
  out.bits.resize(n);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 64 == 0) word = rng.next_u64();
    out.bits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
  }
  return out;
}

BasebandEnvelope modulate_ook(const BitSequence& bits, std::size_t samples_per_symbol,
                              double amplitude, double symbol_rate_hz) {
  if (samples_per_symbol < 1) throw std::invalid_argument("samples_per_symbol must be >= 1");
  if (!(amplitude > 0.0)) throw std::invalid_argument("amplitude must be > 0");
  if (!(symbol_rate_hz > 0.0)) throw std::invalid_argument("symbol rate must be > 0");

  BasebandEnvelope env;
  env.sample_rate = symbol_rate_hz * static_cast<double>(samples_per_symbol);
  env.values.reserve(bits.size() * samples_per_symbol);
  for (auto b : bits.bits) env.values.insert(env.values.end(), samples_per_symbol, b ? amplitude : 0.0);
  return env;
}

double fspl_db(double distance_m, double freq_hz) {
  if (!(distance_m > 0.0)) throw std::invalid_argument("distance must be > 0");
  if (!(freq_hz > 0.0)) throw std::invalid_argument("frequency must be > 0");
  return 20.0 * std::log10(4.0 * std::numbers::pi * distance_m * freq_hz / kSpeedOfLight);
}

double incident_power_dbm(const LinkBudget& b) {
  return b.p_tx_dbm + b.g_tx_dbi + b.g_rx_dbi - fspl_db(b.distance_m, b.freq_hz);
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double mw_to_dbm(double mw) {
  if (!(mw > 0.0)) throw std::invalid_argument("power in mW must be > 0");
  return 10.0 * std::log10(mw);
}

}  // namespace airgap
