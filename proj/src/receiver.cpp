#include "airgap/receiver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "airgap/stats.hpp"

namespace airgap {

std::size_t DemodParams::dc_window_samples() const {
  const auto w = dc_window_symbols * samples_per_symbol;
  return w % 2 == 0 ? w + 1 : w;
}

void DemodParams::validate() const {
  if (samples_per_symbol < 2) throw std::invalid_argument("samples_per_symbol must be >= 2");
  if (dc_window_symbols < 3 || dc_window_symbols % 2 == 0)
    throw std::invalid_argument("dc_window_symbols must be odd and >= 3");
  if (timing_grid == 0) throw std::invalid_argument("timing_grid must be >= 1");
}

std::size_t BerReport::errors_in_runs(std::size_t min_length) const {
  std::size_t n = 0;
  for (const auto& [start, len] : burst_runs)
    if (len >= min_length) n += len;
  return n;
}

namespace {

std::vector<double> prefix_sums(std::span<const double> x) {
  std::vector<double> s(x.size() + 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) s[i + 1] = s[i] + x[i];
  return s;
}

// Centered moving average; near the edges the window is cut to the samples
// that exist.
std::vector<double> centered_average(std::span<const double> x, std::size_t window) {
  const auto n = x.size();
  const auto half = window / 2;
  const auto s = prefix_sums(x);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto lo = i > half ? i - half : 0;
    const auto hi = std::min(n, i + half + 1);
    out[i] = (s[hi] - s[lo]) / static_cast<double>(hi - lo);
  }
  return out;
}

double wrap_phase(double phase) { return phase >= 0.5 ? phase - 1.0 : phase; }

// Central-half mean of every symbol.
std::vector<double> symbol_levels(std::span<const double> x, double phase, std::size_t sps) {
  const auto n_symbols = x.size() / sps;
  const double sps_d = static_cast<double>(sps);
  const double start0 = wrap_phase(phase) * sps_d;
  const auto n = static_cast<double>(x.size());
  std::vector<double> levels(n_symbols, 0.0);
  for (std::size_t k = 0; k < n_symbols; ++k) {
    const double s = start0 + static_cast<double>(k) * sps_d;
    const double lo = std::clamp(std::ceil(s + 0.25 * sps_d - 1e-9), 0.0, n);
    const double hi = std::clamp(std::ceil(s + 0.75 * sps_d - 1e-9), 0.0, n);
    if (hi <= lo) continue;
    double sum = 0.0;
    for (auto i = static_cast<std::size_t>(lo); i < static_cast<std::size_t>(hi); ++i) sum += x[i];
    levels[k] = sum / (hi - lo);
  }
  return levels;
}

}  // namespace

std::vector<double> remove_dc(std::span<const double> samples, std::size_t window) {
  if (window % 2 == 0) throw std::invalid_argument("DC window must be odd");
  if (window > samples.size()) throw std::invalid_argument("DC window larger than input");
  const auto avg = centered_average(samples, window);
  std::vector<double> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) out[i] = samples[i] - avg[i];
  return out;
}

std::vector<double> normalize(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("normalize: empty input");
  const double spread = stats::percentile(samples, 90.0) - stats::percentile(samples, 10.0);
  if (!(spread > 0.0)) throw std::invalid_argument("normalize: zero spread");
  std::vector<double> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) out[i] = samples[i] / spread;
  return out;
}

double recover_timing(std::span<const double> samples, std::size_t samples_per_symbol, std::size_t grid) {
  const auto sps = samples_per_symbol;
  if (sps < 2) throw std::invalid_argument("samples_per_symbol must be >= 2");
  if (grid == 0) grid = 1;
  const auto n = samples.size();
  const std::size_t w = std::max<std::size_t>(1, sps / 4);
  const auto s = prefix_sums(samples);
  const auto wd = static_cast<double>(w);

  std::vector<std::size_t> offsets;
  for (std::size_t j = 0; j < grid; ++j) {
    const double pos = static_cast<double>(j * sps) / static_cast<double>(grid);
    const auto o = static_cast<std::size_t>(std::lround(pos)) % sps;
    if (std::find(offsets.begin(), offsets.end(), o) == offsets.end()) offsets.push_back(o);
  }
  std::sort(offsets.begin(), offsets.end());

  double best_energy = -1.0;
  std::size_t best = 0;
  for (auto o : offsets) {
    double energy = 0.0;
    std::size_t count = 0;
    for (std::size_t b = o; b + w <= n; b += sps) {
      if (b < w) continue;
      const double after = (s[b + w] - s[b]) / wd;
      const double before = (s[b] - s[b - w]) / wd;
      energy += std::abs(after - before);
      ++count;
    }
    if (count == 0) continue;
    energy /= static_cast<double>(count);
    if (energy > best_energy * (1.0 + 1e-9) + 1e-300) {
      best_energy = energy;
      best = o;
    }
  }
  if (!(best_energy > 0.0)) throw std::invalid_argument("timing recovery: no transitions");

  const double phase = static_cast<double>(best) / static_cast<double>(sps);
  const auto levels = symbol_levels(samples, phase, sps);
  const double mid = levels.empty() ? 0.0 : stats::mean(levels);
  std::size_t transitions = 0;
  for (std::size_t k = 1; k < levels.size(); ++k)
    if ((levels[k] > mid) != (levels[k - 1] > mid)) ++transitions;
  if (transitions < 10)
    throw std::invalid_argument("timing recovery: too few transitions (" + std::to_string(transitions) + ")");
  return phase;
}

BitSequence slice_bits(std::span<const double> samples, double phase, std::size_t samples_per_symbol) {
  BitSequence out;
  for (double level : symbol_levels(samples, phase, samples_per_symbol)) out.bits.push_back(level > 0.0 ? 1 : 0);
  return out;
}

BitSequence demodulate(std::span<const double> samples, const DemodParams& params) {
  params.validate();
  if (samples.empty()) return {};
  const auto centered = remove_dc(samples, params.dc_window_samples());
  const auto scaled = normalize(centered);
  const double phase = recover_timing(scaled, params.samples_per_symbol, params.timing_grid);
  return slice_bits(scaled, phase, params.samples_per_symbol);
}

BitSequence demodulate(const AdcTrace& trace, const DemodParams& params) {
  return demodulate(stats::to_double(trace.samples), params);
}

BerReport ber(const BitSequence& decoded, const BitSequence& reference) {
  if (decoded.size() != reference.size())
    throw std::invalid_argument("length mismatch: " + std::to_string(decoded.size()) + " vs " +
                                std::to_string(reference.size()));
  BerReport r;
  r.total_bits = decoded.size();
  for (std::size_t i = 0; i < decoded.size(); ++i) {
    if ((decoded.bits[i] != 0) == (reference.bits[i] != 0)) continue;
    r.error_positions.push_back(i);
    if (!r.burst_runs.empty() && r.burst_runs.back().first + r.burst_runs.back().second == i)
      ++r.burst_runs.back().second;
    else
      r.burst_runs.emplace_back(i, 1);
  }
  r.error_count = r.error_positions.size();
  r.ber = r.total_bits == 0 ? 0.0 : static_cast<double>(r.error_count) / static_cast<double>(r.total_bits);
  return r;
}

double eye_opening(std::span<const double> samples, std::size_t samples_per_symbol, double phase,
                   const BitSequence* reference) {
  if (samples_per_symbol < 2) throw std::invalid_argument("samples_per_symbol must be >= 2");
  if (samples.size() / samples_per_symbol < 20) throw std::invalid_argument("eye opening needs >= 20 symbols");
  const auto scaled = normalize(samples);
  const auto levels = symbol_levels(scaled, phase, samples_per_symbol);
  const double mid = stats::mean(levels);
  std::vector<double> ones, zeros;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const bool one = reference ? (k < reference->size() && reference->bits[k] != 0) : levels[k] > mid;
    (one ? ones : zeros).push_back(levels[k]);
  }
  if (ones.empty() || zeros.empty()) throw std::invalid_argument("eye opening needs both bit values");
  return std::max(0.0, stats::percentile(ones, 10.0) - stats::percentile(zeros, 90.0));
}

BerReport ideal_sync_ber_experiment(DutBackend& backend, RfSource& rf_source, const IdealSyncSetup& setup) {
  if (setup.samples_per_bit == 0) throw std::invalid_argument("samples_per_bit must be >= 1");
  if (setup.threshold_window_bits % 2 == 0) throw std::invalid_argument("threshold window must be odd");
  auto adc = setup.adc;
  adc.samples_per_block = setup.samples_per_bit;
  backend.configure(setup.path, setup.config, adc);

  const auto bits = generate_bits(setup.n_bits, setup.seed);
  RfStimulus stimulus;
  stimulus.freq_hz = setup.freq_hz;
  stimulus.power_dbm = setup.power_dbm;
  stimulus.enabled = false;
  rf_source.set(stimulus);
  backend.capture(1);

  std::vector<double> means;
  means.reserve(bits.size());
  for (auto b : bits.bits) {
    stimulus.enabled = b != 0;
    rf_source.set(stimulus);
    const auto trace = backend.capture(1);
    means.push_back(stats::mean(stats::to_double(trace.samples)));
  }
  stimulus.enabled = false;
  rf_source.set(stimulus);

  BitSequence decoded;
  if (!means.empty()) {
    const auto thr = centered_average(means, std::min(setup.threshold_window_bits, means.size() | 1));
    decoded.bits.reserve(means.size());
    for (std::size_t i = 0; i < means.size(); ++i) decoded.bits.push_back(means[i] - thr[i] > 0.0 ? 1 : 0);
  }
  return ber(decoded, bits);
}

}  // namespace airgap
