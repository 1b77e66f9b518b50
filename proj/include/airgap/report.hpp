#pragma once

#include <span>
#include <string>
#include <vector>

#include "airgap/io.hpp"
#include "airgap/sensitivity_sweep.hpp"

// Static figures: each renderer returns a self-contained SVG document and a
// CSV holding exactly the plotted numbers.

namespace airgap::report {

struct Figure {
  std::string svg;
  std::string csv;
};

/// Peak SNR per (path, config); one row per path, one column per config.
Figure heatmap(std::span<const SensitivityRecord> records, double threshold_db);

/// SNR over frequency for one cell.
Figure spectrum(const SnrSpectrum& spectrum, double threshold_db);

/// Measured and predicted BER against transmit power, log scale.
Figure ber_curve(std::span<const io::BerPoint> points);

/// Symbols of a trace folded onto two symbol periods.
Figure eye(std::span<const int> samples, std::size_t samples_per_symbol, double phase, std::size_t max_symbols = 200);

}  // namespace airgap::report
