#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "airgap/signal_model.hpp"

// Vocabulary shared by the simulator, the backends and the sweep: GPIO
// front-end settings, ADC acquisition parameters, stimuli and traces.

namespace airgap {

enum class GpioMode : std::uint8_t { Input, Output, AlternateFunction, Analog };
enum class Pupd : std::uint8_t { None, PullUp, PullDown, Reserved };
enum class OutputValue : std::uint8_t { High, Low };
enum class OutputType : std::uint8_t { PushPull, OpenDrain };

struct PathConfig {
  GpioMode mode = GpioMode::Input;
  Pupd pupd = Pupd::None;
  OutputValue value = OutputValue::High;
  OutputType otype = OutputType::PushPull;

  /// Position in the mode-major enumeration, 0..63.
  int index() const;
  static PathConfig from_index(int index);

  /// "ANALOG/PU/LO/OD"
  std::string to_string() const;

  auto operator<=>(const PathConfig&) const = default;
};

inline constexpr int kNumPathConfigs = 64;

std::string_view token(GpioMode m);
std::string_view token(Pupd p);
std::string_view token(OutputValue v);
std::string_view token(OutputType t);

// Parse the uppercase wire tokens; std::nullopt on anything else.
std::optional<GpioMode> parse_mode(std::string_view s);
std::optional<Pupd> parse_pupd(std::string_view s);
std::optional<OutputValue> parse_value(std::string_view s);
std::optional<OutputType> parse_otype(std::string_view s);
/// Inverse of PathConfig::to_string.
std::optional<PathConfig> parse_path_config(std::string_view s);

struct ReceptionPathId {
  int index = 0;
  std::string label;
};

struct AdcConfig {
  int resolution_bits = 12;
  std::uint32_t sample_rate_hz = 10'000;
  int oversampling_ratio = 1;
  std::size_t samples_per_block = 32;

  int max_code() const { return (1 << resolution_bits) - 1; }
  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;

  friend bool operator==(const AdcConfig&, const AdcConfig&) = default;
};

bool is_supported_oversampling(int ratio);

struct RfStimulus {
  double freq_hz = 868e6;
  double power_dbm = 0.0;  // transmit power fed into the link budget
  bool enabled = false;
  // Modulation m(t), starting at the moment the stimulus is applied. Absent
  // means an unmodulated carrier.
  std::shared_ptr<const BasebandEnvelope> envelope;
};

struct DutDescriptor {
  int n_paths = 1;
  std::vector<std::string> labels;
  int resolution_bits = 12;
  std::uint32_t max_sample_rate_hz = 4'000'000;
  std::vector<int> oversampling_ratios{1, 2, 4, 8, 16, 32, 64, 128, 256};

  std::string label(int path) const;
};

struct TraceMeta {
  int path = 0;
  PathConfig config;
  RfStimulus stimulus;
  std::uint64_t seed = 0;
};

struct AdcTrace {
  std::vector<int> samples;
  AdcConfig config;
  TraceMeta meta;
};

}  // namespace airgap
