#include "airgap/types.hpp"

#include <bit>

namespace airgap {

namespace {

constexpr std::array<std::string_view, 4> kModeTokens{"INPUT", "OUTPUT", "AF", "ANALOG"};
constexpr std::array<std::string_view, 4> kPupdTokens{"NONE", "PU", "PD", "RSV"};
constexpr std::array<std::string_view, 2> kValueTokens{"HI", "LO"};
constexpr std::array<std::string_view, 2> kOtypeTokens{"PP", "OD"};

template <typename E, std::size_t N>
std::optional<E> lookup(const std::array<std::string_view, N>& tokens, std::string_view s) {
  for (std::size_t i = 0; i < N; ++i)
    if (tokens[i] == s) return static_cast<E>(i);
  return std::nullopt;
}

}  // namespace

int PathConfig::index() const {
  return ((static_cast<int>(mode) * 4 + static_cast<int>(pupd)) * 2 + static_cast<int>(value)) * 2 +
         static_cast<int>(otype);
}

PathConfig PathConfig::from_index(int index) {
  if (index < 0 || index >= kNumPathConfigs) throw std::out_of_range("path config index out of range");
  PathConfig c;
  c.otype = static_cast<OutputType>(index % 2);
  c.value = static_cast<OutputValue>((index / 2) % 2);
  c.pupd = static_cast<Pupd>((index / 4) % 4);
  c.mode = static_cast<GpioMode>(index / 16);
  return c;
}

std::string PathConfig::to_string() const {
  std::string s;
  s.append(token(mode)).append("/").append(token(pupd)).append("/").append(token(value)).append("/").append(
      token(otype));
  return s;
}

std::string_view token(GpioMode m) { return kModeTokens[static_cast<std::size_t>(m)]; }
std::string_view token(Pupd p) { return kPupdTokens[static_cast<std::size_t>(p)]; }
std::string_view token(OutputValue v) { return kValueTokens[static_cast<std::size_t>(v)]; }
std::string_view token(OutputType t) { return kOtypeTokens[static_cast<std::size_t>(t)]; }

std::optional<GpioMode> parse_mode(std::string_view s) { return lookup<GpioMode>(kModeTokens, s); }
std::optional<Pupd> parse_pupd(std::string_view s) { return lookup<Pupd>(kPupdTokens, s); }
std::optional<OutputValue> parse_value(std::string_view s) { return lookup<OutputValue>(kValueTokens, s); }
std::optional<OutputType> parse_otype(std::string_view s) { return lookup<OutputType>(kOtypeTokens, s); }

std::optional<PathConfig> parse_path_config(std::string_view s) {
  std::array<std::string_view, 4> parts;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto slash = s.find('/');
    if ((slash == std::string_view::npos) != (i == 3)) return std::nullopt;
    parts[i] = s.substr(0, slash);
    s = slash == std::string_view::npos ? std::string_view{} : s.substr(slash + 1);
  }
  auto m = parse_mode(parts[0]);
  auto p = parse_pupd(parts[1]);
  auto v = parse_value(parts[2]);
  auto t = parse_otype(parts[3]);
  if (!m || !p || !v || !t) return std::nullopt;
  return PathConfig{*m, *p, *v, *t};
}

bool is_supported_oversampling(int ratio) {
  return ratio >= 1 && ratio <= 256 && std::has_single_bit(static_cast<unsigned>(ratio));
}

void AdcConfig::validate() const {
  if (resolution_bits < 6 || resolution_bits > 16) throw std::invalid_argument("resolution_bits must be in [6,16]");
  if (sample_rate_hz == 0) throw std::invalid_argument("sample_rate_hz must be > 0");
  if (!is_supported_oversampling(oversampling_ratio))
    throw std::invalid_argument("oversampling_ratio must be a power of two in [1,256]");
  if (samples_per_block == 0) throw std::invalid_argument("samples_per_block must be > 0");
}

std::string DutDescriptor::label(int path) const {
  if (path >= 0 && static_cast<std::size_t>(path) < labels.size()) return labels[static_cast<std::size_t>(path)];
  return "path" + std::to_string(path);
}

}  // namespace airgap
