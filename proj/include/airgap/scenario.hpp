#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "airgap/dut_backend.hpp"
#include "airgap/dut_simulator.hpp"
#include "airgap/receiver.hpp"
#include "airgap/sensitivity_sweep.hpp"

// Declarative scenario documents (JSON). See docs/scenario-format.md.

namespace airgap {

inline constexpr int kScenarioSchemaVersion = 1;

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model override for a set of cells, merged over the baseline model.
struct CellSpec {
  std::vector<int> paths;
  std::vector<PathConfig> configs;
  CouplingModel model;
};

struct SweepSpec {
  std::vector<int> paths;
  std::vector<PathConfig> configs;
  std::vector<double> freqs_hz = SweepPlan::default_frequencies();
  double power_dbm = 0.0;
  std::size_t blocks_per_state = 1;
  std::size_t settle_blocks = 1;
};

struct PayloadSpec {
  std::size_t n_bits = 0;
  double bit_rate_hz = 1000.0;
  std::uint64_t bit_seed = 1;
  int path = 0;
  PathConfig config;
  double freq_hz = 868e6;
  double power_dbm = 0.0;
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 0;
  DutDescriptor descriptor;
  AdcConfig adc;
  LinkGeometry link;
  RfSourceLimits rf_limits;
  CouplingModel baseline;
  std::vector<CellSpec> cells;
  std::optional<SweepSpec> sweep;
  std::optional<PayloadSpec> payload;

  /// A simulator with every cell model installed.
  SimulatedDut build_dut(std::optional<std::uint64_t> seed_override = std::nullopt) const;
  SweepPlan sweep_plan() const;
};

/// Throws ScenarioError on schema violations.
Scenario parse_scenario(const nlohmann::json& doc);
/// Throws ScenarioError("scenario not found: ...") for a missing file.
Scenario load_scenario(const std::filesystem::path& file);

nlohmann::json coupling_to_json(const CouplingModel& m);
CouplingModel coupling_from_json(const nlohmann::json& j);

struct PayloadRun {
  BitSequence bits;
  AdcTrace trace;
  std::size_t samples_per_symbol = 0;
};

/// Keys the payload onto the carrier and captures exactly one ADC block per
/// symbol. The ADC rate must be an integer multiple of the bit rate.
PayloadRun simulate_payload(SimulatedDut& dut, const AdcConfig& adc, const PayloadSpec& payload);

}  // namespace airgap
