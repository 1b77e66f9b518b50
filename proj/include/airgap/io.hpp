#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "airgap/receiver.hpp"
#include "airgap/sensitivity_sweep.hpp"
#include "airgap/types.hpp"

// On-disk formats: trace files, sweep results (JSON lines), BER curves,
// ASCII bit files and run manifests. Every file starts with a header object
// carrying schema_version and kind.

namespace airgap::io {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TraceFile {
  AdcTrace trace;
  std::optional<std::size_t> samples_per_symbol;
  nlohmann::json extra = nlohmann::json::object();  // free-form provenance
};

void write_trace(std::ostream& out, const TraceFile& t);
TraceFile read_trace(std::istream& in);
void save_trace(const std::filesystem::path& p, const TraceFile& t);
TraceFile load_trace(const std::filesystem::path& p);

nlohmann::json snr_to_json(const SnrEstimate& s);
SnrEstimate snr_from_json(const nlohmann::json& j);
nlohmann::json record_to_json(const SensitivityRecord& r);
SensitivityRecord record_from_json(const nlohmann::json& j);

struct SweepResultsFile {
  nlohmann::json header = nlohmann::json::object();
  SweepResult result;
};

/// Header line, then one record per line, then one line per failed cell.
void write_sweep_results(std::ostream& out, const SweepResult& r, const nlohmann::json& header_extra = {});
SweepResultsFile read_sweep_results(std::istream& in);

struct BerPoint {
  double power_dbm = 0.0;
  double incident_dbm = 0.0;
  double oracle_ber = 0.0;
  std::size_t total_bits = 0;
  std::size_t error_count = 0;
  double ber = 0.0;
};

void write_ber_curve(std::ostream& out, const std::vector<BerPoint>& points, const nlohmann::json& header_extra = {});
std::vector<BerPoint> read_ber_curve(std::istream& in);

/// One ASCII '0' or '1' per line.
void write_bits(std::ostream& out, const BitSequence& bits);
BitSequence read_bits(std::istream& in);

nlohmann::json ber_report_to_json(const BerReport& r);

/// "kind" from the header line of any of the formats above.
std::string peek_kind(std::istream& in);

struct Manifest {
  std::string command;
  std::vector<std::string> args;
  std::string scenario;
  std::uint64_t seed = 0;
  std::string started_utc;
  std::string finished_utc;
  std::vector<std::string> outputs;
  nlohmann::json details = nlohmann::json::object();
};

std::string utc_now();
void write_manifest(const std::filesystem::path& p, const Manifest& m);

}  // namespace airgap::io
