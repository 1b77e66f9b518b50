#include "airgap/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <istream>
#include <ostream>

namespace airgap::io {

using nlohmann::json;

namespace {

bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') throw FormatError("CR line ending");
  return true;
}

json parse_header(std::istream& in, const char* expected_kind) {
  std::string line;
  if (!next_line(in, line)) throw FormatError("empty file");
  json h;
  try {
    h = json::parse(line);
  } catch (const json::parse_error&) {
    throw FormatError("header line is not a JSON object");
  }
  if (!h.is_object()) throw FormatError("header line is not a JSON object");
  if (!h.contains("schema_version") || h["schema_version"] != kSchemaVersion)
    throw FormatError("unsupported schema_version " + h.value("schema_version", json()).dump());
  if (h.value("kind", std::string()) != expected_kind)
    throw FormatError(std::string("expected a ") + expected_kind + " file, got kind " + h.value("kind", json()).dump());
  return h;
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("missing field ") + key);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw FormatError(std::string("bad field ") + key);
  }
}

PathConfig config_field(const json& j, const char* key) {
  const auto cfg = parse_path_config(field<std::string>(j, key));
  if (!cfg) throw FormatError(std::string("bad configuration in ") + key);
  return *cfg;
}

}  // namespace

void write_trace(std::ostream& out, const TraceFile& t) {
  const auto& tr = t.trace;
  json h = {{"schema_version", kSchemaVersion},
            {"kind", "trace"},
            {"resolution_bits", tr.config.resolution_bits},
            {"sample_rate_hz", tr.config.sample_rate_hz},
            {"oversampling_ratio", tr.config.oversampling_ratio},
            {"samples_per_block", tr.config.samples_per_block},
            {"path", tr.meta.path},
            {"config", tr.meta.config.to_string()},
            {"stimulus",
             {{"freq_hz", tr.meta.stimulus.freq_hz},
              {"power_dbm", tr.meta.stimulus.power_dbm},
              {"enabled", tr.meta.stimulus.enabled},
              {"modulated", tr.meta.stimulus.envelope != nullptr}}},
            {"seed", tr.meta.seed},
            {"n_samples", tr.samples.size()}};
  if (t.samples_per_symbol) h["samples_per_symbol"] = *t.samples_per_symbol;
  if (!t.extra.empty()) h["extra"] = t.extra;
  out << h.dump() << '\n';
  for (int c : tr.samples) out << c << '\n';
}

TraceFile read_trace(std::istream& in) {
  const auto h = parse_header(in, "trace");
  TraceFile t;
  auto& tr = t.trace;
  tr.config.resolution_bits = field<int>(h, "resolution_bits");
  tr.config.sample_rate_hz = field<std::uint32_t>(h, "sample_rate_hz");
  tr.config.oversampling_ratio = field<int>(h, "oversampling_ratio");
  tr.config.samples_per_block = field<std::size_t>(h, "samples_per_block");
  try {
    tr.config.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  tr.meta.path = field<int>(h, "path");
  tr.meta.config = config_field(h, "config");
  tr.meta.seed = field<std::uint64_t>(h, "seed");
  const auto& s = h.value("stimulus", json::object());
  tr.meta.stimulus.freq_hz = s.value("freq_hz", 0.0);
  tr.meta.stimulus.power_dbm = s.value("power_dbm", 0.0);
  tr.meta.stimulus.enabled = s.value("enabled", false);
  if (h.contains("samples_per_symbol")) t.samples_per_symbol = field<std::size_t>(h, "samples_per_symbol");
  if (h.contains("extra")) t.extra = h["extra"];

  const int max_code = tr.config.max_code();
  std::string line;
  std::size_t line_no = 1;
  while (next_line(in, line)) {
    ++line_no;
    int v = -1;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (line.empty() || ec != std::errc{} || ptr != line.data() + line.size() || v < 0 || v > max_code)
      throw FormatError("bad sample on line " + std::to_string(line_no));
    tr.samples.push_back(v);
  }
  if (h.contains("n_samples") && field<std::size_t>(h, "n_samples") != tr.samples.size())
    throw FormatError("sample count does not match header");
  return t;
}

void save_trace(const std::filesystem::path& p, const TraceFile& t) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  write_trace(out, t);
}

TraceFile load_trace(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw FormatError("trace not found: " + p.string());
  return read_trace(in);
}

json snr_to_json(const SnrEstimate& s) {
  if (s.is_high()) return "high";
  if (s.is_no_response()) return "none";
  return {{"db", s.db()}};
}

SnrEstimate snr_from_json(const json& j) {
  if (j == "high") return SnrEstimate::high();
  if (j == "none") return SnrEstimate::no_response();
  if (j.is_object() && j.contains("db") && j["db"].is_number()) return SnrEstimate::finite(j["db"].get<double>());
  throw FormatError("bad snr value " + j.dump());
}

json record_to_json(const SensitivityRecord& r) {
  return {{"path", r.path},       {"config", r.config.to_string()}, {"freq_hz", r.freq_hz},
          {"mean_on", r.mean_on}, {"mean_off", r.mean_off},         {"diff", r.diff},
          {"var_off", r.var_off}, {"snr", snr_to_json(r.snr)}};
}

SensitivityRecord record_from_json(const json& j) {
  SensitivityRecord r;
  r.path = field<int>(j, "path");
  r.config = config_field(j, "config");
  r.freq_hz = field<double>(j, "freq_hz");
  r.mean_on = field<double>(j, "mean_on");
  r.mean_off = field<double>(j, "mean_off");
  r.diff = field<double>(j, "diff");
  r.var_off = field<double>(j, "var_off");
  if (!j.contains("snr")) throw FormatError("missing field snr");
  r.snr = snr_from_json(j["snr"]);
  return r;
}

void write_sweep_results(std::ostream& out, const SweepResult& r, const json& header_extra) {
  json h = {{"schema_version", kSchemaVersion},
            {"kind", "sweep"},
            {"records", r.records.size()},
            {"failed_cells", r.failed.size()}};
  if (header_extra.is_object()) h.update(header_extra);
  out << h.dump() << '\n';
  for (const auto& rec : r.records) out << record_to_json(rec).dump() << '\n';
  for (const auto& f : r.failed)
    out << json{{"failed_cell", {{"path", f.path}, {"config", f.config.to_string()}, {"message", f.message}}}}.dump()
        << '\n';
}

SweepResultsFile read_sweep_results(std::istream& in) {
  SweepResultsFile f;
  f.header = parse_header(in, "sweep");
  std::string line;
  while (next_line(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error&) {
      throw FormatError("malformed record line");
    }
    if (j.contains("failed_cell")) {
      const auto& c = j["failed_cell"];
      f.result.failed.push_back({field<int>(c, "path"), config_field(c, "config"), c.value("message", "")});
    } else {
      f.result.records.push_back(record_from_json(j));
    }
  }
  return f;
}

void write_ber_curve(std::ostream& out, const std::vector<BerPoint>& points, const json& header_extra) {
  json h = {{"schema_version", kSchemaVersion}, {"kind", "ber-curve"}, {"points", points.size()}};
  if (header_extra.is_object()) h.update(header_extra);
  out << h.dump() << '\n';
  for (const auto& p : points)
    out << json{{"power_dbm", p.power_dbm},     {"incident_dbm", p.incident_dbm}, {"oracle_ber", p.oracle_ber},
                {"total_bits", p.total_bits},   {"error_count", p.error_count},   {"ber", p.ber}}
               .dump()
        << '\n';
}

std::vector<BerPoint> read_ber_curve(std::istream& in) {
  parse_header(in, "ber-curve");
  std::vector<BerPoint> out;
  std::string line;
  while (next_line(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error&) {
      throw FormatError("malformed ber-curve line");
    }
    out.push_back({field<double>(j, "power_dbm"), field<double>(j, "incident_dbm"), field<double>(j, "oracle_ber"),
                   field<std::size_t>(j, "total_bits"), field<std::size_t>(j, "error_count"),
                   field<double>(j, "ber")});
  }
  return out;
}

void write_bits(std::ostream& out, const BitSequence& bits) {
  for (auto b : bits.bits) out << (b ? '1' : '0') << '\n';
}

BitSequence read_bits(std::istream& in) {
  BitSequence bits;
  std::string line;
  std::size_t line_no = 0;
  while (next_line(in, line)) {
    ++line_no;
    if (line == "0" || line == "1")
      bits.bits.push_back(line == "1" ? 1 : 0);
    else
      throw FormatError("bad bit on line " + std::to_string(line_no));
  }
  return bits;
}

json ber_report_to_json(const BerReport& r) {
  std::size_t longest = 0;
  for (const auto& run : r.burst_runs) longest = std::max(longest, run.second);
  return {{"total_bits", r.total_bits},
          {"error_count", r.error_count},
          {"ber", r.ber},
          {"burst_runs", r.burst_runs.size()},
          {"longest_run", longest},
          {"errors_in_runs_ge2", r.errors_in_runs(2)}};
}

std::string peek_kind(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty file");
  try {
    const auto h = json::parse(line);
    if (h.is_object() && h.contains("kind") && h["kind"].is_string()) return h["kind"].get<std::string>();
  } catch (const json::parse_error&) {
  }
  throw FormatError("missing header line");
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const std::filesystem::path& p, const Manifest& m) {
  json j = {{"schema_version", kSchemaVersion},
            {"kind", "manifest"},
            {"command", m.command},
            {"args", m.args},
            {"scenario", m.scenario},
            {"seed", m.seed},
            {"tool_version", kToolVersion},
            {"started_utc", m.started_utc},
            {"finished_utc", m.finished_utc},
            {"outputs", m.outputs},
            {"details", m.details}};
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << j.dump(2) << '\n';
}

}  // namespace airgap::io
