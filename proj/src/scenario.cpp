#include "airgap/scenario.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>

namespace airgap {

using nlohmann::json;

namespace {

void check_keys(const json& j, const char* where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ScenarioError(std::string(where) + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ScenarioError(std::string(where) + ": unknown key '" + key + "'");
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback, const char* where) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ScenarioError(std::string(where) + "." + key + ": wrong type");
  }
}

double get_number(const json& j, const char* key, double fallback, const char* where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ScenarioError(std::string(where) + "." + key + ": expected a number");
  return j.at(key).get<double>();
}

std::vector<int> parse_paths(const json& j, int n_paths, const char* where) {
  std::vector<int> out;
  if (j.is_string() && j.get<std::string>() == "all") {
    for (int i = 0; i < n_paths; ++i) out.push_back(i);
    return out;
  }
  if (!j.is_array()) throw ScenarioError(std::string(where) + ": paths must be \"all\" or a list");
  for (const auto& p : j) {
    if (!p.is_number_integer()) throw ScenarioError(std::string(where) + ": path index must be an integer");
    const int i = p.get<int>();
    if (i < 0 || i >= n_paths) throw ScenarioError(std::string(where) + ": unknown path " + std::to_string(i));
    out.push_back(i);
  }
  return out;
}

std::vector<PathConfig> parse_configs(const json& j, const char* where) {
  if (j.is_string() && j.get<std::string>() == "all") return enumerate_configs();
  if (j.is_string() && j.get<std::string>() == "recommended") return recommended_configs();
  if (!j.is_array())
    throw ScenarioError(std::string(where) + ": configs must be \"all\", \"recommended\" or a list");
  std::vector<PathConfig> out;
  for (const auto& c : j) {
    const auto cfg = c.is_string() ? parse_path_config(c.get<std::string>()) : std::nullopt;
    if (!cfg) throw ScenarioError(std::string(where) + ": bad configuration " + c.dump());
    out.push_back(*cfg);
  }
  return out;
}

PathConfig parse_one_config(const json& j, const char* where) {
  const auto cfg = j.is_string() ? parse_path_config(j.get<std::string>()) : std::nullopt;
  if (!cfg) throw ScenarioError(std::string(where) + ": bad configuration " + j.dump());
  return *cfg;
}

std::vector<double> parse_freqs(const json& j) {
  if (j.is_array()) {
    std::vector<double> f;
    for (const auto& x : j) {
      if (!x.is_number()) throw ScenarioError("sweep.freqs_hz: expected numbers");
      f.push_back(x.get<double>());
    }
    return f;
  }
  check_keys(j, "sweep.freqs_hz", {"start", "stop", "count"});
  const double start = get_number(j, "start", 200e6, "sweep.freqs_hz");
  const double stop = get_number(j, "stop", 1000e6, "sweep.freqs_hz");
  const auto count = get_or<std::size_t>(j, "count", 81, "sweep.freqs_hz");
  if (count == 0) throw ScenarioError("sweep.freqs_hz.count must be >= 1");
  std::vector<double> f(count);
  for (std::size_t i = 0; i < count; ++i)
    f[i] = count == 1 ? start : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
  return f;
}

}  // namespace

json coupling_to_json(const CouplingModel& m) {
  json res = json::array();
  for (const auto& r : m.resonances)
    res.push_back({{"center_hz", r.center_hz}, {"bandwidth_hz", r.bandwidth_hz}, {"peak_gain", r.peak_gain}});
  return {{"resonances", res},
          {"gamma", m.gamma},
          {"baseband_bandwidth_hz", m.baseband_bandwidth_hz},
          {"noise_sigma", m.noise_sigma},
          {"drift",
           {{"walk_step", m.drift.walk_step},
            {"sine_amplitude", m.drift.sine_amplitude},
            {"sine_period_s", m.drift.sine_period_s}}},
          {"burst",
           {{"rate_hz", m.burst.rate_hz}, {"amplitude", m.burst.amplitude}, {"duration_s", m.burst.duration_s}}},
          {"dc_operating_point", m.dc_operating_point}};
}

CouplingModel coupling_from_json(const json& j) {
  constexpr const char* w = "model";
  check_keys(j, w,
             {"resonances", "gamma", "baseband_bandwidth_hz", "noise_sigma", "drift", "burst", "dc_operating_point"});
  CouplingModel m;
  if (j.contains("resonances")) {
    if (!j["resonances"].is_array()) throw ScenarioError("model.resonances: expected a list");
    for (const auto& r : j["resonances"]) {
      check_keys(r, "model.resonances[]", {"center_hz", "bandwidth_hz", "peak_gain"});
      Resonance res;
      res.center_hz = get_number(r, "center_hz", res.center_hz, "resonance");
      res.bandwidth_hz = get_number(r, "bandwidth_hz", res.bandwidth_hz, "resonance");
      res.peak_gain = get_number(r, "peak_gain", res.peak_gain, "resonance");
      m.resonances.push_back(res);
    }
  }
  m.gamma = get_number(j, "gamma", m.gamma, w);
  m.baseband_bandwidth_hz = get_number(j, "baseband_bandwidth_hz", m.baseband_bandwidth_hz, w);
  m.noise_sigma = get_number(j, "noise_sigma", m.noise_sigma, w);
  m.dc_operating_point = get_number(j, "dc_operating_point", m.dc_operating_point, w);
  if (j.contains("drift")) {
    const auto& d = j["drift"];
    check_keys(d, "model.drift", {"walk_step", "sine_amplitude", "sine_period_s"});
    m.drift.walk_step = get_number(d, "walk_step", 0.0, "model.drift");
    m.drift.sine_amplitude = get_number(d, "sine_amplitude", 0.0, "model.drift");
    m.drift.sine_period_s = get_number(d, "sine_period_s", 1.0, "model.drift");
  }
  if (j.contains("burst")) {
    const auto& b = j["burst"];
    check_keys(b, "model.burst", {"rate_hz", "amplitude", "duration_s"});
    m.burst.rate_hz = get_number(b, "rate_hz", 0.0, "model.burst");
    m.burst.amplitude = get_number(b, "amplitude", 0.0, "model.burst");
    m.burst.duration_s = get_number(b, "duration_s", 0.0, "model.burst");
  }
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(std::string("model: ") + e.what());
  }
  return m;
}

Scenario parse_scenario(const json& doc) {
  check_keys(doc, "scenario",
             {"schema_version", "name", "description", "seed", "descriptor", "adc", "link", "rf_source", "baseline",
              "cells", "sweep", "payload"});
  if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer())
    throw ScenarioError("scenario: missing schema_version");
  if (doc["schema_version"].get<int>() != kScenarioSchemaVersion)
    throw ScenarioError("scenario: unsupported schema_version " + doc["schema_version"].dump());

  Scenario s;
  s.name = get_or<std::string>(doc, "name", "unnamed", "scenario");
  s.seed = get_or<std::uint64_t>(doc, "seed", 0, "scenario");

  if (doc.contains("descriptor")) {
    const auto& d = doc["descriptor"];
    check_keys(d, "descriptor", {"n_paths", "labels", "resolution_bits", "max_sample_rate_hz", "oversampling_ratios"});
    s.descriptor.n_paths = get_or<int>(d, "n_paths", 1, "descriptor");
    s.descriptor.labels = get_or<std::vector<std::string>>(d, "labels", {}, "descriptor");
    s.descriptor.resolution_bits = get_or<int>(d, "resolution_bits", 12, "descriptor");
    s.descriptor.max_sample_rate_hz = get_or<std::uint32_t>(d, "max_sample_rate_hz", 4'000'000, "descriptor");
    s.descriptor.oversampling_ratios =
        get_or<std::vector<int>>(d, "oversampling_ratios", s.descriptor.oversampling_ratios, "descriptor");
  }
  if (s.descriptor.n_paths < 1) throw ScenarioError("descriptor.n_paths must be >= 1");

  s.adc.resolution_bits = s.descriptor.resolution_bits;
  if (doc.contains("adc")) {
    const auto& a = doc["adc"];
    check_keys(a, "adc", {"resolution_bits", "sample_rate_hz", "oversampling_ratio", "samples_per_block"});
    s.adc.resolution_bits = get_or<int>(a, "resolution_bits", s.adc.resolution_bits, "adc");
    s.adc.sample_rate_hz = get_or<std::uint32_t>(a, "sample_rate_hz", s.adc.sample_rate_hz, "adc");
    s.adc.oversampling_ratio = get_or<int>(a, "oversampling_ratio", s.adc.oversampling_ratio, "adc");
    s.adc.samples_per_block = get_or<std::size_t>(a, "samples_per_block", s.adc.samples_per_block, "adc");
  }
  try {
    s.adc.validate();
    check_adc_capabilities(s.descriptor, s.adc);
  } catch (const std::exception& e) {
    throw ScenarioError(std::string("adc: ") + e.what());
  }

  if (doc.contains("link")) {
    const auto& l = doc["link"];
    check_keys(l, "link", {"g_tx_dbi", "g_rx_dbi", "distance_m", "shielding_db"});
    s.link.g_tx_dbi = get_number(l, "g_tx_dbi", s.link.g_tx_dbi, "link");
    s.link.g_rx_dbi = get_number(l, "g_rx_dbi", s.link.g_rx_dbi, "link");
    s.link.distance_m = get_number(l, "distance_m", s.link.distance_m, "link");
    s.link.shielding_db = get_number(l, "shielding_db", s.link.shielding_db, "link");
    if (!(s.link.distance_m > 0.0)) throw ScenarioError("link.distance_m must be > 0");
  }

  if (doc.contains("rf_source")) {
    const auto& r = doc["rf_source"];
    check_keys(r, "rf_source", {"min_power_dbm", "max_power_dbm", "min_freq_hz", "max_freq_hz"});
    s.rf_limits.min_power_dbm = get_number(r, "min_power_dbm", s.rf_limits.min_power_dbm, "rf_source");
    s.rf_limits.max_power_dbm = get_number(r, "max_power_dbm", s.rf_limits.max_power_dbm, "rf_source");
    s.rf_limits.min_freq_hz = get_number(r, "min_freq_hz", s.rf_limits.min_freq_hz, "rf_source");
    s.rf_limits.max_freq_hz = get_number(r, "max_freq_hz", s.rf_limits.max_freq_hz, "rf_source");
  }

  const json baseline = doc.value("baseline", json::object());
  s.baseline = coupling_from_json(baseline);

  if (doc.contains("cells")) {
    if (!doc["cells"].is_array()) throw ScenarioError("cells: expected a list");
    for (const auto& c : doc["cells"]) {
      check_keys(c, "cells[]", {"paths", "configs", "model"});
      CellSpec cell;
      cell.paths = parse_paths(c.value("paths", json("all")), s.descriptor.n_paths, "cells[]");
      cell.configs = parse_configs(c.value("configs", json("all")), "cells[]");
      json merged = baseline;
      merged.merge_patch(c.value("model", json::object()));
      cell.model = coupling_from_json(merged);
      s.cells.push_back(std::move(cell));
    }
  }

  if (doc.contains("sweep")) {
    const auto& w = doc["sweep"];
    check_keys(w, "sweep", {"paths", "configs", "freqs_hz", "power_dbm", "blocks_per_state", "settle_blocks"});
    SweepSpec sw;
    sw.paths = parse_paths(w.value("paths", json("all")), s.descriptor.n_paths, "sweep");
    sw.configs = parse_configs(w.value("configs", json("recommended")), "sweep");
    if (w.contains("freqs_hz")) sw.freqs_hz = parse_freqs(w["freqs_hz"]);
    sw.power_dbm = get_number(w, "power_dbm", sw.power_dbm, "sweep");
    sw.blocks_per_state = get_or<std::size_t>(w, "blocks_per_state", sw.blocks_per_state, "sweep");
    sw.settle_blocks = get_or<std::size_t>(w, "settle_blocks", sw.settle_blocks, "sweep");
    s.sweep = sw;
  }

  if (doc.contains("payload")) {
    const auto& p = doc["payload"];
    check_keys(p, "payload", {"n_bits", "bit_rate_hz", "bit_seed", "path", "config", "freq_hz", "power_dbm"});
    PayloadSpec pl;
    pl.n_bits = get_or<std::size_t>(p, "n_bits", 0, "payload");
    pl.bit_rate_hz = get_number(p, "bit_rate_hz", pl.bit_rate_hz, "payload");
    pl.bit_seed = get_or<std::uint64_t>(p, "bit_seed", pl.bit_seed, "payload");
    pl.path = get_or<int>(p, "path", 0, "payload");
    if (pl.path < 0 || pl.path >= s.descriptor.n_paths) throw ScenarioError("payload.path: unknown path");
    if (p.contains("config")) pl.config = parse_one_config(p["config"], "payload.config");
    pl.freq_hz = get_number(p, "freq_hz", pl.freq_hz, "payload");
    pl.power_dbm = get_number(p, "power_dbm", pl.power_dbm, "payload");
    s.payload = pl;
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ScenarioError("scenario not found: " + file.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError("scenario " + file.string() + ": " + e.what());
  }
  return parse_scenario(doc);
}

SimulatedDut Scenario::build_dut(std::optional<std::uint64_t> seed_override) const {
  SimulatedDut dut(descriptor, baseline, link, seed_override.value_or(seed));
  for (const auto& c : cells)
    for (int p : c.paths)
      for (const auto& cfg : c.configs) dut.set_model(p, cfg, c.model);
  dut.set_adc(adc);
  return dut;
}

SweepPlan Scenario::sweep_plan() const {
  const SweepSpec spec = sweep.value_or(SweepSpec{});
  SweepPlan plan;
  for (int p : spec.paths) plan.paths.push_back({p, descriptor.label(p)});
  if (plan.paths.empty())
    for (int p = 0; p < descriptor.n_paths; ++p) plan.paths.push_back({p, descriptor.label(p)});
  plan.configs = spec.configs.empty() ? recommended_configs() : spec.configs;
  plan.freqs_hz = spec.freqs_hz;
  plan.power_dbm = spec.power_dbm;
  plan.blocks_per_state = spec.blocks_per_state;
  plan.settle_blocks = spec.settle_blocks;
  plan.adc = adc;
  return plan;
}

PayloadRun simulate_payload(SimulatedDut& dut, const AdcConfig& adc, const PayloadSpec& payload) {
  if (!(payload.bit_rate_hz > 0.0)) throw std::invalid_argument("bit rate must be > 0");
  const double ratio = static_cast<double>(adc.sample_rate_hz) / payload.bit_rate_hz;
  const double sps_d = std::round(ratio);
  if (sps_d < 1.0 || std::abs(ratio - sps_d) > 1e-9 * ratio)
    throw std::invalid_argument("ADC sample rate must be an integer multiple of the bit rate");
  const auto sps = static_cast<std::size_t>(sps_d);

  PayloadRun run;
  run.samples_per_symbol = sps;
  run.bits = generate_bits(payload.n_bits, payload.bit_seed);

  AdcConfig block_adc = adc;
  block_adc.samples_per_block = sps;
  dut.configure(payload.path, payload.config, block_adc);

  RfStimulus stimulus;
  stimulus.freq_hz = payload.freq_hz;
  stimulus.power_dbm = payload.power_dbm;
  stimulus.enabled = true;
  stimulus.envelope =
      std::make_shared<const BasebandEnvelope>(modulate_ook(run.bits, 1, 1.0, payload.bit_rate_hz));
  dut.apply_stimulus(stimulus);
  run.trace = dut.capture(payload.n_bits);
  return run;
}

}  // namespace airgap
