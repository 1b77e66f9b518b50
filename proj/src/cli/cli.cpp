#include "airgap/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "airgap/io.hpp"
#include "airgap/protocol.hpp"
#include "airgap/receiver.hpp"
#include "airgap/report.hpp"
#include "airgap/scenario.hpp"
#include "airgap/serial_backend.hpp"
#include "airgap/signal_model.hpp"
#include "airgap/stats.hpp"

namespace airgap::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Input errors that map to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

std::ifstream open_in(const fs::path& p, const char* what) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw UsageError(std::string(what) + " not found: " + p.string());
  return in;
}

PathConfig config_arg(const std::string& s) {
  const auto c = parse_path_config(s);
  if (!c) throw UsageError("bad configuration '" + s + "' (expected e.g. ANALOG/PD/HI/OD)");
  return *c;
}

struct Context {
  std::vector<std::string> args;
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
  std::string started = io::utc_now();

  io::Manifest manifest(const std::string& command) const {
    io::Manifest m;
    m.command = command;
    m.args = args;
    m.started_utc = started;
    return m;
  }
  void finish(io::Manifest& m, const fs::path& p) const {
    m.finished_utc = io::utc_now();
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    io::write_manifest(p, m);
  }
};

// ---- sweep -------------------------------------------------------------

struct SweepArgs {
  std::string scenario;
  std::string out;
  std::optional<std::uint64_t> seed;
  double threshold_db = kDefaultThresholdDb;
  std::optional<std::size_t> blocks_per_state;
  std::optional<double> power_dbm;
  std::string backend = "sim";
};

int cmd_sweep(const SweepArgs& a, Context& ctx) {
  const auto sc = load_scenario(a.scenario);
  auto plan = sc.sweep_plan();
  if (a.blocks_per_state) plan.blocks_per_state = *a.blocks_per_state;
  if (a.power_dbm) plan.power_dbm = *a.power_dbm;
  try {
    plan.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const std::uint64_t seed = a.seed.value_or(sc.seed);

  auto dut = sc.build_dut(seed);
  SimulatedRfSource source(dut, sc.rf_limits);
  const SweepLog log = [&](const std::string& msg) { ctx.err << "warning: " << msg << '\n'; };
  SweepResult result;
  if (a.backend == "loopback") {
    FirmwareEmulator fw(dut);
    LoopbackTransport link(fw);
    SerialBackend backend(link);
    result = run_sweep(plan, backend, source, log);
  } else {
    SimulatorBackend backend(dut);
    result = run_sweep(plan, backend, source, log);
  }

  const fs::path dir(a.out);
  fs::create_directories(dir);
  const json header = {{"scenario", sc.name},
                       {"seed", seed},
                       {"n_paths", plan.paths.size()},
                       {"n_configs", plan.configs.size()},
                       {"n_freqs", plan.freqs_hz.size()},
                       {"power_dbm", plan.power_dbm},
                       {"blocks_per_state", plan.blocks_per_state},
                       {"samples_per_block", plan.adc.samples_per_block}};
  {
    auto f = open_out(dir / "results.jsonl");
    io::write_sweep_results(f, result, header);
  }

  json sensitive = json::array();
  for (const auto& s : spectra(result.records)) {
    if (!classify_sensitive(s, a.threshold_db)) continue;
    const auto [freq, snr] = peak_snr(s);
    sensitive.push_back(
        {{"path", s.path},
         {"config", s.config.to_string()},
         {"peak_freq_hz", freq},
         {"peak_snr", io::snr_to_json(snr)}});
  }
  const json summary = {{"records", result.records.size()},
                        {"failed_cells", result.failed.size()},
                        {"threshold_db", a.threshold_db},
                        {"sensitive_cells", sensitive}};
  {
    auto f = open_out(dir / "summary.json");
    f << summary.dump(2) << '\n';
  }

  auto m = ctx.manifest("sweep");
  m.scenario = a.scenario;
  m.seed = seed;
  m.outputs = {(dir / "results.jsonl").string(), (dir / "summary.json").string()};
  m.details = {{"backend", a.backend}, {"threshold_db", a.threshold_db}};
  ctx.finish(m, dir / "manifest.json");

  ctx.out << result.records.size() << " records, " << result.failed.size() << " failed cells, " << sensitive.size()
          << " sensitive cells at " << a.threshold_db << " dB -> " << (dir / "results.jsonl").string() << '\n';
  return result.failed.empty() ? kOk : kRuntimeFailure;
}

// ---- simulate ----------------------------------------------------------

struct SimulateArgs {
  std::string scenario;
  std::string out;
  std::string reference_out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> bits;
  std::optional<double> bit_rate;
  std::optional<std::uint64_t> bit_seed;
  std::optional<double> distance_m;
  std::optional<double> power_dbm;
};

int cmd_simulate(const SimulateArgs& a, Context& ctx) {
  const auto sc = load_scenario(a.scenario);
  if (!sc.payload) throw UsageError("scenario " + sc.name + " has no payload section");
  auto payload = *sc.payload;
  if (a.bits) payload.n_bits = *a.bits;
  if (a.bit_rate) payload.bit_rate_hz = *a.bit_rate;
  if (a.bit_seed) payload.bit_seed = *a.bit_seed;
  if (a.power_dbm) payload.power_dbm = *a.power_dbm;
  const std::uint64_t seed = a.seed.value_or(sc.seed);

  auto dut = sc.build_dut(seed);
  if (a.distance_m) {
    if (!(*a.distance_m > 0.0)) throw UsageError("distance must be > 0");
    auto link = dut.link();
    link.distance_m = *a.distance_m;
    dut.set_link(link);
  }
  PayloadRun run;
  try {
    run = simulate_payload(dut, sc.adc, payload);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  io::TraceFile tf;
  tf.trace = run.trace;
  tf.samples_per_symbol = run.samples_per_symbol;
  tf.extra = {{"scenario", sc.name},
              {"n_bits", payload.n_bits},
              {"bit_rate_hz", payload.bit_rate_hz},
              {"bit_seed", payload.bit_seed},
              {"distance_m", dut.link().distance_m}};
  const fs::path trace_path(a.out);
  const fs::path ref_path = a.reference_out.empty() ? fs::path(a.out + ".ref.bits") : fs::path(a.reference_out);
  {
    auto f = open_out(trace_path);
    io::write_trace(f, tf);
  }
  {
    auto f = open_out(ref_path);
    io::write_bits(f, run.bits);
  }
  auto m = ctx.manifest("simulate");
  m.scenario = a.scenario;
  m.seed = seed;
  m.outputs = {trace_path.string(), ref_path.string()};
  m.details = tf.extra;
  ctx.finish(m, a.out + ".manifest.json");
  ctx.out << run.trace.samples.size() << " samples (" << payload.n_bits << " bits x " << run.samples_per_symbol
          << ") -> " << trace_path.string() << '\n';
  return kOk;
}

// ---- demod -------------------------------------------------------------

struct DemodArgs {
  std::string trace;
  std::string out;
  std::string reference;
  std::optional<std::size_t> sps;
  std::size_t dc_window_symbols = 15;
};

int cmd_demod(const DemodArgs& a, Context& ctx) {
  auto in = open_in(a.trace, "trace");
  const auto tf = io::read_trace(in);
  DemodParams p;
  p.dc_window_symbols = a.dc_window_symbols;
  if (a.sps)
    p.samples_per_symbol = *a.sps;
  else if (tf.samples_per_symbol)
    p.samples_per_symbol = *tf.samples_per_symbol;
  else
    throw UsageError("trace has no samples_per_symbol; pass --samples-per-symbol");
  BitSequence bits;
  try {
    p.validate();
    if (!tf.trace.samples.empty() && tf.trace.samples.size() < p.dc_window_samples())
      throw std::invalid_argument("trace shorter than the DC window");
    bits = demodulate(tf.trace, p);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const fs::path out_path = a.out.empty() ? fs::path(a.trace + ".decoded.bits") : fs::path(a.out);
  {
    auto f = open_out(out_path);
    io::write_bits(f, bits);
  }
  auto m = ctx.manifest("demod");
  m.seed = tf.trace.meta.seed;
  m.outputs = {out_path.string()};
  m.details = {{"trace", a.trace}, {"samples_per_symbol", p.samples_per_symbol},
               {"dc_window_symbols", p.dc_window_symbols}};
  if (!a.reference.empty()) {
    auto rin = open_in(a.reference, "reference");
    const auto ref = io::read_bits(rin);
    if (ref.size() != bits.size())
      throw UsageError("length mismatch: decoded " + std::to_string(bits.size()) + " bits, reference " +
                       std::to_string(ref.size()));
    const auto report = io::ber_report_to_json(ber(bits, ref));
    m.details["ber"] = report;
    ctx.out << report.dump() << '\n';
  } else {
    ctx.out << bits.size() << " bits -> " << out_path.string() << '\n';
  }
  ctx.finish(m, out_path.string() + ".manifest.json");
  return kOk;
}

// ---- ber ---------------------------------------------------------------

struct BerArgs {
  std::string decoded;
  std::string reference;
  std::string scenario;
  std::string out;
  std::vector<double> incident_dbm;
  std::size_t bits = 10'000;
  std::size_t samples_per_bit = 127;
  std::optional<int> path;
  std::string config;
  double freq_hz = 868e6;
  std::optional<std::uint64_t> seed;
};

int cmd_ber(const BerArgs& a, Context& ctx) {
  if (!a.decoded.empty() || !a.reference.empty()) {
    if (a.decoded.empty() || a.reference.empty()) throw UsageError("--decoded and --reference go together");
    auto din = open_in(a.decoded, "decoded bits");
    auto rin = open_in(a.reference, "reference");
    const auto d = io::read_bits(din);
    const auto r = io::read_bits(rin);
    if (d.size() != r.size()) throw UsageError("length mismatch");
    ctx.out << io::ber_report_to_json(ber(d, r)).dump() << '\n';
    return kOk;
  }
  if (a.scenario.empty() || a.out.empty())
    throw UsageError("either --decoded/--reference or --scenario/--out is required");
  if (a.incident_dbm.empty()) throw UsageError("--incident-dbm needs at least one value");

  const auto sc = load_scenario(a.scenario);
  const std::uint64_t seed = a.seed.value_or(sc.seed);
  IdealSyncSetup setup;
  setup.path.index = a.path.value_or(sc.payload ? sc.payload->path
                                                : (sc.cells.empty() ? 0 : sc.cells.front().paths.front()));
  setup.config = !a.config.empty() ? config_arg(a.config)
                                   : (sc.payload ? sc.payload->config
                                                 : (sc.cells.empty() ? PathConfig{} : sc.cells.front().configs.front()));
  if (setup.path.index < 0 || setup.path.index >= sc.descriptor.n_paths) throw UsageError("unknown path");
  setup.adc = sc.adc;
  setup.freq_hz = a.freq_hz;
  setup.n_bits = a.bits;
  setup.samples_per_bit = a.samples_per_bit;
  setup.seed = seed;

  std::vector<io::BerPoint> points;
  for (double inc : a.incident_dbm) {
    auto dut = sc.build_dut(seed);
    SimulatorBackend backend(dut);
    SimulatedRfSource source(dut, sc.rf_limits);
    const LinkBudget zero{0.0, sc.link.g_tx_dbi, sc.link.g_rx_dbi, sc.link.distance_m, a.freq_hz};
    setup.power_dbm = inc + sc.link.shielding_db - incident_power_dbm(zero);
    const auto r = ideal_sync_ber_experiment(backend, source, setup);
    const auto model = dut.model(setup.path.index, setup.config);
    const double d = coupling_gain(model, a.freq_hz) * std::pow(dbm_to_mw(inc), model.gamma);
    const double sigma_block =
        model.noise_sigma / std::sqrt(static_cast<double>(a.samples_per_bit * sc.adc.oversampling_ratio));
    const double oracle = sigma_block > 0.0 ? stats::q_function(d / (2.0 * sigma_block)) : (d > 0.0 ? 0.0 : 0.5);
    points.push_back({setup.power_dbm, inc, oracle, r.total_bits, r.error_count, r.ber});
    ctx.out << "incident " << inc << " dBm: BER " << r.ber << " (oracle " << oracle << ")\n";
  }
  {
    auto f = open_out(a.out);
    io::write_ber_curve(f, points, {{"scenario", sc.name}, {"seed", seed}, {"samples_per_bit", a.samples_per_bit}});
  }
  auto m = ctx.manifest("ber");
  m.scenario = a.scenario;
  m.seed = seed;
  m.outputs = {a.out};
  ctx.finish(m, a.out + ".manifest.json");
  return kOk;
}

// ---- report ------------------------------------------------------------

struct ReportArgs {
  std::string kind;
  std::string in;
  std::string out;
  double threshold_db = kDefaultThresholdDb;
  std::optional<int> path;
  std::string config;
  std::optional<std::size_t> sps;
};

int cmd_report(const ReportArgs& a, Context& ctx) {
  std::string kind;
  {
    auto in = open_in(a.in, "input");
    try {
      kind = io::peek_kind(in);
    } catch (const io::FormatError&) {
      throw UsageError("no records in " + a.in);
    }
  }
  const std::string expected = (a.kind == "heatmap" || a.kind == "spectrum") ? "sweep"
                               : a.kind == "ber-curve"                       ? "ber-curve"
                                                                             : "trace";
  if (kind != expected) throw UsageError("report kind " + a.kind + " needs a " + expected + " file, got " + kind);

  auto in = open_in(a.in, "input");
  report::Figure fig;
  if (expected == "sweep") {
    const auto rf = io::read_sweep_results(in);
    if (rf.result.records.empty()) throw UsageError("no records in " + a.in);
    if (a.kind == "heatmap") {
      fig = report::heatmap(rf.result.records, a.threshold_db);
    } else {
      const auto cells = spectra(rf.result.records);
      const SnrSpectrum* chosen = nullptr;
      if (a.path || !a.config.empty()) {
        const bool any_config = a.config.empty();
        const PathConfig cfg = any_config ? PathConfig{} : config_arg(a.config);
        for (const auto& c : cells)
          if ((!a.path || c.path == *a.path) && (any_config || c.config == cfg)) {
            chosen = &c;
            break;
          }
        if (!chosen) throw UsageError("no such cell in results");
      } else {
        for (const auto& c : cells)
          if (!chosen || snr_less(peak_snr(*chosen).second, peak_snr(c).second)) chosen = &c;
      }
      fig = report::spectrum(*chosen, a.threshold_db);
    }
  } else if (expected == "ber-curve") {
    const auto pts = io::read_ber_curve(in);
    if (pts.empty()) throw UsageError("no records in " + a.in);
    fig = report::ber_curve(pts);
  } else {
    const auto tf = io::read_trace(in);
    const auto sps = a.sps ? a.sps : tf.samples_per_symbol;
    if (!sps) throw UsageError("trace has no samples_per_symbol; pass --samples-per-symbol");
    if (tf.trace.samples.empty()) throw UsageError("no records in " + a.in);
    double phase = 0.0;
    try {
      DemodParams p;
      p.samples_per_symbol = *sps;
      const auto x = stats::to_double(tf.trace.samples);
      auto window = std::min(p.dc_window_samples(), x.size());
      if (window % 2 == 0) --window;
      phase = recover_timing(normalize(remove_dc(x, window)), *sps);
    } catch (const std::invalid_argument&) {
      phase = 0.0;  // too few transitions to lock; fold from the first sample
    }
    fig = report::eye(tf.trace.samples, *sps, phase);
  }

  const std::string svg_path = a.out + ".svg", csv_path = a.out + ".csv";
  {
    auto f = open_out(svg_path);
    f << fig.svg;
  }
  {
    auto f = open_out(csv_path);
    f << fig.csv;
  }
  auto m = ctx.manifest("report");
  m.outputs = {svg_path, csv_path};
  m.details = {{"kind", a.kind}, {"input", a.in}};
  ctx.finish(m, a.out + ".manifest.json");
  ctx.out << svg_path << '\n' << csv_path << '\n';
  return kOk;
}

// ---- linkbudget --------------------------------------------------------

struct LinkArgs {
  LinkBudget b{43.0, 6.5, 0.0, 1.0, 868e6};
  bool json_out = false;
};

int cmd_linkbudget(const LinkArgs& a, Context& ctx) {
  double fspl = 0.0, inc = 0.0;
  try {
    fspl = fspl_db(a.b.distance_m, a.b.freq_hz);
    inc = incident_power_dbm(a.b);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (a.json_out) {
    ctx.out << json{{"fspl_db", fspl}, {"incident_dbm", inc}, {"incident_mw", dbm_to_mw(inc)}}.dump() << '\n';
  } else {
    char buf[160];
    std::snprintf(buf, sizeof buf, "FSPL %.2f dB\nincident %.2f dBm (%.4g mW)\n", fspl, inc, dbm_to_mw(inc));
    ctx.out << buf;
  }
  return kOk;
}

// ---- protocol-loopback -------------------------------------------------

struct LoopbackArgs {
  std::string scenario;
  bool stdio = false;
  std::optional<std::uint64_t> seed;
};

int cmd_protocol_loopback(const LoopbackArgs& a, Context& ctx) {
  const auto sc = load_scenario(a.scenario);
  auto dut = sc.build_dut(a.seed.value_or(sc.seed));
  FirmwareEmulator fw(dut);
  if (a.stdio) {
    std::string line;
    while (std::getline(ctx.in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      for (const auto& r : fw.handle_line(line)) ctx.out << r << '\n';
      ctx.out.flush();
    }
    return kOk;
  }
  const std::vector<std::string> script = {
      "ID?", "CFG 0 ANALOG/PD/HI/OD", "CFG 0 ANALOG PD HI OD", "BLK 8",
      "SMP 1 " + std::to_string(sc.adc.sample_rate_hz) + " " + std::to_string(sc.adc.oversampling_ratio),
      "SMP 1 10000 3", "RST"};
  for (const auto& cmd : script) {
    ctx.out << "> " << cmd << '\n';
    for (const auto& r : fw.handle_line(cmd)) ctx.out << "< " << r << '\n';
  }
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discover parasitic RF sensitivities in radio-less devices and receive OOK through them", "airgap"};
  app.require_subcommand(1);
  app.set_version_flag("--version", io::kToolVersion);

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Sweep paths x configurations x frequencies on a simulated device");
  sweep->add_option("--scenario", sw.scenario, "Scenario file")->required();
  sweep->add_option("--out", sw.out, "Output directory")->required();
  sweep->add_option("--seed", sw.seed, "Override the scenario seed");
  sweep->add_option("--threshold-db", sw.threshold_db, "Sensitivity threshold")->capture_default_str();
  sweep->add_option("--blocks-per-state", sw.blocks_per_state, "Blocks per on/off state and frequency");
  sweep->add_option("--power-dbm", sw.power_dbm, "Generator power");
  sweep->add_option("--backend", sw.backend, "sim or loopback (through the wire protocol)")
      ->check(CLI::IsMember({"sim", "loopback"}))
      ->capture_default_str();

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Transmit the scenario payload and record the ADC trace");
  simulate->add_option("--scenario", sim.scenario, "Scenario file")->required();
  simulate->add_option("--out", sim.out, "Trace file")->required();
  simulate->add_option("--reference-out", sim.reference_out, "Reference bits file (default <out>.ref.bits)");
  simulate->add_option("--seed", sim.seed, "Override the scenario seed");
  simulate->add_option("--bits", sim.bits, "Payload length");
  simulate->add_option("--bit-rate", sim.bit_rate, "Bit rate in bit/s");
  simulate->add_option("--bit-seed", sim.bit_seed, "Seed of the payload bits");
  simulate->add_option("--distance-m", sim.distance_m, "Transmitter distance");
  simulate->add_option("--power-dbm", sim.power_dbm, "Transmit power");

  DemodArgs dm;
  auto* demod = app.add_subcommand("demod", "Decode an OOK trace");
  demod->add_option("--trace", dm.trace, "Trace file")->required();
  demod->add_option("--out", dm.out, "Decoded bits file (default <trace>.decoded.bits)");
  demod->add_option("--reference", dm.reference, "Reference bits for a BER report");
  demod->add_option("--samples-per-symbol", dm.sps, "Override the trace header");
  demod->add_option("--dc-window-symbols", dm.dc_window_symbols, "DC removal window (odd)")->capture_default_str();

  BerArgs ba;
  auto* berc = app.add_subcommand("ber", "Compare bit files, or run the ideal-synchronization BER experiment");
  berc->add_option("--decoded", ba.decoded, "Decoded bits file");
  berc->add_option("--reference", ba.reference, "Reference bits file");
  berc->add_option("--scenario", ba.scenario, "Scenario file");
  berc->add_option("--out", ba.out, "BER curve file");
  berc->add_option("--incident-dbm", ba.incident_dbm, "Incident power grid, comma separated")->delimiter(',');
  berc->add_option("--bits", ba.bits, "Bits per point")->capture_default_str();
  berc->add_option("--samples-per-bit", ba.samples_per_bit, "ADC samples per bit")->capture_default_str();
  berc->add_option("--path", ba.path, "Reception path");
  berc->add_option("--config", ba.config, "Path configuration, e.g. ANALOG/PD/HI/OD");
  berc->add_option("--freq-hz", ba.freq_hz, "Carrier frequency")->capture_default_str();
  berc->add_option("--seed", ba.seed, "Override the scenario seed");

  ReportArgs ra;
  auto* rep = app.add_subcommand("report", "Render SVG + CSV figures");
  rep->add_option("--kind", ra.kind, "heatmap, spectrum, ber-curve or eye")
      ->required()
      ->check(CLI::IsMember({"heatmap", "spectrum", "ber-curve", "eye"}));
  rep->add_option("--in", ra.in, "Results, BER curve or trace file")->required();
  rep->add_option("--out", ra.out, "Output prefix (.svg and .csv are appended)")->required();
  rep->add_option("--threshold-db", ra.threshold_db, "Sensitivity threshold")->capture_default_str();
  rep->add_option("--path", ra.path, "Spectrum: reception path");
  rep->add_option("--config", ra.config, "Spectrum: path configuration");
  rep->add_option("--samples-per-symbol", ra.sps, "Eye: override the trace header");

  LinkArgs la;
  auto* lb = app.add_subcommand("linkbudget", "Free-space link budget");
  lb->add_option("--power-dbm", la.b.p_tx_dbm, "Transmit power")->capture_default_str();
  lb->add_option("--g-tx-dbi", la.b.g_tx_dbi, "Transmit antenna gain")->capture_default_str();
  lb->add_option("--g-rx-dbi", la.b.g_rx_dbi, "Receive aperture gain")->capture_default_str();
  lb->add_option("--distance-m", la.b.distance_m, "Distance")->capture_default_str();
  lb->add_option("--freq-hz", la.b.freq_hz, "Carrier frequency")->capture_default_str();
  lb->add_flag("--json", la.json_out, "Print JSON");

  LoopbackArgs lo;
  auto* loop = app.add_subcommand("protocol-loopback", "Exercise the wire protocol against an emulated device");
  loop->add_option("--scenario", lo.scenario, "Scenario file")->required();
  loop->add_flag("--stdio", lo.stdio, "Act as the device: commands on stdin, responses on stdout");
  loop->add_option("--seed", lo.seed, "Override the scenario seed");

  Context ctx{args, in, out, err};
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*sweep) return cmd_sweep(sw, ctx);
    if (*simulate) return cmd_simulate(sim, ctx);
    if (*demod) return cmd_demod(dm, ctx);
    if (*berc) return cmd_ber(ba, ctx);
    if (*rep) return cmd_report(ra, ctx);
    if (*lb) return cmd_linkbudget(la, ctx);
    if (*loop) return cmd_protocol_loopback(lo, ctx);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ScenarioError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const io::FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  return kUsageError;
}

}  // namespace airgap::cli
