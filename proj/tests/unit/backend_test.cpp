#include <doctest.h>

#include <random>

#include "airgap/dut_backend.hpp"
#include "airgap/protocol.hpp"
#include "airgap/serial_backend.hpp"

using namespace airgap;
using namespace airgap::protocol;

namespace {

SimulatedDut small_dut(std::uint64_t seed = 3) {
  DutDescriptor d;
  d.n_paths = 4;
  CouplingModel m;
  m.noise_sigma = 2.0;
  SimulatedDut dut(d, m, LinkGeometry{}, seed);
  auto cell = m;
  cell.resonances = {{868e6, 50e6, 1.0}};
  dut.set_model(1, PathConfig{}, cell);
  return dut;
}

const PathConfig kAnalogPuLoOd{GpioMode::Analog, Pupd::PullUp, OutputValue::Low, OutputType::OpenDrain};

// Swallows everything; every read times out.
class DeadTransport final : public LineTransport {
 public:
  void write_line(std::string_view) override { ++writes; }
  std::optional<std::string> read_line(std::chrono::milliseconds) override { return std::nullopt; }
  int writes = 0;
};

}  // namespace

TEST_CASE("path config tokens") {
  CHECK(kAnalogPuLoOd.to_string() == "ANALOG/PU/LO/OD");
  CHECK(parse_path_config("ANALOG/PU/LO/OD") == kAnalogPuLoOd);
  CHECK_FALSE(parse_path_config("ANALOG/PU/LO").has_value());
  CHECK_FALSE(parse_path_config("analog/PU/LO/OD").has_value());
  for (int i = 0; i < kNumPathConfigs; ++i) {
    const auto c = PathConfig::from_index(i);
    CHECK(c.index() == i);
    CHECK(parse_path_config(c.to_string()) == c);
  }
}

TEST_CASE("codec examples") {
  CHECK(encode_command(Configure{3, kAnalogPuLoOd}) == "CFG 3 ANALOG PU LO OD");
  CHECK(decode_command("CFG 3 ANALOG PU LO OD") == Command{Configure{3, kAnalogPuLoOd}});
  CHECK(decode_command("SMP 32 10000 16") == Command{Sample{32, 10000, 16}});
  CHECK(decode_command("ID?") == Command{Identify{}});
  CHECK(decode_command("RST") == Command{Reset{}});
  CHECK(decode_command("BLK 64") == Command{BlockSize{64}});

  CHECK(encode_response(IdReply{87, 12, 4000000, 1}) == "ID 87 12 4000000 1");
  CHECK(decode_response("DATA 5") == Response{DataHeader{5}});
  CHECK(decode_response("ERR unknown path 9") == Response{Err{"unknown path 9"}});
  CHECK(decode_code("4095") == 4095);
}

TEST_CASE("codec rejects malformed lines") {
  auto code_of = [](std::string_view line) {
    try {
      decode_command(line);
    } catch (const ProtocolError& e) {
      return e.code();
    }
    FAIL("accepted: " << line);
    return ProtocolErrc::Framing;
  };
  CHECK(code_of("CFG 3 ANALOG") == ProtocolErrc::Arity);
  CHECK(code_of("FOO 1") == ProtocolErrc::UnknownVerb);
  CHECK(code_of("SMP 32 10000 16 7") == ProtocolErrc::Arity);
  CHECK(code_of("SMP 032 10000 16") == ProtocolErrc::BadField);
  CHECK(code_of("SMP -1 10000 16") == ProtocolErrc::BadField);
  CHECK(code_of("SMP 99999999999 1 1") == ProtocolErrc::BadField);
  CHECK(code_of("CFG 3 ANALOG XX LO OD") == ProtocolErrc::BadField);
  CHECK(code_of("CFG  3 ANALOG PU LO OD") == ProtocolErrc::Framing);
  CHECK(code_of("RST\r") == ProtocolErrc::Framing);
  CHECK(code_of("") == ProtocolErrc::Framing);

  try {
    decode_command("SMP 32 1x 16");
    FAIL("accepted");
  } catch (const ProtocolError& e) {
    CHECK(e.position() == 7);
  }
}

TEST_CASE("codec round trip over random commands") {
  std::mt19937_64 gen(5);
  for (int i = 0; i < 5000; ++i) {
    const auto a = static_cast<std::uint32_t>(gen()), b = static_cast<std::uint32_t>(gen()),
               c = static_cast<std::uint32_t>(gen());
    const Command cmds[] = {Configure{a, PathConfig::from_index(static_cast<int>(b % 64))}, BlockSize{a},
                            Sample{a, b, c}};
    for (const auto& cmd : cmds) REQUIRE(decode_command(encode_command(cmd)) == cmd);
    const Response rs[] = {IdReply{a, b, c, 1}, DataHeader{a}};
    for (const auto& r : rs) REQUIRE(decode_response(encode_response(r)) == r);
  }
}

TEST_CASE("simulator backend contract") {
  auto dut = small_dut();
  SimulatorBackend be(dut);
  AdcConfig adc;

  CHECK_THROWS_AS(be.capture(1), BackendError);
  try {
    be.capture(1);
  } catch (const BackendError& e) {
    CHECK(e.code() == BackendErrc::NotConfigured);
  }

  be.configure({0, ""}, kAnalogPuLoOd, adc);
  adc.samples_per_block = 32;
  CHECK(be.capture(32).samples.size() == 1024);
  CHECK(be.capture(0).samples.empty());

  try {
    be.configure({4, ""}, kAnalogPuLoOd, adc);
    FAIL("no error");
  } catch (const BackendError& e) {
    CHECK(e.code() == BackendErrc::UnknownPath);
    CHECK(std::string(e.what()).find("unknown path") != std::string::npos);
  }
  adc.oversampling_ratio = 3;
  try {
    be.configure({0, ""}, kAnalogPuLoOd, adc);
    FAIL("no error");
  } catch (const BackendError& e) {
    CHECK(e.code() == BackendErrc::Unsupported);
    CHECK(std::string(e.what()).find("unsupported") != std::string::npos);
  }
}

TEST_CASE("rf source limits") {
  auto dut = small_dut();
  SimulatedRfSource src(dut);
  RfStimulus s;
  s.freq_hz = 868e6;
  s.power_dbm = 43.0;
  s.enabled = true;
  CHECK_NOTHROW(src.set(s));
  CHECK(src.state().power_dbm == 43.0);
  CHECK(src.state().enabled);

  s.power_dbm = -50.0;
  CHECK_THROWS_AS(src.set(s), BackendError);
  s.power_dbm = 44.0;
  CHECK_THROWS_AS(src.set(s), BackendError);
  s.power_dbm = 0.0;
  s.freq_hz = 1e12;
  CHECK_THROWS_AS(src.set(s), BackendError);
}

TEST_CASE("serial backend over loopback") {
  auto dut = small_dut();
  FirmwareEmulator fw(dut);
  LoopbackTransport wire(fw);
  SerialBackend be(wire);

  const auto d = be.descriptor();
  CHECK(d.n_paths == 4);
  CHECK(d.resolution_bits == 12);

  CHECK_THROWS_AS(be.capture(1), BackendError);
  AdcConfig adc;
  adc.samples_per_block = 16;
  be.configure({1, ""}, PathConfig{}, adc);
  const auto t = be.capture(3);
  CHECK(t.samples.size() == 48);
  CHECK(t.meta.path == 1);

  try {
    be.configure({7, ""}, PathConfig{}, adc);
    FAIL("no error");
  } catch (const BackendError& e) {
    CHECK(e.code() == BackendErrc::UnknownPath);
  }
  adc.oversampling_ratio = 3;
  CHECK_THROWS_AS(be.configure({0, ""}, PathConfig{}, adc), BackendError);
}

TEST_CASE("firmware emulator answers raw lines") {
  auto dut = small_dut();
  FirmwareEmulator fw(dut);
  CHECK(fw.handle_line("SMP 1 10000 1") == std::vector<std::string>{"ERR not configured"});
  CHECK(fw.handle_line("CFG 9 INPUT NONE HI PP")[0].starts_with("ERR unknown path"));
  CHECK(fw.handle_line("CFG 0 INPUT NONE HI PP") == std::vector<std::string>{"OK"});
  CHECK(fw.handle_line("BLK 2") == std::vector<std::string>{"OK"});
  const auto data = fw.handle_line("SMP 2 10000 1");
  REQUIRE(data.size() == 6);
  CHECK(data.front() == "DATA 4");
  CHECK(data.back() == "END");
  CHECK(fw.handle_line("SMP 2 10000 3")[0].starts_with("ERR unsupported"));
  CHECK(fw.handle_line("garbage")[0].starts_with("ERR"));
  CHECK(fw.handle_line("RST") == std::vector<std::string>{"OK"});
  CHECK(fw.handle_line("SMP 1 10000 1") == std::vector<std::string>{"ERR not configured"});
}

TEST_CASE("serial retries after dropped responses") {
  auto dut = small_dut();
  FirmwareEmulator fw(dut);
  LoopbackTransport wire(fw);
  SerialOptions opt;
  opt.response_timeout = std::chrono::milliseconds(1);
  SerialBackend be(wire, opt);

  wire.drop_next_responses(2);
  CHECK(be.descriptor().n_paths == 4);
  CHECK(wire.lines_written() == 3);

  DeadTransport dead;
  SerialBackend lost(dead, opt);
  try {
    lost.descriptor();
    FAIL("no error");
  } catch (const BackendError& e) {
    CHECK(e.code() == BackendErrc::Timeout);
  }
  CHECK(dead.writes == 1 + opt.retries);
}

TEST_CASE("serial and direct captures agree") {
  auto a = small_dut(21);
  auto b = small_dut(21);
  SimulatorBackend direct(a);
  FirmwareEmulator fw(b);
  LoopbackTransport wire(fw);
  SerialBackend serial(wire);
  AdcConfig adc;
  adc.oversampling_ratio = 4;
  direct.configure({1, ""}, PathConfig{}, adc);
  serial.configure({1, ""}, PathConfig{}, adc);
  for (int k = 0; k < 3; ++k) CHECK(direct.capture(5).samples == serial.capture(5).samples);
}
