#pragma once

#include <chrono>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "airgap/dut_backend.hpp"
#include "airgap/protocol.hpp"

namespace airgap {

/// Byte stream framed into LF-terminated lines (UART, USB CDC, pipe, ...).
class LineTransport {
 public:
  virtual ~LineTransport() = default;
  virtual void write_line(std::string_view line) = 0;
  /// std::nullopt on timeout.
  virtual std::optional<std::string> read_line(std::chrono::milliseconds timeout) = 0;
};

struct SerialOptions {
  std::chrono::milliseconds response_timeout{2000};
  int retries = 3;
};

/// Host side of the wire protocol.
class SerialBackend final : public DutBackend {
 public:
  explicit SerialBackend(LineTransport& transport, SerialOptions options = {})
      : transport_(transport), options_(options) {}

  DutDescriptor descriptor() override;
  void configure(const ReceptionPathId& path, const PathConfig& cfg, const AdcConfig& adc) override;
  AdcTrace capture(std::size_t n_blocks) override;

  void reset();

 private:
  // Sends `command` and reads the first response line, resending on timeout.
  protocol::Response transact(const protocol::Command& command);
  std::string read_or_throw();
  void expect_ok(const protocol::Response& r);

  LineTransport& transport_;
  SerialOptions options_;
  std::optional<DutDescriptor> descriptor_;
  std::optional<AdcConfig> adc_;
  int path_ = 0;
  PathConfig cfg_;
};

/// Device side: interprets command lines against a SimulatedDut, standing in
/// for the sensing firmware on a real board.
class FirmwareEmulator {
 public:
  explicit FirmwareEmulator(SimulatedDut& dut) : dut_(dut), block_size_(dut.adc().samples_per_block) {}

  /// Response lines (without LF) for one received line.
  std::vector<std::string> handle_line(std::string_view line);

 private:
  SimulatedDut& dut_;
  std::size_t block_size_;
  bool configured_ = false;
};

/// In-process transport wired straight into a FirmwareEmulator.
class LoopbackTransport final : public LineTransport {
 public:
  explicit LoopbackTransport(FirmwareEmulator& device) : device_(device) {}

  void write_line(std::string_view line) override;
  std::optional<std::string> read_line(std::chrono::milliseconds timeout) override;

  /// Drops the responses to the next `n` commands, to exercise retries.
  void drop_next_responses(int n) { drop_ = n; }
  std::size_t lines_written() const { return written_; }

 private:
  FirmwareEmulator& device_;
  std::deque<std::string> pending_;
  int drop_ = 0;
  std::size_t written_ = 0;
};

}  // namespace airgap
