#include "airgap/serial_backend.hpp"

#include <algorithm>

namespace airgap {

using namespace protocol;

namespace {

BackendError from_device_error(const Err& e) {
  const auto& m = e.message;
  if (m.starts_with("unknown path")) return {BackendErrc::UnknownPath, m};
  if (m.starts_with("unsupported")) return {BackendErrc::Unsupported, m};
  if (m.starts_with("not configured")) return {BackendErrc::NotConfigured, m};
  return {BackendErrc::Device, m};
}

}  // namespace

std::string SerialBackend::read_or_throw() {
  auto line = transport_.read_line(options_.response_timeout);
  if (!line) throw BackendError(BackendErrc::Timeout, "timeout waiting for device");
  return *line;
}

Response SerialBackend::transact(const Command& command) {
  const auto line = encode_command(command);
  for (int attempt = 0;; ++attempt) {
    transport_.write_line(line);
    if (auto reply = transport_.read_line(options_.response_timeout)) {
      try {
        return decode_response(*reply);
      } catch (const ProtocolError& e) {
        throw BackendError(BackendErrc::Protocol, e.what());
      }
    }
    if (attempt >= options_.retries)
      throw BackendError(BackendErrc::Timeout, "no response to '" + line + "' after retries");
  }
}

void SerialBackend::expect_ok(const Response& r) {
  if (const auto* e = std::get_if<Err>(&r)) throw from_device_error(*e);
  if (!std::holds_alternative<Ok>(r)) throw BackendError(BackendErrc::Protocol, "expected OK");
}

DutDescriptor SerialBackend::descriptor() {
  if (descriptor_) return *descriptor_;
  const auto r = transact(Identify{});
  if (const auto* e = std::get_if<Err>(&r)) throw from_device_error(*e);
  const auto* id = std::get_if<IdReply>(&r);
  if (!id) throw BackendError(BackendErrc::Protocol, "expected ID reply");
  if (id->version != kProtocolVersion)
    throw BackendError(BackendErrc::Protocol, "protocol version " + std::to_string(id->version) + " not supported");
  DutDescriptor d;
  d.n_paths = static_cast<int>(id->n_paths);
  d.resolution_bits = static_cast<int>(id->bits);
  d.max_sample_rate_hz = id->max_rate;
  descriptor_ = d;
  return d;
}

void SerialBackend::configure(const ReceptionPathId& path, const PathConfig& cfg, const AdcConfig& adc) {
  const auto d = descriptor();
  if (path.index < 0 || path.index >= d.n_paths)
    throw BackendError(BackendErrc::UnknownPath, "unknown path " + std::to_string(path.index));
  check_adc_capabilities(d, adc);
  expect_ok(transact(Configure{static_cast<std::uint32_t>(path.index), cfg}));
  expect_ok(transact(BlockSize{static_cast<std::uint32_t>(adc.samples_per_block)}));
  adc_ = adc;
  path_ = path.index;
  cfg_ = cfg;
}

AdcTrace SerialBackend::capture(std::size_t n_blocks) {
  if (!adc_) throw BackendError(BackendErrc::NotConfigured, "capture before configure");
  const auto r = transact(Sample{static_cast<std::uint32_t>(n_blocks), adc_->sample_rate_hz,
                                 static_cast<std::uint32_t>(adc_->oversampling_ratio)});
  if (const auto* e = std::get_if<Err>(&r)) throw from_device_error(*e);
  const auto* header = std::get_if<DataHeader>(&r);
  if (!header) throw BackendError(BackendErrc::Protocol, "expected DATA");
  if (header->count != n_blocks * adc_->samples_per_block)
    throw BackendError(BackendErrc::Protocol, "unexpected sample count " + std::to_string(header->count));

  AdcTrace trace;
  trace.config = *adc_;
  trace.meta.path = path_;
  trace.meta.config = cfg_;
  trace.samples.reserve(header->count);
  try {
    for (std::uint32_t i = 0; i < header->count; ++i) trace.samples.push_back(decode_code(read_or_throw()));
    if (!std::holds_alternative<End>(decode_response(read_or_throw())))
      throw BackendError(BackendErrc::Protocol, "expected END");
  } catch (const ProtocolError& e) {
    throw BackendError(BackendErrc::Protocol, e.what());
  }
  return trace;
}

void SerialBackend::reset() {
  expect_ok(transact(Reset{}));
  adc_.reset();
}

std::vector<std::string> FirmwareEmulator::handle_line(std::string_view line) {
  Command cmd;
  try {
    cmd = decode_command(line);
  } catch (const ProtocolError& e) {
    return {encode_response(Err{e.what()})};
  }

  struct Visitor {
    FirmwareEmulator& fw;

    std::vector<std::string> operator()(const Configure& c) {
      if (c.path >= static_cast<std::uint32_t>(fw.dut_.descriptor().n_paths))
        return {encode_response(Err{"unknown path " + std::to_string(c.path)})};
      auto adc = fw.dut_.adc();
      adc.samples_per_block = fw.block_size_;
      fw.dut_.configure(static_cast<int>(c.path), c.cfg, adc);
      fw.configured_ = true;
      return {encode_response(Ok{})};
    }
    std::vector<std::string> operator()(const BlockSize& b) {
      if (b.samples == 0) return {encode_response(Err{"unsupported block size 0"})};
      fw.block_size_ = b.samples;
      auto adc = fw.dut_.adc();
      adc.samples_per_block = b.samples;
      fw.dut_.set_adc(adc);
      return {encode_response(Ok{})};
    }
    std::vector<std::string> operator()(const Sample& s) {
      if (!fw.configured_) return {encode_response(Err{"not configured"})};
      auto adc = fw.dut_.adc();
      adc.sample_rate_hz = s.rate_hz;
      adc.oversampling_ratio = static_cast<int>(std::min<std::uint32_t>(s.ovs, 1u << 30));
      adc.samples_per_block = fw.block_size_;
      try {
        check_adc_capabilities(fw.dut_.descriptor(), adc);
      } catch (const BackendError& e) {
        return {encode_response(Err{e.what()})};
      }
      fw.dut_.set_adc(adc);
      const auto trace = fw.dut_.capture(s.n_blocks);
      std::vector<std::string> out;
      out.reserve(trace.samples.size() + 2);
      out.push_back(encode_response(DataHeader{static_cast<std::uint32_t>(trace.samples.size())}));
      for (int code : trace.samples) out.push_back(encode_code(code));
      out.push_back(encode_response(End{}));
      return out;
    }
    std::vector<std::string> operator()(const Identify&) {
      const auto& d = fw.dut_.descriptor();
      return {encode_response(IdReply{static_cast<std::uint32_t>(d.n_paths),
                                      static_cast<std::uint32_t>(d.resolution_bits), d.max_sample_rate_hz,
                                      kProtocolVersion})};
    }
    std::vector<std::string> operator()(const Reset&) {
      fw.configured_ = false;
      return {encode_response(Ok{})};
    }
  };
  return std::visit(Visitor{*this}, cmd);
}

void LoopbackTransport::write_line(std::string_view line) {
  ++written_;
  auto replies = device_.handle_line(line);
  if (drop_ > 0) {
    --drop_;
    return;
  }
  pending_.insert(pending_.end(), std::make_move_iterator(replies.begin()), std::make_move_iterator(replies.end()));
}

std::optional<std::string> LoopbackTransport::read_line(std::chrono::milliseconds) {
  if (pending_.empty()) return std::nullopt;
  auto line = std::move(pending_.front());
  pending_.pop_front();
  return line;
}

}  // namespace airgap
