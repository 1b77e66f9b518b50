#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "airgap/types.hpp"

// Line-oriented host <-> device protocol. One command or response per LF
// terminated line, single-space separated fields, printable 7-bit ASCII only.
//
//   CFG <path> <mode> <pupd> <val> <otype>   -> OK | ERR <msg>
//   BLK <samples_per_block>                  -> OK | ERR <msg>
//   SMP <n_blocks> <rate_hz> <ovs>           -> DATA <count>, <count> code lines, END
//   ID?                                      -> ID <n_paths> <bits> <max_rate> <version>
//   RST                                      -> OK
//
// Numbers are unsigned decimal without leading zeros, so every accepted line
// is the unique encoding of its decoded value.

namespace airgap::protocol {

inline constexpr int kProtocolVersion = 1;

struct Configure {
  std::uint32_t path = 0;
  PathConfig cfg;
  friend bool operator==(const Configure&, const Configure&) = default;
};
struct BlockSize {
  std::uint32_t samples = 0;
  friend bool operator==(const BlockSize&, const BlockSize&) = default;
};
struct Sample {
  std::uint32_t n_blocks = 0;
  std::uint32_t rate_hz = 0;
  std::uint32_t ovs = 1;
  friend bool operator==(const Sample&, const Sample&) = default;
};
struct Identify {
  friend bool operator==(const Identify&, const Identify&) = default;
};
struct Reset {
  friend bool operator==(const Reset&, const Reset&) = default;
};

using Command = std::variant<Configure, BlockSize, Sample, Identify, Reset>;

struct Ok {
  friend bool operator==(const Ok&, const Ok&) = default;
};
struct Err {
  std::string message;
  friend bool operator==(const Err&, const Err&) = default;
};
struct IdReply {
  std::uint32_t n_paths = 0;
  std::uint32_t bits = 0;
  std::uint32_t max_rate = 0;
  std::uint32_t version = kProtocolVersion;
  friend bool operator==(const IdReply&, const IdReply&) = default;
};
struct DataHeader {
  std::uint32_t count = 0;
  friend bool operator==(const DataHeader&, const DataHeader&) = default;
};
struct End {
  friend bool operator==(const End&, const End&) = default;
};

using Response = std::variant<Ok, Err, IdReply, DataHeader, End>;

enum class ProtocolErrc { Framing, UnknownVerb, Arity, BadField };

class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(ProtocolErrc code, std::size_t position, const std::string& what);
  ProtocolErrc code() const { return code_; }
  /// Byte offset into the offending line.
  std::size_t position() const { return position_; }

 private:
  ProtocolErrc code_;
  std::size_t position_;
};

/// Encoded line without the trailing LF.
std::string encode_command(const Command& c);
Command decode_command(std::string_view line);

std::string encode_response(const Response& r);
Response decode_response(std::string_view line);

std::string encode_code(int code);
/// A data line carrying one ADC code.
int decode_code(std::string_view line);

}  // namespace airgap::protocol
