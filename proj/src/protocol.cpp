#include "airgap/protocol.hpp"

#include <charconv>
#include <limits>
#include <vector>

namespace airgap::protocol {

namespace {

struct Field {
  std::string_view text;
  std::size_t pos;
};

// Splits a line on single spaces after checking the character set. Empty
// fields (double, leading or trailing spaces) are framing errors.
std::vector<Field> split(std::string_view line) {
  if (line.empty()) throw ProtocolError(ProtocolErrc::Framing, 0, "empty line");
  for (std::size_t i = 0; i < line.size(); ++i) {
    const auto c = static_cast<unsigned char>(line[i]);
    if (c < 0x20 || c > 0x7e) throw ProtocolError(ProtocolErrc::Framing, i, "non-printable byte");
  }
  std::vector<Field> fields;
  std::size_t start = 0;
  while (true) {
    const auto sp = line.find(' ', start);
    const auto end = sp == std::string_view::npos ? line.size() : sp;
    if (end == start) throw ProtocolError(ProtocolErrc::Framing, start, "empty field");
    fields.push_back({line.substr(start, end - start), start});
    if (sp == std::string_view::npos) break;
    start = sp + 1;
  }
  return fields;
}

void expect_arity(const std::vector<Field>& f, std::size_t n, std::size_t line_len) {
  if (f.size() != n)
    throw ProtocolError(ProtocolErrc::Arity, f.size() < n ? line_len : f[n].pos,
                        std::string(f[0].text) + " expects " + std::to_string(n - 1) + " argument(s)");
}

std::uint32_t parse_u32(const Field& f) {
  const auto s = f.text;
  if (s.size() > 1 && s[0] == '0') throw ProtocolError(ProtocolErrc::BadField, f.pos, "leading zero");
  std::uint32_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ProtocolError(ProtocolErrc::BadField, f.pos, "expected unsigned integer");
  return v;
}

template <typename T>
T parse_token(const Field& f, std::optional<T> (*parse)(std::string_view), const char* what) {
  auto v = parse(f.text);
  if (!v) throw ProtocolError(ProtocolErrc::BadField, f.pos, std::string("bad ") + what);
  return *v;
}

}  // namespace

ProtocolError::ProtocolError(ProtocolErrc code, std::size_t position, const std::string& what)
    : std::runtime_error(what + " at " + std::to_string(position)), code_(code), position_(position) {}

std::string encode_command(const Command& c) {
  struct Visitor {
    std::string operator()(const Configure& x) const {
      std::string s = "CFG " + std::to_string(x.path);
      s.append(" ").append(token(x.cfg.mode));
      s.append(" ").append(token(x.cfg.pupd));
      s.append(" ").append(token(x.cfg.value));
      s.append(" ").append(token(x.cfg.otype));
      return s;
    }
    std::string operator()(const BlockSize& x) const { return "BLK " + std::to_string(x.samples); }
    std::string operator()(const Sample& x) const {
      return "SMP " + std::to_string(x.n_blocks) + " " + std::to_string(x.rate_hz) + " " + std::to_string(x.ovs);
    }
    std::string operator()(const Identify&) const { return "ID?"; }
    std::string operator()(const Reset&) const { return "RST"; }
  };
  return std::visit(Visitor{}, c);
}

Command decode_command(std::string_view line) {
  const auto f = split(line);
  const auto verb = f[0].text;
  if (verb == "CFG") {
    expect_arity(f, 6, line.size());
    Configure c;
    c.path = parse_u32(f[1]);
    c.cfg.mode = parse_token<GpioMode>(f[2], parse_mode, "mode");
    c.cfg.pupd = parse_token<Pupd>(f[3], parse_pupd, "pupd");
    c.cfg.value = parse_token<OutputValue>(f[4], parse_value, "value");
    c.cfg.otype = parse_token<OutputType>(f[5], parse_otype, "output type");
    return c;
  }
  if (verb == "BLK") {
    expect_arity(f, 2, line.size());
    return BlockSize{parse_u32(f[1])};
  }
  if (verb == "SMP") {
    expect_arity(f, 4, line.size());
    return Sample{parse_u32(f[1]), parse_u32(f[2]), parse_u32(f[3])};
  }
  if (verb == "ID?") {
    expect_arity(f, 1, line.size());
    return Identify{};
  }
  if (verb == "RST") {
    expect_arity(f, 1, line.size());
    return Reset{};
  }
  throw ProtocolError(ProtocolErrc::UnknownVerb, 0, "unknown verb");
}

std::string encode_response(const Response& r) {
  struct Visitor {
    std::string operator()(const Ok&) const { return "OK"; }
    std::string operator()(const Err& x) const { return "ERR " + x.message; }
    std::string operator()(const IdReply& x) const {
      return "ID " + std::to_string(x.n_paths) + " " + std::to_string(x.bits) + " " + std::to_string(x.max_rate) +
             " " + std::to_string(x.version);
    }
    std::string operator()(const DataHeader& x) const { return "DATA " + std::to_string(x.count); }
    std::string operator()(const End&) const { return "END"; }
  };
  return std::visit(Visitor{}, r);
}

Response decode_response(std::string_view line) {
  // ERR carries free text, so it is recognized before field splitting.
  if (line.starts_with("ERR ")) {
    split(line);
    return Err{std::string(line.substr(4))};
  }
  const auto f = split(line);
  const auto verb = f[0].text;
  if (verb == "OK") {
    expect_arity(f, 1, line.size());
    return Ok{};
  }
  if (verb == "END") {
    expect_arity(f, 1, line.size());
    return End{};
  }
  if (verb == "DATA") {
    expect_arity(f, 2, line.size());
    return DataHeader{parse_u32(f[1])};
  }
  if (verb == "ID") {
    expect_arity(f, 5, line.size());
    return IdReply{parse_u32(f[1]), parse_u32(f[2]), parse_u32(f[3]), parse_u32(f[4])};
  }
  throw ProtocolError(ProtocolErrc::UnknownVerb, 0, "unknown response");
}

std::string encode_code(int code) { return std::to_string(code); }

int decode_code(std::string_view line) {
  const auto f = split(line);
  expect_arity(f, 1, line.size());
  const auto v = parse_u32(f[0]);
  if (v > static_cast<std::uint32_t>(std::numeric_limits<int>::max()))
    throw ProtocolError(ProtocolErrc::BadField, 0, "code out of range");
  return static_cast<int>(v);
}

}  // namespace airgap::protocol
