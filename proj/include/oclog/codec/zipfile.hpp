#pragma once
// Minimal ZIP container support for table bundles: writes archives with
// stored (uncompressed) entries and fixed metadata so identical content
// yields identical bytes, and reads back archives with stored entries.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "oclog/errors.hpp"

namespace oclog::codec {

namespace zipdetail {

inline std::uint32_t crc32(std::string_view data) {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
    return t;
  }();
  std::uint32_t c = 0xFFFFFFFFu;
  for (unsigned char byte : data) c = table[(c ^ byte) & 0xFF] ^ (c >> 8);
  return c ^ 0xFFFFFFFFu;
}

inline void put16(std::string& out, std::uint16_t v) {
  out += static_cast<char>(v & 0xFF);
  out += static_cast<char>((v >> 8) & 0xFF);
}
inline void put32(std::string& out, std::uint32_t v) {
  put16(out, static_cast<std::uint16_t>(v & 0xFFFF));
  put16(out, static_cast<std::uint16_t>(v >> 16));
}
inline std::uint16_t get16(std::string_view d, std::size_t pos) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(d[pos]) |
                                    (static_cast<unsigned char>(d[pos + 1]) << 8));
}
inline std::uint32_t get32(std::string_view d, std::size_t pos) {
  return static_cast<std::uint32_t>(get16(d, pos)) |
         (static_cast<std::uint32_t>(get16(d, pos + 2)) << 16);
}

}  // namespace zipdetail

// name -> content, iterated in sorted order when writing.
using ZipMembers = std::map<std::string, std::string>;

inline std::string zip_write(const ZipMembers& members) {
  using namespace zipdetail;
  std::string out;
  std::string central;
  // Fixed DOS date 1980-01-01 00:00:00 keeps archives reproducible.
  constexpr std::uint16_t kDosTime = 0;
  constexpr std::uint16_t kDosDate = 0x21;

  for (const auto& [name, data] : members) {
    const std::uint32_t offset = static_cast<std::uint32_t>(out.size());
    const std::uint32_t crc = crc32(data);
    const auto size = static_cast<std::uint32_t>(data.size());

    put32(out, 0x04034b50u);  // local file header
    put16(out, 20);           // version needed
    put16(out, 0);            // flags
    put16(out, 0);            // method: stored
    put16(out, kDosTime);
    put16(out, kDosDate);
    put32(out, crc);
    put32(out, size);
    put32(out, size);
    put16(out, static_cast<std::uint16_t>(name.size()));
    put16(out, 0);  // extra length
    out += name;
    out += data;

    put32(central, 0x02014b50u);  // central directory header
    put16(central, 20);
    put16(central, 20);
    put16(central, 0);
    put16(central, 0);
    put16(central, kDosTime);
    put16(central, kDosDate);
    put32(central, crc);
    put32(central, size);
    put32(central, size);
    put16(central, static_cast<std::uint16_t>(name.size()));
    put16(central, 0);
    put16(central, 0);
    put16(central, 0);
    put16(central, 0);
    put32(central, 0);
    put32(central, offset);
    central += name;
  }

  const auto central_offset = static_cast<std::uint32_t>(out.size());
  const auto central_size = static_cast<std::uint32_t>(central.size());
  out += central;
  put32(out, 0x06054b50u);  // end of central directory
  put16(out, 0);
  put16(out, 0);
  put16(out, static_cast<std::uint16_t>(members.size()));
  put16(out, static_cast<std::uint16_t>(members.size()));
  put32(out, central_size);
  put32(out, central_offset);
  put16(out, 0);
  return out;
}

inline bool looks_like_zip(std::string_view bytes) {
  return bytes.size() >= 4 && bytes.substr(0, 4) == std::string_view("PK\x03\x04", 4);
}

inline ZipMembers zip_read(std::string_view bytes) {
  using namespace zipdetail;
  if (bytes.size() < 22)
    throw CodecError(CodecError::What::MalformedTable, "zip", "archive too small");

  // Locate the end-of-central-directory record from the tail.
  std::size_t eocd = std::string_view::npos;
  const std::size_t scan_start = bytes.size() >= 22 + 65536 ? bytes.size() - 22 - 65536 : 0;
  for (std::size_t i = bytes.size() - 22 + 1; i-- > scan_start;) {
    if (get32(bytes, i) == 0x06054b50u) {
      eocd = i;
      break;
    }
  }
  if (eocd == std::string_view::npos)
    throw CodecError(CodecError::What::MalformedTable, "zip", "missing end-of-central-directory");

  const std::uint16_t count = get16(bytes, eocd + 10);
  std::size_t pos = get32(bytes, eocd + 16);

  ZipMembers members;
  for (std::uint16_t i = 0; i < count; ++i) {
    if (pos + 46 > bytes.size() || get32(bytes, pos) != 0x02014b50u)
      throw CodecError(CodecError::What::MalformedTable, "zip", "corrupt central directory");
    const std::uint16_t method = get16(bytes, pos + 10);
    const std::uint32_t size = get32(bytes, pos + 24);
    const std::uint16_t name_len = get16(bytes, pos + 28);
    const std::uint16_t extra_len = get16(bytes, pos + 30);
    const std::uint16_t comment_len = get16(bytes, pos + 32);
    const std::uint32_t local_offset = get32(bytes, pos + 42);
    const std::string name(bytes.substr(pos + 46, name_len));
    if (method != 0)
      throw CodecError(CodecError::What::MalformedTable, "zip/" + name,
                       "only stored entries are supported");
    if (local_offset + 30 > bytes.size())
      throw CodecError(CodecError::What::MalformedTable, "zip/" + name, "bad local header offset");
    const std::uint16_t lname = get16(bytes, local_offset + 26);
    const std::uint16_t lextra = get16(bytes, local_offset + 28);
    const std::size_t data_pos = local_offset + 30 + lname + lextra;
    if (data_pos + size > bytes.size())
      throw CodecError(CodecError::What::MalformedTable, "zip/" + name, "truncated entry");
    members[name] = std::string(bytes.substr(data_pos, size));
    pos += 46u + name_len + extra_len + comment_len;
  }
  return members;
}

}  // namespace oclog::codec
