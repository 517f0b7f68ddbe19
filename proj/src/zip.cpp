// Copyright 2026 The cgstitch Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// zip.cpp -- central-directory ZIP reader. Inflate is delegated to zlib.
//
// Format reference: PKWARE APPNOTE.TXT, sections 4.3.7 (local header),
// 4.3.12 (central directory header), 4.3.14-16 (zip64 / end records).

#include "cgstitch/zip.hpp"

#include <zlib.h>

#include <algorithm>
#include <limits>

#include "cgstitch/error.hpp"

namespace cgstitch::zip {

namespace {

constexpr std::uint32_t kLocalHeaderSig = 0x04034b50;
constexpr std::uint32_t kCentralHeaderSig = 0x02014b50;
constexpr std::uint32_t kEndSig = 0x06054b50;
constexpr std::uint32_t kZip64EndSig = 0x06064b50;
constexpr std::uint32_t kZip64LocatorSig = 0x07064b50;
constexpr std::size_t kEndRecordSize = 22;

[[noreturn]] void fail(const std::string& what) {
  throw Error(ErrorKind::NotAZip, "zip: " + what);
}

// Little-endian reads with bounds checks.
struct Reader {
  std::span<const std::uint8_t> data;

  void need(std::uint64_t pos, std::uint64_t n) const {
    if (pos > data.size() || n > data.size() - pos) fail("truncated archive");
  }
  std::uint16_t u16(std::uint64_t pos) const {
    need(pos, 2);
    return static_cast<std::uint16_t>(data[pos] | (data[pos + 1] << 8));
  }
  std::uint32_t u32(std::uint64_t pos) const {
    need(pos, 4);
    return static_cast<std::uint32_t>(data[pos]) |
           (static_cast<std::uint32_t>(data[pos + 1]) << 8) |
           (static_cast<std::uint32_t>(data[pos + 2]) << 16) |
           (static_cast<std::uint32_t>(data[pos + 3]) << 24);
  }
  std::uint64_t u64(std::uint64_t pos) const {
    return static_cast<std::uint64_t>(u32(pos)) |
           (static_cast<std::uint64_t>(u32(pos + 4)) << 32);
  }
};

}  // namespace

Archive::Archive(std::span<const std::uint8_t> bytes) : bytes_(bytes) {
  Reader r{bytes};
  if (bytes.size() < kEndRecordSize) fail("too small to be a zip archive");

  // The end record sits at most 64 KiB (comment) from the end.
  std::size_t end_pos = std::string::npos;
  std::size_t lowest = bytes.size() > kEndRecordSize + 0xFFFF
                           ? bytes.size() - kEndRecordSize - 0xFFFF
                           : 0;
  for (std::size_t pos = bytes.size() - kEndRecordSize;; --pos) {
    if (r.u32(pos) == kEndSig) {
      end_pos = pos;
      break;
    }
    if (pos == lowest) break;
  }
  if (end_pos == std::string::npos) fail("end of central directory not found");

  std::uint64_t count = r.u16(end_pos + 10);
  std::uint64_t cd_size = r.u32(end_pos + 12);
  std::uint64_t cd_offset = r.u32(end_pos + 16);

  if (count == 0xFFFF || cd_size == 0xFFFFFFFF || cd_offset == 0xFFFFFFFF) {
    if (end_pos < 20 || r.u32(end_pos - 20) != kZip64LocatorSig) {
      fail("zip64 locator missing");
    }
    std::uint64_t z64 = r.u64(end_pos - 20 + 8);
    if (r.u32(z64) != kZip64EndSig) fail("bad zip64 end record");
    count = r.u64(z64 + 32);
    cd_size = r.u64(z64 + 40);
    cd_offset = r.u64(z64 + 48);
  }
  r.need(cd_offset, cd_size);

  std::uint64_t pos = cd_offset;
  entries_.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, 1 << 20)));
  for (std::uint64_t i = 0; i < count; ++i) {
    if (r.u32(pos) != kCentralHeaderSig) fail("bad central directory header");
    Entry e;
    e.flags = r.u16(pos + 8);
    e.method = r.u16(pos + 10);
    e.crc32 = r.u32(pos + 16);
    e.compressed_size = r.u32(pos + 20);
    e.uncompressed_size = r.u32(pos + 24);
    std::uint16_t name_len = r.u16(pos + 28);
    std::uint16_t extra_len = r.u16(pos + 30);
    std::uint16_t comment_len = r.u16(pos + 32);
    e.local_header_offset = r.u32(pos + 42);
    r.need(pos + 46, name_len);
    e.name.assign(reinterpret_cast<const char*>(bytes.data() + pos + 46), name_len);

    // Zip64 extended information: fields appear only for saturated values.
    std::uint64_t extra = pos + 46 + name_len;
    std::uint64_t extra_end = extra + extra_len;
    r.need(extra, extra_len);
    while (extra + 4 <= extra_end) {
      std::uint16_t id = r.u16(extra);
      std::uint16_t size = r.u16(extra + 2);
      if (id == 0x0001) {
        std::uint64_t p = extra + 4;
        if (e.uncompressed_size == 0xFFFFFFFF) { e.uncompressed_size = r.u64(p); p += 8; }
        if (e.compressed_size == 0xFFFFFFFF) { e.compressed_size = r.u64(p); p += 8; }
        if (e.local_header_offset == 0xFFFFFFFF) { e.local_header_offset = r.u64(p); }
      }
      extra += 4 + size;
    }
    entries_.push_back(std::move(e));
    pos += 46 + name_len + extra_len + comment_len;
  }
}

std::vector<std::uint8_t> Archive::read(const Entry& e) const {
  Reader r{bytes_};
  if (e.flags & 0x0001) fail(e.name + ": encrypted entries are not supported");
  if (r.u32(e.local_header_offset) != kLocalHeaderSig) {
    fail(e.name + ": bad local header");
  }
  std::uint64_t data = e.local_header_offset + 30 + r.u16(e.local_header_offset + 26) +
                       r.u16(e.local_header_offset + 28);
  r.need(data, e.compressed_size);
  if (e.uncompressed_size > std::numeric_limits<std::uint32_t>::max()) {
    fail(e.name + ": entry too large");
  }
  const std::uint8_t* src = bytes_.data() + data;

  std::vector<std::uint8_t> out;
  if (e.method == 0) {
    if (e.compressed_size != e.uncompressed_size) fail(e.name + ": stored size mismatch");
    out.assign(src, src + e.compressed_size);
  } else if (e.method == 8) {
    out.resize(static_cast<std::size_t>(e.uncompressed_size));
    z_stream zs{};
    if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) fail("inflateInit2 failed");
    zs.next_in = const_cast<Bytef*>(src);
    zs.avail_in = static_cast<uInt>(e.compressed_size);
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    int rc = inflate(&zs, Z_FINISH);
    std::uint64_t produced = zs.total_out;
    inflateEnd(&zs);
    if (rc != Z_STREAM_END || produced != e.uncompressed_size) {
      fail(e.name + ": corrupt deflate stream");
    }
  } else {
    fail(e.name + ": unsupported compression method " + std::to_string(e.method));
  }
  auto crc = static_cast<std::uint32_t>(
      crc32(0L, out.empty() ? Z_NULL : out.data(), static_cast<uInt>(out.size())));
  if (crc != e.crc32) fail(e.name + ": CRC mismatch");
  return out;
}

}  // namespace cgstitch::zip
