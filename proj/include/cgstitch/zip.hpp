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

#ifndef CGSTITCH_ZIP_HPP
#define CGSTITCH_ZIP_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cgstitch::zip {

struct Entry {
  std::string name;
  std::uint16_t flags = 0;
  std::uint16_t method = 0;
  std::uint32_t crc32 = 0;
  std::uint64_t compressed_size = 0;
  std::uint64_t uncompressed_size = 0;
  std::uint64_t local_header_offset = 0;
};

// Read-only view over an in-memory ZIP archive, driven by the central
// directory. Zip64 end records are honored. The archive bytes must outlive
// the Archive.
class Archive {
 public:
  // Throws Error(NotAZip) if no valid end-of-central-directory is found.
  explicit Archive(std::span<const std::uint8_t> bytes);

  const std::vector<Entry>& entries() const { return entries_; }

  // Decompresses one entry (stored or deflate) and checks its CRC.
  // Throws Error(NotAZip) for unsupported methods or damaged data.
  std::vector<std::uint8_t> read(const Entry& entry) const;

 private:
  std::span<const std::uint8_t> bytes_;
  std::vector<Entry> entries_;
};

}  // namespace cgstitch::zip

#endif  // CGSTITCH_ZIP_HPP
