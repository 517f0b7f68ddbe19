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

#ifndef CGSTITCH_FILEIO_HPP
#define CGSTITCH_FILEIO_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cgstitch {

// Writes `data` to `path` through a temporary file in the same directory
// and a rename, so readers see the old or the new content, never a mix.
// `before_rename` runs once the temporary file is complete and synced.
// Throws Error(IoError).
void write_file_atomically(const std::filesystem::path& path, std::string_view data,
                           const std::function<void(const std::filesystem::path&)>&
                               before_rename = {});

// Whole-file reads. nullopt when the file does not exist; Error(IoError)
// when it exists but cannot be read.
std::optional<std::string> read_text_file(const std::filesystem::path& path);
std::optional<std::vector<std::uint8_t>> read_binary_file(const std::filesystem::path& path);

}  // namespace cgstitch

#endif  // CGSTITCH_FILEIO_HPP
