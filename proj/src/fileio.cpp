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

#include "cgstitch/fileio.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>

#include "cgstitch/error.hpp"

namespace cgstitch {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void io_error(const std::string& what) {
  throw Error(ErrorKind::IoError, what + ": " + std::strerror(errno));
}

template <class Container>
std::optional<Container> read_file(const fs::path& p) {
  int fd = ::open(p.c_str(), O_RDONLY | O_CLOEXEC);
  if (fd < 0) {
    // Decided from this open's errno alone: a concurrent rename may create
    // the file right after.
    if (errno == ENOENT || errno == ENOTDIR) return std::nullopt;
    io_error("cannot open " + p.string());
  }
  Container data;
  char buf[1 << 16];
  while (true) {
    ssize_t n = ::read(fd, buf, sizeof buf);
    if (n < 0) {
      if (errno == EINTR) continue;
      int saved = errno;
      ::close(fd);
      errno = saved;
      io_error("cannot read " + p.string());
    }
    if (n == 0) break;
    data.insert(data.end(), buf, buf + n);
  }
  ::close(fd);
  return data;
}

}  // namespace

std::optional<std::string> read_text_file(const fs::path& path) {
  return read_file<std::string>(path);
}

std::optional<std::vector<std::uint8_t>> read_binary_file(const fs::path& path) {
  return read_file<std::vector<std::uint8_t>>(path);
}

void write_file_atomically(const fs::path& path, std::string_view data,
                           const std::function<void(const fs::path&)>& before_rename) {
  static std::atomic<std::uint64_t> counter{0};
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) {
    throw Error(ErrorKind::IoError,
                "cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);

  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_EXCL | O_CLOEXEC, 0644);
  if (fd < 0) io_error("cannot create " + tmp.string());
  const char* p = data.data();
  std::size_t left = data.size();
  while (left > 0) {
    ssize_t n = ::write(fd, p, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      int saved = errno;
      ::close(fd);
      fs::remove(tmp, ec);
      errno = saved;
      io_error("cannot write " + tmp.string());
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) {
    int saved = errno;
    fs::remove(tmp, ec);
    errno = saved;
    io_error("cannot flush " + tmp.string());
  }
  if (before_rename) before_rename(tmp);
  if (::rename(tmp.c_str(), path.c_str()) != 0) {
    int saved = errno;
    fs::remove(tmp, ec);
    errno = saved;
    io_error("cannot rename " + tmp.string() + " to " + path.string());
  }
}

}  // namespace cgstitch
