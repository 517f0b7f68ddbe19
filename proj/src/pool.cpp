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

#include "cgstitch/pool.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "cgstitch/codec.hpp"

namespace cgstitch {

namespace fs = std::filesystem;

namespace {

constexpr const char* kEntryFile = "partial-cg.json";
constexpr const char* kStatsFile = "pool-stats.json";
constexpr const char* kStatsLock = ".pool-stats.lock";

[[noreturn]] void io_error(const std::string& what) {
  throw Error(ErrorKind::IoError, what + ": " + std::strerror(errno));
}

// Exclusive advisory lock held for the lifetime of the object.
class FileLock {
 public:
  explicit FileLock(const fs::path& p) {
    fd_ = ::open(p.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) io_error("cannot open lock file " + p.string());
    while (::flock(fd_, LOCK_EX) != 0) {
      if (errno != EINTR) {
        ::close(fd_);
        io_error("cannot lock " + p.string());
      }
    }
  }
  ~FileLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_ = -1;
};

}  // namespace

Json stats_json(const PoolStats& s) {
  return {{"requests", s.requests},
          {"hits", s.hits},
          {"misses", s.misses},
          {"generations", s.generations},
          {"avoided", s.avoided()}};
}

PoolStats& PoolStats::operator+=(const PoolStats& o) {
  requests += o.requests;
  hits += o.hits;
  misses += o.misses;
  generations += o.generations;
  return *this;
}

PoolStats operator-(PoolStats a, const PoolStats& b) {
  a.requests -= b.requests;
  a.hits -= b.hits;
  a.misses -= b.misses;
  a.generations -= b.generations;
  return a;
}

Pool::Pool(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create pool " + root_.string() + ": " + ec.message());
}

Pool::~Pool() {
  try {
    flush_stats();
  } catch (...) {
    // Destructors must not throw; counters of this session are lost.
  }
}

fs::path Pool::entry_path(const MavenCoordinate& c) const {
  return root_ / repository_dir(c) / kEntryFile;
}

void Pool::put(const PartialCG& pcg) {
  std::function<void(const fs::path&)> hook;
  {
    std::lock_guard lock(mu_);
    hook = before_rename_;
  }
  write_file_atomically(entry_path(pcg.coordinate), serialize_partial(pcg), hook);
}

std::optional<PartialCG> Pool::load(const MavenCoordinate& c) const {
  fs::path p = entry_path(c);
  auto text = read_text_file(p);
  if (!text) return std::nullopt;
  Json j = Json::parse(*text, nullptr, false);
  if (j.is_discarded()) {
    throw Error(ErrorKind::CorruptEntry, "pool entry " + p.string() + " is not valid JSON");
  }
  if (j.is_object() && j.contains("formatVersion") &&
      j["formatVersion"] != Json(kPartialFormatVersion)) {
    std::lock_guard lock(mu_);
    diagnostics_.push_back("pool entry " + p.string() + " has formatVersion " +
                           j["formatVersion"].dump() + ", expected " +
                           std::to_string(kPartialFormatVersion) + "; treated as missing");
    return std::nullopt;
  }
  PartialCG pcg = [&] {
    try {
      return partial_from_json(j);
    } catch (const Error& e) {
      throw Error(ErrorKind::CorruptEntry, "pool entry " + p.string() + ": " + e.what());
    }
  }();
  if (pcg.coordinate != c) {
    throw Error(ErrorKind::CorruptEntry, "pool entry " + p.string() + " holds " +
                                             pcg.coordinate.to_string());
  }
  return pcg;
}

std::optional<PartialCG> Pool::peek(const MavenCoordinate& c) const { return load(c); }

void Pool::count(bool hit, bool generated) {
  std::lock_guard lock(mu_);
  for (PoolStats* s : {&session_, &unflushed_}) {
    ++s->requests;
    ++(hit ? s->hits : s->misses);
    if (generated) ++s->generations;
  }
}

std::optional<PartialCG> Pool::get(const MavenCoordinate& c) {
  std::optional<PartialCG> out;
  try {
    out = load(c);
  } catch (...) {
    count(false, false);
    throw;
  }
  count(out.has_value(), false);
  return out;
}

PartialCG Pool::ensure(const MavenCoordinate& c, const Generator& generate) {
  auto lookup = [&] {
    try {
      return load(c);
    } catch (...) {
      count(false, false);
      throw;
    }
  };
  if (auto hit = lookup()) {
    count(true, false);
    return std::move(*hit);
  }

  std::promise<PartialCG> promise;
  {
    std::unique_lock lock(mu_);
    auto it = flights_.find(c);
    if (it != flights_.end()) {
      std::shared_future<PartialCG> flight = it->second;
      lock.unlock();
      count(false, false);
      return flight.get();
    }
    flights_.emplace(c, promise.get_future().share());
  }
  auto land = [&] {
    std::lock_guard lock(mu_);
    flights_.erase(c);
  };

  // A flight for `c` may have finished between the lookup above and
  // registering ours.
  std::optional<PartialCG> again;
  try {
    again = lookup();
  } catch (...) {
    promise.set_exception(std::current_exception());
    land();
    throw;
  }
  if (again) {
    count(true, false);
    promise.set_value(*again);
    land();
    return std::move(*again);
  }

  try {
    PartialCG pcg = generate(c);
    if (pcg.coordinate != c) {
      throw Error(ErrorKind::PartsMismatch, "generator for " + c.to_string() + " produced " +
                                                pcg.coordinate.to_string());
    }
    put(pcg);
    count(false, true);
    promise.set_value(pcg);
    land();
    return pcg;
  } catch (...) {
    count(false, false);
    promise.set_exception(std::current_exception());
    land();
    throw;
  }
}

void Pool::record_generation() { count(false, true); }

PoolStats Pool::read_persisted() const {
  auto text = read_text_file(root_ / kStatsFile);
  if (!text) return {};
  Json j = Json::parse(*text, nullptr, false);
  auto num = [&](const char* key) -> std::uint64_t {
    if (!j.is_object() || !j.contains(key) || !j[key].is_number_unsigned()) {
      throw Error(ErrorKind::CorruptEntry, "pool stats file has no valid '" + std::string(key) + "'");
    }
    return j[key].get<std::uint64_t>();
  };
  return {num("requests"), num("hits"), num("misses"), num("generations")};
}

PoolStats Pool::stats() const {
  std::lock_guard lock(mu_);
  PoolStats total = read_persisted();
  total += unflushed_;
  return total;
}

PoolStats Pool::session_stats() const {
  std::lock_guard lock(mu_);
  return session_;
}

void Pool::flush_stats() {
  std::lock_guard lock(mu_);
  if (unflushed_ == PoolStats{}) return;
  FileLock file_lock(root_ / kStatsLock);
  PoolStats total = read_persisted();
  total += unflushed_;
  write_file_atomically(root_ / kStatsFile, dump_canonical(stats_json(total), 2) + "\n");
  unflushed_ = {};
}

std::vector<std::string> Pool::take_diagnostics() {
  std::lock_guard lock(mu_);
  return std::exchange(diagnostics_, {});
}

void Pool::set_before_rename_hook(std::function<void(const fs::path&)> hook) {
  std::lock_guard lock(mu_);
  before_rename_ = std::move(hook);
}

}  // namespace cgstitch
