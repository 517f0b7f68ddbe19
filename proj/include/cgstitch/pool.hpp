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
// pool.hpp -- the CG pool: partial call graphs on disk, one file per Maven
// coordinate, with request accounting and single-flight generation.
//
// Layout: <root>/<groupId as path>/<artifactId>/<version>/partial-cg.json
// Counters persist across processes in <root>/pool-stats.json.

#ifndef CGSTITCH_POOL_HPP
#define CGSTITCH_POOL_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <future>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cgstitch/fileio.hpp"
#include "cgstitch/partial.hpp"
#include "json.hpp"

namespace cgstitch {

struct PoolStats {
  std::uint64_t requests = 0;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t generations = 0;

  std::uint64_t avoided() const { return requests > generations ? requests - generations : 0; }

  PoolStats& operator+=(const PoolStats& o);
  friend PoolStats operator-(PoolStats a, const PoolStats& b);
  friend bool operator==(const PoolStats&, const PoolStats&) = default;
};

// {"requests", "hits", "misses", "generations", "avoided"}.
nlohmann::json stats_json(const PoolStats& s);

class Pool {
 public:
  using Generator = std::function<PartialCG(const MavenCoordinate&)>;

  explicit Pool(std::filesystem::path root);
  // Flushes counters to disk.
  ~Pool();
  Pool(const Pool&) = delete;
  Pool& operator=(const Pool&) = delete;

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path entry_path(const MavenCoordinate& c) const;

  // Stores `pcg`, replacing any entry. Throws Error(IoError).
  void put(const PartialCG& pcg);

  // Counts one request and a hit or a miss. An entry written by another
  // format version is a miss with a diagnostic. Throws Error(CorruptEntry).
  std::optional<PartialCG> get(const MavenCoordinate& c);

  // Reads an entry without touching the counters.
  std::optional<PartialCG> peek(const MavenCoordinate& c) const;

  // Returns the pooled entry, generating and storing it on a miss. At most
  // one generation per coordinate runs at a time in this process; callers
  // arriving meanwhile wait for it and share its result or its exception.
  // Failed generations are not remembered.
  PartialCG ensure(const MavenCoordinate& c, const Generator& generate);

  // Accounts for an entry generated outside ensure() and stored with put():
  // one request, one miss, one generation.
  void record_generation();

  // Totals across every process that used this pool root.
  PoolStats stats() const;
  // Counters of this Pool object only.
  PoolStats session_stats() const;
  // Merges this object's unflushed counters into pool-stats.json.
  void flush_stats();

  std::vector<std::string> take_diagnostics();

  // Test hook run between writing an entry's temporary file and renaming it.
  void set_before_rename_hook(std::function<void(const std::filesystem::path&)> hook);

 private:
  std::optional<PartialCG> load(const MavenCoordinate& c) const;
  void count(bool hit, bool generated);
  PoolStats read_persisted() const;

  std::filesystem::path root_;

  mutable std::mutex mu_;  // guards everything below
  PoolStats session_;
  PoolStats unflushed_;
  mutable std::vector<std::string> diagnostics_;
  std::function<void(const std::filesystem::path&)> before_rename_;
  std::map<MavenCoordinate, std::shared_future<PartialCG>> flights_;
};

}  // namespace cgstitch

#endif  // CGSTITCH_POOL_HPP
