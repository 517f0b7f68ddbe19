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
// depset.hpp -- dependency trees, nearest-wins mediation into a classpath
// ordered dependency set, and artifact fetching from a Maven layout.

#ifndef CGSTITCH_DEPSET_HPP
#define CGSTITCH_DEPSET_HPP

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cgstitch/model.hpp"
#include "json.hpp"

namespace cgstitch {

struct DependencyNode {
  MavenCoordinate coordinate;
  std::vector<DependencyNode> children;

  friend bool operator==(const DependencyNode&, const DependencyNode&) = default;
};
using DependencyTree = DependencyNode;

struct MediationLoser {
  std::string version;
  std::size_t depth = 0;

  friend bool operator==(const MediationLoser&, const MediationLoser&) = default;
};

struct MediationEntry {
  std::string group_artifact;
  std::string winner_version;
  std::size_t winner_depth = 0;
  std::vector<MediationLoser> losers;  // discovery order

  friend bool operator==(const MediationEntry&, const MediationEntry&) = default;
};

struct ResolvedSet {
  std::vector<MavenCoordinate> coordinates;  // classpath order
  std::vector<MediationEntry> mediation_log;  // artifacts that had losers

  friend bool operator==(const ResolvedSet&, const ResolvedSet&) = default;
};

// Accepts g:a:v, g:a:packaging:v and g:a:packaging:v:scope, the forms
// printed by Maven's dependency tree. Throws Error(MalformedCoordinate).
MavenCoordinate parse_lenient_coordinate(std::string_view text);

// Parses {"coordinate": "g:a:v", "children": [...]} recursively. Throws
// Error(MalformedTree).
DependencyTree parse_tree(std::string_view text);
DependencyTree tree_from_json(const nlohmann::json& j);
nlohmann::json tree_to_json(const DependencyTree& tree);

// One coordinate per line in classpath order; blank lines and lines
// starting with '#' are ignored. Throws Error(MalformedTree) on a bad line
// or a repeated groupId:artifactId.
std::vector<MavenCoordinate> parse_set(std::string_view text);

// Nearest wins: breadth-first from the root, the first version seen for a
// groupId:artifactId is kept. Siblings are visited in declaration order, so
// equal depths go to the leftmost.
ResolvedSet mediate(const DependencyTree& tree);

nlohmann::json resolved_to_json(const ResolvedSet& set);

struct TransportResponse {
  int status = 0;
  std::string body;
};

// Issues one HTTP GET. Throws Error(TransportError) when no response
// arrives.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual TransportResponse get(const std::string& url) = 0;
};

// Plain HTTP/1.1 via cpp-httplib.
class HttpTransport : public Transport {
 public:
  explicit HttpTransport(std::chrono::milliseconds timeout = std::chrono::seconds(30));
  TransportResponse get(const std::string& url) override;

 private:
  std::chrono::milliseconds timeout_;
};

// Reads <source>/<group path>/<artifact>/<version>/<artifact>-<version>.jar
// from a local directory or an http:// base URL. Remote downloads are
// retried on transient failures and kept in `cache_dir` when one is given.
class ArtifactFetcher {
 public:
  ArtifactFetcher(std::string source, std::optional<std::filesystem::path> cache_dir = {},
                  std::shared_ptr<Transport> transport = nullptr, int max_retries = 2);

  // Throws Error(ArtifactNotFound) or Error(TransportError).
  std::vector<std::uint8_t> fetch_jar(const MavenCoordinate& c);

  bool is_remote() const { return remote_; }
  // Transport requests issued so far.
  std::uint64_t network_ops() const { return network_ops_.load(); }

  static std::filesystem::path jar_relative_path(const MavenCoordinate& c);

 private:
  std::string source_;
  bool remote_ = false;
  std::optional<std::filesystem::path> cache_dir_;
  std::shared_ptr<Transport> transport_;
  int max_retries_;
  std::atomic<std::uint64_t> network_ops_{0};
};

}  // namespace cgstitch

#endif  // CGSTITCH_DEPSET_HPP
