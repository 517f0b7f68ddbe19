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

#include "cgstitch/depset.hpp"

#include <array>
#include <deque>
#include <map>
#include <thread>
#include <unordered_map>

#include "cgstitch/fileio.hpp"

namespace cgstitch {

namespace {

using Json = nlohmann::json;

constexpr std::size_t kMaxTreeDepth = 512;

constexpr std::array<std::string_view, 11> kPackagings = {
    "jar", "war", "ear", "rar", "pom", "bundle", "ejb", "aar", "test-jar", "maven-plugin",
    "java-source"};
constexpr std::array<std::string_view, 6> kScopes = {"compile", "provided", "runtime",
                                                     "test",    "system",   "import"};

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& set, std::string_view v) {
  return std::find(set.begin(), set.end(), v) != set.end();
}

[[noreturn]] void bad_tree(const std::string& what) {
  throw Error(ErrorKind::MalformedTree, "malformed dependency tree: " + what);
}

DependencyNode node_from_json(const Json& j, std::size_t depth) {
  if (depth > kMaxTreeDepth) bad_tree("nesting deeper than " + std::to_string(kMaxTreeDepth));
  if (!j.is_object()) bad_tree("a node must be an object");
  auto c = j.find("coordinate");
  if (c == j.end() || !c->is_string()) bad_tree("a node needs a string 'coordinate'");
  DependencyNode node{[&] {
                        try {
                          return parse_lenient_coordinate(c->get<std::string>());
                        } catch (const Error& e) {
                          bad_tree(e.what());
                        }
                      }(),
                      {}};
  if (auto kids = j.find("children"); kids != j.end()) {
    if (!kids->is_array()) bad_tree("'children' must be an array");
    for (const Json& k : *kids) node.children.push_back(node_from_json(k, depth + 1));
  }
  return node;
}

}  // namespace

MavenCoordinate parse_lenient_coordinate(std::string_view text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t colon = text.find(':', start);
    parts.emplace_back(text.substr(start, colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (parts.size() == 4 && contains(kPackagings, parts[2])) {
    return MavenCoordinate(parts[0], parts[1], parts[3]);
  }
  if (parts.size() == 5 && contains(kPackagings, parts[2]) && contains(kScopes, parts[4])) {
    return MavenCoordinate(parts[0], parts[1], parts[3]);
  }
  return parse_coordinate(text);
}

DependencyTree tree_from_json(const Json& j) { return node_from_json(j, 0); }

DependencyTree parse_tree(std::string_view text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) bad_tree("not valid JSON");
  return tree_from_json(j);
}

Json tree_to_json(const DependencyTree& tree) {
  Json kids = Json::array();
  for (const auto& k : tree.children) kids.push_back(tree_to_json(k));
  return {{"coordinate", tree.coordinate.to_string()}, {"children", std::move(kids)}};
}

std::vector<MavenCoordinate> parse_set(std::string_view text) {
  std::vector<MavenCoordinate> out;
  std::map<std::string, std::size_t> seen;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? nl : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || line[first] == '#') continue;
    line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
    MavenCoordinate c = [&] {
      try {
        return parse_lenient_coordinate(line);
      } catch (const Error& e) {
        bad_tree("line " + std::to_string(line_no) + ": " + e.what());
      }
    }();
    auto [it, fresh] = seen.emplace(c.group_artifact(), line_no);
    if (!fresh) {
      bad_tree("line " + std::to_string(line_no) + ": " + c.group_artifact() +
               " already listed on line " + std::to_string(it->second));
    }
    out.push_back(std::move(c));
  }
  return out;
}

ResolvedSet mediate(const DependencyTree& tree) {
  ResolvedSet out;
  std::unordered_map<std::string, std::size_t> winner_of;  // g:a -> index into entries
  std::vector<MediationEntry> entries;
  std::deque<std::pair<const DependencyNode*, std::size_t>> queue{{&tree, 0}};
  while (!queue.empty()) {
    auto [node, depth] = queue.front();
    queue.pop_front();
    std::string ga = node->coordinate.group_artifact();
    auto it = winner_of.find(ga);
    if (it == winner_of.end()) {
      winner_of.emplace(ga, entries.size());
      entries.push_back({ga, node->coordinate.version(), depth, {}});
      out.coordinates.push_back(node->coordinate);
    } else if (entries[it->second].winner_version != node->coordinate.version()) {
      entries[it->second].losers.push_back({node->coordinate.version(), depth});
    }
    for (const auto& child : node->children) queue.emplace_back(&child, depth + 1);
  }
  for (auto& e : entries) {
    if (!e.losers.empty()) out.mediation_log.push_back(std::move(e));
  }
  return out;
}

Json resolved_to_json(const ResolvedSet& set) {
  Json coords = Json::array();
  for (const auto& c : set.coordinates) coords.push_back(c.to_string());
  Json log = Json::array();
  for (const auto& e : set.mediation_log) {
    Json losers = Json::array();
    for (const auto& l : e.losers) losers.push_back({{"version", l.version}, {"depth", l.depth}});
    log.push_back({{"artifact", e.group_artifact},
                   {"winner", e.winner_version},
                   {"depth", e.winner_depth},
                   {"losers", std::move(losers)}});
  }
  return {{"coordinates", std::move(coords)}, {"mediation", std::move(log)}};
}

ArtifactFetcher::ArtifactFetcher(std::string source, std::optional<std::filesystem::path> cache_dir,
                                 std::shared_ptr<Transport> transport, int max_retries)
    : source_(std::move(source)),
      cache_dir_(std::move(cache_dir)),
      transport_(std::move(transport)),
      max_retries_(max_retries) {
  remote_ = source_.starts_with("http://") || source_.starts_with("https://");
  while (remote_ && source_.size() > 8 && source_.back() == '/') source_.pop_back();
  if (remote_ && !transport_) transport_ = std::make_shared<HttpTransport>();
}

std::filesystem::path ArtifactFetcher::jar_relative_path(const MavenCoordinate& c) {
  return repository_dir(c) / (c.artifact_id() + "-" + c.version() + ".jar");
}

std::vector<std::uint8_t> ArtifactFetcher::fetch_jar(const MavenCoordinate& c) {
  std::filesystem::path rel = jar_relative_path(c);
  if (!remote_) {
    std::filesystem::path p = std::filesystem::path(source_) / rel;
    if (auto bytes = read_binary_file(p)) return std::move(*bytes);
    throw Error(ErrorKind::ArtifactNotFound,
                "artifact " + c.to_string() + " not found at " + p.string());
  }
  if (cache_dir_) {
    if (auto cached = read_binary_file(*cache_dir_ / rel)) return std::move(*cached);
  }
  std::string url = source_ + "/" + rel.generic_string();
  std::string last_failure;
  for (int attempt = 0; attempt <= max_retries_; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(50 * attempt));
    ++network_ops_;
    TransportResponse resp;
    try {
      resp = transport_->get(url);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::TransportError) throw;
      last_failure = e.what();
      continue;
    }
    if (resp.status == 200) {
      if (cache_dir_) write_file_atomically(*cache_dir_ / rel, resp.body);
      return {resp.body.begin(), resp.body.end()};
    }
    if (resp.status == 404) {
      throw Error(ErrorKind::ArtifactNotFound, "artifact " + c.to_string() + " not found at " + url);
    }
    last_failure = "HTTP " + std::to_string(resp.status) + " from " + url;
    bool transient = resp.status >= 500 || resp.status == 408 || resp.status == 429;
    if (!transient) break;
  }
  throw Error(ErrorKind::TransportError, "fetching " + c.to_string() + " failed: " + last_failure);
}

}  // namespace cgstitch
