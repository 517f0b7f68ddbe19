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


// Brute-force reference for nearest-wins mediation: enumerate every node
// with its depth and child-index path, then pick per artifact the minimal
// depth and, among equal depths, the lexicographically smallest path.

#ifndef CGSTITCH_TEST_MEDIATION_ORACLE_HPP
#define CGSTITCH_TEST_MEDIATION_ORACLE_HPP

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "cgstitch/depset.hpp"

namespace cgstitch::testing {

struct Occurrence {
  std::size_t depth;
  std::vector<std::size_t> path;
  MavenCoordinate coordinate;
};

inline void collect(const DependencyNode& n, std::vector<std::size_t>& path,
                    std::vector<Occurrence>& out) {
  out.push_back({path.size(), path, n.coordinate});
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    path.push_back(i);
    collect(n.children[i], path, out);
    path.pop_back();
  }
}

inline ResolvedSet oracle_mediate(const DependencyTree& tree) {
  std::vector<Occurrence> all;
  std::vector<std::size_t> path;
  collect(tree, path, all);
  auto before = [](const Occurrence& a, const Occurrence& b) {
    return std::tie(a.depth, a.path) < std::tie(b.depth, b.path);
  };
  std::map<std::string, std::vector<Occurrence>> by_artifact;
  for (auto& o : all) by_artifact[o.coordinate.group_artifact()].push_back(o);
  std::vector<std::pair<Occurrence, MediationEntry>> winners;
  for (auto& [ga, occ] : by_artifact) {
    Occurrence best = *std::min_element(occ.begin(), occ.end(), before);
    MediationEntry entry{ga, best.coordinate.version(), best.depth, {}};
    std::sort(occ.begin(), occ.end(), before);
    for (const auto& o : occ) {
      if (o.coordinate.version() != best.coordinate.version()) {
        entry.losers.push_back({o.coordinate.version(), o.depth});
      }
    }
    winners.emplace_back(best, std::move(entry));
  }
  std::sort(winners.begin(), winners.end(),
            [&](const auto& a, const auto& b) { return before(a.first, b.first); });
  ResolvedSet out;
  for (auto& [o, e] : winners) {
    out.coordinates.push_back(o.coordinate);
    if (!e.losers.empty()) out.mediation_log.push_back(std::move(e));
  }
  return out;
}

// Random tree over a small artifact alphabet so conflicts are frequent.
inline DependencyTree random_tree(std::mt19937& rng, int max_nodes) {
  DependencyTree root{MavenCoordinate("org.r", "root", "1"), {}};
  std::vector<std::pair<DependencyNode*, int>> frontier{{&root, 0}};
  int budget = std::uniform_int_distribution<int>(1, max_nodes)(rng);
  // Grow breadth-first by appending children; pointers stay valid because
  // each node's children are reserved before being referenced.
  std::size_t next = 0;
  while (next < frontier.size() && budget > 0) {
    auto [node, depth] = frontier[next++];
    int kids = std::uniform_int_distribution<int>(0, depth < 6 ? 4 : 0)(rng);
    kids = std::min(kids, budget);
    node->children.reserve(static_cast<std::size_t>(kids));
    for (int k = 0; k < kids; ++k) {
      std::string artifact(1, static_cast<char>('A' + rng() % 6));
      std::string version = std::to_string(1 + rng() % 3);
      node->children.push_back({MavenCoordinate("org.r", artifact, version), {}});
      --budget;
    }
    for (auto& child : node->children) frontier.emplace_back(&child, depth + 1);
  }
  return root;
}

}  // namespace cgstitch::testing

#endif  // CGSTITCH_TEST_MEDIATION_ORACLE_HPP
