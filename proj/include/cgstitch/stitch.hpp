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
// stitch.hpp -- combining pooled partial call graphs into a full CHA call
// graph, and the whole-program baseline it must agree with.

#ifndef CGSTITCH_STITCH_HPP
#define CGSTITCH_STITCH_HPP

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cgstitch/hierarchy.hpp"
#include "cgstitch/partial.hpp"

namespace cgstitch {

struct UnresolvedSite {
  GlobalMethodId caller;
  std::uint32_t pc = 0;
  CallKind kind = CallKind::Static;
  MethodRef declared_target;
  std::string reason;

  friend bool operator==(const UnresolvedSite&, const UnresolvedSite&) = default;
};

struct DynamicSite {
  GlobalMethodId caller;
  std::uint32_t pc = 0;

  friend bool operator==(const DynamicSite&, const DynamicSite&) = default;
};

struct PhaseStats {
  double pool_ms = 0;
  double uch_ms = 0;
  double stitch_ms = 0;
};

struct FullCG {
  std::set<GlobalMethodId> nodes;
  std::set<Edge> edges;
  // Nodes that are abstract declarations. Edges into them are kept so a
  // virtual call with no concrete target in the set is still accounted for.
  std::set<GlobalMethodId> abstract_methods;
  std::vector<UnresolvedSite> unresolved;  // sorted by caller, pc
  std::vector<DynamicSite> dynamic_sites;  // sorted by caller, pc
  std::vector<std::string> diagnostics;
  PhaseStats stats;
};

// Drops every edge whose target is an abstract declaration.
void remove_abstract_targets(FullCG& cg);

struct StitchOptions {
  // Reuse a part's internal edges where no dependency can change them.
  // Off by default; the output is identical either way.
  bool use_internal_edges = false;
  // Worker threads for call-site resolution; 0 picks the hardware count.
  unsigned jobs = 1;
};

// Re-resolves every call site of every part against `uch`, which must have
// been built from exactly these parts in this order. Sites in classes that
// another part shadows are skipped with a diagnostic. Throws
// Error(PartsMismatch) when the parts do not match the UCH.
FullCG stitch(const UCH& uch, const std::vector<PartialCG>& parts,
              const StitchOptions& options = {});

// Whole-program CHA over the union of classes in classpath order, with its
// own hierarchy construction. Serves as the reference result for stitching.
FullCG monolithic_cha(const std::vector<std::pair<MavenCoordinate, ClassSummary>>& classes);

// Non-dynamic call sites that stitching examined, i.e. those of classes in
// effect.
std::size_t count_effective_sites(const UCH& uch, const std::vector<PartialCG>& parts);

}  // namespace cgstitch

#endif  // CGSTITCH_STITCH_HPP
