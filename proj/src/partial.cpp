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

#include "cgstitch/partial.hpp"

#include <algorithm>
#include <tuple>

#include "cgstitch/hierarchy.hpp"
#include "cgstitch/stitch.hpp"

namespace cgstitch {

ClassRecord to_class_record(const ClassSummary& summary) {
  ClassRecord r;
  r.super_name = summary.super_name;
  r.interfaces = summary.interfaces;
  r.is_interface = summary.is_interface;
  r.is_abstract = summary.is_abstract;
  r.is_final = summary.is_final;
  for (const MethodSummary& m : summary.methods) {
    r.methods.emplace(MethodKey{m.name, m.descriptor},
                      MethodFlags{m.is_static, m.is_abstract, m.is_private, m.is_final});
  }
  return r;
}

bool call_site_less(const PendingCallSite& a, const PendingCallSite& b) {
  return std::tie(a.caller_owner, a.caller_name, a.caller_descriptor, a.site.pc) <
         std::tie(b.caller_owner, b.caller_name, b.caller_descriptor, b.site.pc);
}

std::vector<Edge> compute_internal_edges(const PartialCG& pcg) {
  std::vector<PartialCG> alone{pcg};
  alone.front().internal_edges.clear();
  UCH uch = build_uch(alone);
  FullCG cg = stitch(uch, alone);
  std::vector<Edge> out;
  for (const Edge& e : cg.edges) {
    if (!e.target.is_phantom()) out.push_back(e);
  }
  return out;  // already sorted: std::set order
}

PartialCG build_partial_cg(const MavenCoordinate& coordinate,
                           const std::vector<ClassSummary>& classes) {
  PartialCG pcg{coordinate, {}, {}, {}, kPartialFormatVersion};
  for (const ClassSummary& cs : classes) {
    if (!pcg.classes.emplace(cs.name, to_class_record(cs)).second) {
      throw Error(ErrorKind::DuplicateClassInPackage,
                  "class " + cs.name.str() + " is defined twice in " + coordinate.to_string());
    }
    for (const MethodSummary& m : cs.methods) {
      for (const CallSite& s : m.call_sites) {
        pcg.call_sites.push_back({cs.name, m.name, m.descriptor, s});
      }
    }
  }
  std::sort(pcg.call_sites.begin(), pcg.call_sites.end(), call_site_less);
  pcg.internal_edges = compute_internal_edges(pcg);
  return pcg;
}

}  // namespace cgstitch
