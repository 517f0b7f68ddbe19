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
// Whole-program CHA. Deliberately naive: one flat class table, ancestor
// sets by brute force, subtypes by scanning every class. Only the kind
// rules are shared with the stitcher.

#include <algorithm>
#include <map>
#include <set>

#include "cgstitch/kind_rules.hpp"
#include "cgstitch/stitch.hpp"

namespace cgstitch {

namespace {

struct Definition {
  MavenCoordinate coordinate;
  const ClassSummary* summary;
  ClassRecord record;
};

class FlatHierarchy {
 public:
  explicit FlatHierarchy(std::map<ClassName, Definition> defs) : defs_(std::move(defs)) {
    for (const auto& [name, def] : defs_) {
      if (ancestors(name).count(name)) {
        throw Error(ErrorKind::HierarchyCycle, "class hierarchy cycle through " + name.str());
      }
    }
  }

  const ClassRecord* record(const ClassName& c) const {
    auto it = defs_.find(c);
    return it == defs_.end() ? nullptr : &it->second.record;
  }
  const MavenCoordinate* coordinate(const ClassName& c) const {
    auto it = defs_.find(c);
    return it == defs_.end() ? nullptr : &it->second.coordinate;
  }

  // Every class reachable upward through extends/implements, excluding c
  // unless the hierarchy is cyclic.
  const std::set<ClassName>& ancestors(const ClassName& c) const {
    auto cached = ancestors_.find(c);
    if (cached != ancestors_.end()) return cached->second;
    std::set<ClassName> out;
    std::vector<ClassName> work{c};
    while (!work.empty()) {
      ClassName cur = work.back();
      work.pop_back();
      const ClassRecord* r = record(cur);
      if (r == nullptr) continue;
      std::vector<ClassName> ups = r->interfaces;
      if (r->super_name) ups.push_back(*r->super_name);
      for (const ClassName& u : ups) {
        if (out.insert(u).second) work.push_back(u);
      }
    }
    return ancestors_.emplace(c, std::move(out)).first->second;
  }

  std::vector<ClassName> subtypes(const ClassName& c) const {
    std::vector<ClassName> out{c};
    if (record(c) == nullptr) return out;
    for (const auto& [name, def] : defs_) {
      if (name != c && ancestors(name).count(c)) out.push_back(name);
    }
    return out;
  }

  const std::map<ClassName, Definition>& definitions() const { return defs_; }

 private:
  std::map<ClassName, Definition> defs_;
  mutable std::map<ClassName, std::set<ClassName>> ancestors_;
};

struct Sink {
  FullCG& cg;
  GlobalMethodId caller;
  const CallSite& site;

  void edge(GlobalMethodId target, bool) {
    cg.nodes.insert(caller);
    cg.nodes.insert(target);
    cg.edges.insert(Edge{caller, std::move(target), site.kind, site.pc});
  }
  void unresolved(std::string_view reason) {
    cg.unresolved.push_back(
        {caller, site.pc, site.kind, *site.declared_target, std::string(reason)});
  }
  void dynamic() { cg.dynamic_sites.push_back({caller, site.pc}); }
};

}  // namespace

FullCG monolithic_cha(const std::vector<std::pair<MavenCoordinate, ClassSummary>>& classes) {
  FullCG cg;
  std::map<ClassName, Definition> defs;
  std::vector<bool> effective(classes.size(), false);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const auto& [coordinate, summary] = classes[i];
    if (defs.count(summary.name)) {
      cg.diagnostics.push_back("class " + summary.name.str() + " from " +
                               coordinate.to_string() + " is shadowed by " +
                               defs.at(summary.name).coordinate.to_string());
      continue;
    }
    ClassRecord record;
    record.super_name = summary.super_name;
    record.interfaces = summary.interfaces;
    record.is_interface = summary.is_interface;
    record.is_abstract = summary.is_abstract;
    record.is_final = summary.is_final;
    for (const MethodSummary& m : summary.methods) {
      record.methods[MethodKey{m.name, m.descriptor}] =
          MethodFlags{m.is_static, m.is_abstract, m.is_private, m.is_final};
    }
    defs.emplace(summary.name, Definition{coordinate, &summary, std::move(record)});
    effective[i] = true;
  }
  FlatHierarchy hierarchy(std::move(defs));

  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (!effective[i]) continue;
    const auto& [coordinate, summary] = classes[i];
    for (const MethodSummary& m : summary.methods) {
      GlobalMethodId self(coordinate, summary.name, m.name, m.descriptor);
      cg.nodes.insert(self);
      if (m.is_abstract) cg.abstract_methods.insert(self);
      for (const CallSite& site : m.call_sites) {
        Sink sink{cg, self, site};
        apply_kind_rule(hierarchy, site, sink);
      }
    }
  }

  auto by_site = [](const auto& a, const auto& b) {
    return std::tie(a.caller, a.pc) < std::tie(b.caller, b.pc);
  };
  std::sort(cg.unresolved.begin(), cg.unresolved.end(), by_site);
  std::sort(cg.dynamic_sites.begin(), cg.dynamic_sites.end(), by_site);
  return cg;
}

}  // namespace cgstitch
