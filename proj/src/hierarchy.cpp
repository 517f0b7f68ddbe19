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

#include "cgstitch/hierarchy.hpp"

#include <algorithm>
#include <unordered_set>

namespace cgstitch {

namespace {

const std::vector<ClassName> kNoChildren;

// Supertypes of `record` that are themselves defined.
template <class Classes>
void for_each_super(const Classes& classes, const ClassRecord& record, auto&& fn) {
  if (record.super_name && classes.count(*record.super_name)) fn(*record.super_name);
  for (const auto& i : record.interfaces) {
    if (classes.count(i)) fn(i);
  }
}

}  // namespace

const ClassRecord* UCH::record(const ClassName& c) const {
  auto it = classes_.find(c);
  return it == classes_.end() ? nullptr : &it->second.record;
}

const MavenCoordinate* UCH::coordinate(const ClassName& c) const {
  auto it = classes_.find(c);
  return it == classes_.end() ? nullptr : &it->second.coordinate;
}

const std::vector<ClassName>& UCH::children(const ClassName& c) const {
  auto it = children_.find(c);
  return it == children_.end() ? kNoChildren : it->second;
}

std::vector<ClassName> UCH::subtypes(const ClassName& c) const {
  std::vector<ClassName> out{c};
  if (!is_defined(c)) return out;
  std::unordered_set<ClassName> seen{c};
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (const ClassName& child : children(out[i])) {
      if (seen.insert(child).second) out.push_back(child);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

UCH build_uch(const std::vector<PartialCG>& parts) {
  UCH uch;
  for (const PartialCG& part : parts) {
    uch.coordinates_.push_back(part.coordinate);
    for (const auto& [name, record] : part.classes) {
      auto [it, inserted] = uch.classes_.try_emplace(name, UCH::Entry{part.coordinate, record});
      if (!inserted) {
        uch.shadows_.push_back({name, it->second.coordinate, part.coordinate});
      }
    }
  }

  auto note_reference = [&](const ClassName& c) {
    if (!uch.classes_.count(c)) uch.phantoms_.insert(c);
  };
  for (const auto& [name, entry] : uch.classes_) {
    if (entry.record.super_name) {
      note_reference(*entry.record.super_name);
      if (uch.classes_.count(*entry.record.super_name)) {
        uch.children_[*entry.record.super_name].push_back(name);
      }
    }
    for (const ClassName& i : entry.record.interfaces) {
      note_reference(i);
      if (uch.classes_.count(i)) uch.children_[i].push_back(name);
    }
  }
  for (const PartialCG& part : parts) {
    for (const PendingCallSite& s : part.call_sites) {
      if (s.site.declared_target) note_reference(s.site.declared_target->owner);
    }
  }
  for (auto& [name, kids] : uch.children_) {
    std::sort(kids.begin(), kids.end());
    kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
  }

  // Cycle check over extends/implements links between defined classes.
  // Iterative DFS; names visited in sorted order so the report is stable.
  std::vector<ClassName> order;
  order.reserve(uch.classes_.size());
  for (const auto& [name, entry] : uch.classes_) order.push_back(name);
  std::sort(order.begin(), order.end());
  enum class Mark { White, Grey, Black };
  std::unordered_map<ClassName, Mark> marks;
  for (const ClassName& start : order) {
    if (marks[start] != Mark::White) continue;
    struct Frame {
      ClassName name;
      std::vector<ClassName> supers;
      std::size_t next = 0;
    };
    std::vector<Frame> stack;
    auto push = [&](const ClassName& c) {
      Frame f{c, {}, 0};
      for_each_super(uch.classes_, uch.classes_.at(c).record,
                     [&](const ClassName& s) { f.supers.push_back(s); });
      marks[c] = Mark::Grey;
      stack.push_back(std::move(f));
    };
    push(start);
    while (!stack.empty()) {
      Frame& top = stack.back();
      if (top.next == top.supers.size()) {
        marks[top.name] = Mark::Black;
        stack.pop_back();
        continue;
      }
      ClassName s = top.supers[top.next++];
      Mark m = marks[s];
      if (m == Mark::Grey) {
        std::string cycle;
        auto from = std::find_if(stack.begin(), stack.end(),
                                 [&](const Frame& f) { return f.name == s; });
        for (auto it = from; it != stack.end(); ++it) cycle += it->name.str() + " -> ";
        cycle += s.str();
        throw Error(ErrorKind::HierarchyCycle, "class hierarchy cycle: " + cycle);
      }
      if (m == Mark::White) push(s);
    }
  }
  return uch;
}

}  // namespace cgstitch
