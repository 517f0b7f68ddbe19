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
// hierarchy.hpp -- the Universal Class Hierarchy (UCH) over a resolved
// dependency set.

#ifndef CGSTITCH_HIERARCHY_HPP
#define CGSTITCH_HIERARCHY_HPP

#include <set>
#include <unordered_map>
#include <vector>

#include "cgstitch/kind_rules.hpp"
#include "cgstitch/partial.hpp"

namespace cgstitch {

// A class defined by more than one package; the earlier one on the
// classpath wins.
struct ShadowDiagnostic {
  ClassName class_name;
  MavenCoordinate winner;
  MavenCoordinate loser;

  friend bool operator==(const ShadowDiagnostic&, const ShadowDiagnostic&) = default;
};

class UCH {
 public:
  // Defined class record, or nullptr for phantom and unknown names.
  const ClassRecord* record(const ClassName& c) const;
  // Coordinate of the package whose definition of `c` is in effect.
  const MavenCoordinate* coordinate(const ClassName& c) const;

  bool is_defined(const ClassName& c) const { return classes_.count(c) != 0; }
  bool is_phantom(const ClassName& c) const { return phantoms_.count(c) != 0; }

  // Direct subclasses and direct implementers, sorted.
  const std::vector<ClassName>& children(const ClassName& c) const;

  // `c` plus everything below it. A phantom or unknown `c` yields {c}.
  std::vector<ClassName> subtypes(const ClassName& c) const;

  ResolveResult resolve_upwards(const ClassName& c, std::string_view name,
                                std::string_view descriptor) const {
    return cgstitch::resolve_upwards(*this, c, name, descriptor);
  }

  const std::set<ClassName>& phantoms() const { return phantoms_; }
  const std::vector<ShadowDiagnostic>& shadows() const { return shadows_; }
  // Coordinates of the parts, in classpath order.
  const std::vector<MavenCoordinate>& coordinates() const { return coordinates_; }
  std::size_t size() const { return classes_.size(); }

 private:
  friend UCH build_uch(const std::vector<PartialCG>& parts);

  struct Entry {
    MavenCoordinate coordinate;
    ClassRecord record;
  };

  std::unordered_map<ClassName, Entry> classes_;
  std::unordered_map<ClassName, std::vector<ClassName>> children_;
  std::set<ClassName> phantoms_;
  std::vector<ShadowDiagnostic> shadows_;
  std::vector<MavenCoordinate> coordinates_;
};

// Merges the parts in classpath order. The first definition of a class name
// wins. Super types, interfaces and call-site owners that no part defines
// become phantoms. Throws Error(HierarchyCycle) naming the cycle.
UCH build_uch(const std::vector<PartialCG>& parts);

}  // namespace cgstitch

#endif  // CGSTITCH_HIERARCHY_HPP
