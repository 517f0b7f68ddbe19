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
// partial.hpp -- the per-package partial call graph, the unit of storage in
// the pool. It is built from one package's classes with no knowledge of its
// dependencies.

#ifndef CGSTITCH_PARTIAL_HPP
#define CGSTITCH_PARTIAL_HPP

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cgstitch/classfile.hpp"
#include "cgstitch/model.hpp"

namespace cgstitch {

inline constexpr int kPartialFormatVersion = 1;

struct MethodFlags {
  bool is_static = false;
  bool is_abstract = false;
  bool is_private = false;
  bool is_final = false;

  friend bool operator==(const MethodFlags&, const MethodFlags&) = default;
};

struct MethodKey {
  std::string name;
  std::string descriptor;

  friend bool operator==(const MethodKey&, const MethodKey&) = default;
  friend auto operator<=>(const MethodKey&, const MethodKey&) = default;
};

// Orders MethodKeys and allows lookup by a pair of string_views.
struct MethodKeyLess {
  using is_transparent = void;
  using View = std::pair<std::string_view, std::string_view>;

  static View view(const MethodKey& k) { return {k.name, k.descriptor}; }
  static View view(const View& v) { return v; }

  template <class A, class B>
  bool operator()(const A& a, const B& b) const {
    return view(a) < view(b);
  }
};

struct ClassRecord {
  std::optional<ClassName> super_name;
  std::vector<ClassName> interfaces;  // declaration order
  bool is_interface = false;
  bool is_abstract = false;
  bool is_final = false;
  std::map<MethodKey, MethodFlags, MethodKeyLess> methods;

  const MethodFlags* find(std::string_view name, std::string_view descriptor) const {
    auto it = methods.find(MethodKeyLess::View{name, descriptor});
    return it == methods.end() ? nullptr : &it->second;
  }

  friend bool operator==(const ClassRecord&, const ClassRecord&) = default;
};

ClassRecord to_class_record(const ClassSummary& summary);

struct PendingCallSite {
  ClassName caller_owner;
  std::string caller_name;
  std::string caller_descriptor;
  CallSite site;

  friend bool operator==(const PendingCallSite&, const PendingCallSite&) = default;
};

// Canonical call-site order: caller owner, name, descriptor, then pc.
bool call_site_less(const PendingCallSite& a, const PendingCallSite& b);

struct PartialCG {
  MavenCoordinate coordinate;
  std::map<ClassName, ClassRecord> classes;
  std::vector<PendingCallSite> call_sites;  // canonical order
  std::vector<Edge> internal_edges;         // sorted, unique
  int format_version = kPartialFormatVersion;

  friend bool operator==(const PartialCG&, const PartialCG&) = default;
};

// Builds the partial CG of one package. Every call site is kept; internal
// edges are those that stitching the package on its own produces, minus
// edges into phantom classes. Throws Error(DuplicateClassInPackage).
PartialCG build_partial_cg(const MavenCoordinate& coordinate,
                           const std::vector<ClassSummary>& classes);

// The internal edges `pcg` should carry, recomputed from its classes and
// call sites. build_partial_cg stores exactly this.
std::vector<Edge> compute_internal_edges(const PartialCG& pcg);

}  // namespace cgstitch

#endif  // CGSTITCH_PARTIAL_HPP
