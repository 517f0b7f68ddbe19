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
// kind_rules.hpp -- method resolution and the per-invocation-kind CHA rules.
//
// These are the only pieces of logic shared by the stitcher and by the
// whole-program baseline. Both supply their own hierarchy through the
// HierarchyView concept.

#ifndef CGSTITCH_KIND_RULES_HPP
#define CGSTITCH_KIND_RULES_HPP

#include <concepts>
#include <deque>
#include <optional>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "cgstitch/classfile.hpp"
#include "cgstitch/model.hpp"
#include "cgstitch/partial.hpp"

namespace cgstitch {

// record(c) is nullptr for classes outside the view (phantoms).
// coordinate(c) is only called for classes with a record.
// subtypes(c) yields c and every class below it.
template <class V>
concept HierarchyView = requires(const V& v, const ClassName& c) {
  { v.record(c) } -> std::convertible_to<const ClassRecord*>;
  { v.coordinate(c) } -> std::convertible_to<const MavenCoordinate*>;
  { *v.subtypes(c).begin() } -> std::convertible_to<const ClassName&>;
};

struct Resolution {
  ClassName owner;
  bool is_abstract = false;

  friend bool operator==(const Resolution&, const Resolution&) = default;
};

struct ResolveResult {
  std::optional<Resolution> found;
  bool hit_phantom = false;  // the search touched a class outside the view
};

inline constexpr std::string_view kReasonNoDefinition = "no-definition";
inline constexpr std::string_view kReasonPhantomOwner = "phantom-owner";

namespace detail {
// Longest superclass chain walked before giving up; real hierarchies are
// far shallower and cycles are rejected when a view is built.
inline constexpr std::size_t kMaxChain = 1 << 16;
}  // namespace detail

// Finds the declaration that a reference to c.name(descriptor) resolves to.
//
// Classes: c, then its superclass chain, then the superinterfaces of those
// classes breadth-first in declaration order. Reaching a phantom on the
// superclass chain ends the search with nothing found.
//
// Interfaces: c, then its superinterfaces breadth-first, then
// java/lang/Object.
//
// Private and static methods are not inherited from superinterfaces.
// Phantom superinterfaces are skipped; the result then carries hit_phantom.
template <HierarchyView V>
ResolveResult resolve_upwards(const V& view, const ClassName& c, std::string_view name,
                              std::string_view descriptor) {
  ResolveResult out;
  const ClassRecord* rec = view.record(c);
  if (rec == nullptr) {
    out.hit_phantom = true;
    return out;
  }
  if (const MethodFlags* f = rec->find(name, descriptor)) {
    out.found = Resolution{c, f->is_abstract};
    return out;
  }

  std::vector<const ClassRecord*> chain{rec};
  if (!rec->is_interface) {
    const ClassRecord* r = rec;
    while (r->super_name && chain.size() < detail::kMaxChain) {
      const ClassName& super = *r->super_name;
      r = view.record(super);
      if (r == nullptr) {
        out.hit_phantom = true;
        return out;
      }
      if (const MethodFlags* f = r->find(name, descriptor)) {
        out.found = Resolution{super, f->is_abstract};
        return out;
      }
      chain.push_back(r);
    }
  }

  std::deque<const ClassName*> queue;
  std::unordered_set<std::string_view> seen;
  auto enqueue = [&](const ClassRecord* r) {
    for (const ClassName& i : r->interfaces) {
      if (seen.insert(i.str()).second) queue.push_back(&i);
    }
  };
  for (const ClassRecord* r : chain) enqueue(r);
  while (!queue.empty()) {
    const ClassName& i = *queue.front();
    queue.pop_front();
    const ClassRecord* ir = view.record(i);
    if (ir == nullptr) {
      out.hit_phantom = true;
      continue;
    }
    if (const MethodFlags* f = ir->find(name, descriptor);
        f != nullptr && !f->is_private && !f->is_static) {
      out.found = Resolution{i, f->is_abstract};
      return out;
    }
    enqueue(ir);
  }

  if (rec->is_interface && rec->super_name) {
    const ClassRecord* object = view.record(*rec->super_name);
    if (object == nullptr) {
      out.hit_phantom = true;
    } else if (const MethodFlags* f = object->find(name, descriptor);
               f != nullptr && !f->is_static) {
      out.found = Resolution{*rec->super_name, f->is_abstract};
    }
  }
  return out;
}

// Receives the outcome of one call site.
template <class S>
concept SiteSink = requires(S& s, GlobalMethodId id, std::string_view reason) {
  s.edge(id, true);
  s.unresolved(reason);
  s.dynamic();
};

// Applies the CHA rule for the site's invocation kind.
//
// STATIC, SPECIAL: the resolved declaration. If resolution stopped at a
// phantom, the declared target itself as a phantom node.
// VIRTUAL, INTERFACE: the resolved declaration (possibly abstract) plus
// every concrete, non-static, non-private definition in a proper subtype
// of the declared owner.
// DYNAMIC: recorded only.
template <HierarchyView V, SiteSink S>
void apply_kind_rule(const V& view, const CallSite& site, S& sink) {
  if (site.kind == CallKind::Dynamic) {
    sink.dynamic();
    return;
  }
  const MethodRef& t = *site.declared_target;
  ResolveResult r = resolve_upwards(view, t.owner, t.name, t.descriptor);
  auto id_of = [&](const ClassName& owner) {
    return GlobalMethodId(*view.coordinate(owner), owner, t.name, t.descriptor);
  };

  if (site.kind == CallKind::Static || site.kind == CallKind::Special) {
    if (r.found) {
      sink.edge(id_of(r.found->owner), r.found->is_abstract);
    } else if (r.hit_phantom) {
      sink.edge(GlobalMethodId::phantom(t.owner, t.name, t.descriptor), false);
    } else {
      sink.unresolved(kReasonNoDefinition);
    }
    return;
  }

  bool any = false;
  if (r.found) {
    sink.edge(id_of(r.found->owner), r.found->is_abstract);
    any = true;
  }
  for (const ClassName& c : view.subtypes(t.owner)) {
    if (c == t.owner) continue;
    const ClassRecord* rec = view.record(c);
    if (rec == nullptr) continue;
    const MethodFlags* f = rec->find(t.name, t.descriptor);
    if (f == nullptr || f->is_abstract || f->is_static || f->is_private) continue;
    sink.edge(id_of(c), false);
    any = true;
  }
  if (!any) sink.unresolved(r.hit_phantom ? kReasonPhantomOwner : kReasonNoDefinition);
}

}  // namespace cgstitch

#endif  // CGSTITCH_KIND_RULES_HPP
