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

#include "cgstitch/stitch.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <map>
#include <thread>
#include <tuple>

#include "cgstitch/kind_rules.hpp"

namespace cgstitch {

namespace {

// UCH view that memoizes subtype queries for one worker.
class CachedView {
 public:
  explicit CachedView(const UCH& uch) : uch_(uch) {}

  const ClassRecord* record(const ClassName& c) const { return uch_.record(c); }
  const MavenCoordinate* coordinate(const ClassName& c) const { return uch_.coordinate(c); }
  const std::vector<ClassName>& subtypes(const ClassName& c) const {
    auto it = cache_.find(c);
    if (it == cache_.end()) it = cache_.emplace(c, uch_.subtypes(c)).first;
    return it->second;
  }

 private:
  const UCH& uch_;
  mutable std::unordered_map<ClassName, std::vector<ClassName>> cache_;
};

struct Results {
  std::vector<Edge> edges;
  std::vector<UnresolvedSite> unresolved;
  std::vector<DynamicSite> dynamic_sites;
};

class Collector {
 public:
  Collector(const GlobalMethodId& caller, const CallSite& site, Results& out)
      : caller_(caller), site_(site), out_(out) {}

  void edge(GlobalMethodId target, bool /*is_abstract*/) {
    out_.edges.push_back(Edge{caller_, std::move(target), site_.kind, site_.pc});
  }
  void unresolved(std::string_view reason) {
    out_.unresolved.push_back(
        {caller_, site_.pc, site_.kind, *site_.declared_target, std::string(reason)});
  }
  void dynamic() { out_.dynamic_sites.push_back({caller_, site_.pc}); }

 private:
  const GlobalMethodId& caller_;
  const CallSite& site_;
  Results& out_;
};

struct WorkItem {
  const PartialCG* part;
  const PendingCallSite* site;
  const std::vector<const Edge*>* internal;  // fast-path edges, or nullptr
};

using SiteKey = std::tuple<std::string_view, std::string_view, std::string_view, std::uint32_t>;

bool fast_path_applies(const UCH& uch, const CallSite& site,
                       const std::vector<const Edge*>& internal) {
  if (internal.size() != 1 || internal.front()->target.owner() != site.declared_target->owner) {
    return false;
  }
  switch (site.kind) {
    case CallKind::Static:
    case CallKind::Special:
      return true;
    case CallKind::Virtual: {
      const ClassRecord* owner = uch.record(site.declared_target->owner);
      return owner != nullptr && owner->is_final &&
             uch.children(site.declared_target->owner).empty();
    }
    default:
      return false;
  }
}

void run_items(const UCH& uch, std::span<const WorkItem> items, Results& out) {
  CachedView view(uch);
  for (const WorkItem& item : items) {
    const PendingCallSite& s = *item.site;
    GlobalMethodId caller(item.part->coordinate, s.caller_owner, s.caller_name,
                          s.caller_descriptor);
    if (item.internal != nullptr) {
      for (const Edge* e : *item.internal) out.edges.push_back(*e);
      continue;
    }
    Collector sink(caller, s.site, out);
    apply_kind_rule(view, s.site, sink);
  }
}

template <class T>
void sort_sites(std::vector<T>& v) {
  std::sort(v.begin(), v.end(), [](const T& a, const T& b) {
    return std::tie(a.caller, a.pc) < std::tie(b.caller, b.pc);
  });
}

}  // namespace

void remove_abstract_targets(FullCG& cg) {
  std::erase_if(cg.edges, [&](const Edge& e) { return cg.abstract_methods.count(e.target) != 0; });
}

std::size_t count_effective_sites(const UCH& uch, const std::vector<PartialCG>& parts) {
  std::size_t n = 0;
  for (const PartialCG& part : parts) {
    for (const PendingCallSite& s : part.call_sites) {
      const MavenCoordinate* winner = uch.coordinate(s.caller_owner);
      if (winner && *winner == part.coordinate && s.site.kind != CallKind::Dynamic) ++n;
    }
  }
  return n;
}

FullCG stitch(const UCH& uch, const std::vector<PartialCG>& parts, const StitchOptions& options) {
  auto started = std::chrono::steady_clock::now();
  if (parts.size() != uch.coordinates().size()) {
    throw Error(ErrorKind::PartsMismatch, "stitch got " + std::to_string(parts.size()) +
                                              " parts for a hierarchy built from " +
                                              std::to_string(uch.coordinates().size()));
  }
  FullCG cg;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const PartialCG& part = parts[i];
    if (part.coordinate != uch.coordinates()[i]) {
      throw Error(ErrorKind::PartsMismatch, "part " + part.coordinate.to_string() +
                                                " is not the hierarchy's part " +
                                                uch.coordinates()[i].to_string());
    }
    for (const auto& [name, record] : part.classes) {
      if (!uch.is_defined(name)) {
        throw Error(ErrorKind::PartsMismatch, "class " + name.str() + " of " +
                                                  part.coordinate.to_string() +
                                                  " is missing from the hierarchy");
      }
    }
  }
  for (const ShadowDiagnostic& d : uch.shadows()) {
    cg.diagnostics.push_back("class " + d.class_name.str() + " from " + d.loser.to_string() +
                             " is shadowed by " + d.winner.to_string());
  }

  // Internal-edge index per part, keyed by (caller, pc).
  std::vector<std::map<SiteKey, std::vector<const Edge*>>> internal(parts.size());
  if (options.use_internal_edges) {
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const PartialCG& part = parts[i];
      bool shadowed = std::any_of(part.classes.begin(), part.classes.end(), [&](const auto& kv) {
        return *uch.coordinate(kv.first) != part.coordinate;
      });
      if (shadowed) continue;
      for (const Edge& e : part.internal_edges) {
        internal[i][SiteKey{e.source.owner().str(), e.source.name(), e.source.descriptor(), e.site_pc}]
            .push_back(&e);
      }
    }
  }

  std::vector<WorkItem> items;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const PartialCG& part = parts[i];
    std::map<ClassName, std::size_t> skipped;
    for (const PendingCallSite& s : part.call_sites) {
      if (*uch.coordinate(s.caller_owner) != part.coordinate) {
        ++skipped[s.caller_owner];
        continue;
      }
      const std::vector<const Edge*>* fast = nullptr;
      if (!internal[i].empty() && s.site.kind != CallKind::Dynamic) {
        auto it = internal[i].find(
            SiteKey{s.caller_owner.str(), s.caller_name, s.caller_descriptor, s.site.pc});
        if (it != internal[i].end() && fast_path_applies(uch, s.site, it->second)) {
          fast = &it->second;
        }
      }
      items.push_back({&part, &s, fast});
    }
    for (const auto& [name, n] : skipped) {
      cg.diagnostics.push_back("skipped " + std::to_string(n) + " call sites of shadowed class " +
                               name.str() + " in " + part.coordinate.to_string());
    }
  }

  unsigned jobs = options.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                    : options.jobs;
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(1, items.size() / 64)));
  std::vector<Results> results(jobs);
  if (jobs <= 1) {
    run_items(uch, items, results[0]);
  } else {
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(jobs);
    std::size_t chunk = (items.size() + jobs - 1) / jobs;
    for (unsigned j = 0; j < jobs; ++j) {
      std::size_t begin = std::min(items.size(), j * chunk);
      std::size_t end = std::min(items.size(), begin + chunk);
      workers.emplace_back([&, j, begin, end] {
        try {
          run_items(uch, std::span<const WorkItem>(items).subspan(begin, end - begin), results[j]);
        } catch (...) {
          errors[j] = std::current_exception();
        }
      });
    }
    for (auto& w : workers) w.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  for (Results& r : results) {
    for (Edge& e : r.edges) {
      cg.nodes.insert(e.source);
      cg.nodes.insert(e.target);
      cg.edges.insert(std::move(e));
    }
    std::move(r.unresolved.begin(), r.unresolved.end(), std::back_inserter(cg.unresolved));
    std::move(r.dynamic_sites.begin(), r.dynamic_sites.end(),
              std::back_inserter(cg.dynamic_sites));
  }
  sort_sites(cg.unresolved);
  sort_sites(cg.dynamic_sites);

  for (const PartialCG& part : parts) {
    for (const auto& [name, record] : part.classes) {
      if (*uch.coordinate(name) != part.coordinate) continue;
      for (const auto& [key, flags] : record.methods) {
        GlobalMethodId id(part.coordinate, name, key.name, key.descriptor);
        if (flags.is_abstract) cg.abstract_methods.insert(id);
        cg.nodes.insert(std::move(id));
      }
    }
  }
  cg.stats.stitch_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
          .count();
  return cg;
}

}  // namespace cgstitch
