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

#include "cgstitch/codec.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace cgstitch {

namespace {

[[noreturn]] void corrupt(const std::string& what) {
  throw Error(ErrorKind::CorruptEntry, "corrupt call graph JSON: " + what);
}

const Json& field(const Json& obj, const char* key) {
  if (!obj.is_object()) corrupt(std::string("expected an object holding '") + key + "'");
  auto it = obj.find(key);
  if (it == obj.end()) corrupt(std::string("missing '") + key + "'");
  return *it;
}

std::string str_field(const Json& obj, const char* key) {
  const Json& v = field(obj, key);
  if (!v.is_string()) corrupt(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

bool bool_field(const Json& obj, const char* key) {
  const Json& v = field(obj, key);
  if (!v.is_boolean()) corrupt(std::string("'") + key + "' must be a boolean");
  return v.get<bool>();
}

std::uint32_t pc_field(const Json& obj) {
  const Json& v = field(obj, "pc");
  if (!v.is_number_unsigned() || v.get<std::uint64_t>() > 0xFFFFFFFFu) {
    corrupt("'pc' must be a non-negative 32-bit integer");
  }
  return v.get<std::uint32_t>();
}

const Json& array_field(const Json& obj, const char* key) {
  const Json& v = field(obj, key);
  if (!v.is_array()) corrupt(std::string("'") + key + "' must be an array");
  return v;
}

CallKind kind_field(const Json& obj) {
  auto k = call_kind_from_string(str_field(obj, "kind"));
  if (!k) corrupt("unknown call kind '" + str_field(obj, "kind") + "'");
  return *k;
}

// Runs `fn`, turning validation errors from the model types into
// CorruptEntry.
template <class F>
auto guarded(F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::CorruptEntry) throw;
    corrupt(e.what());
  } catch (const nlohmann::json::exception& e) {
    corrupt(e.what());
  }
}

Json method_json(const ClassName& owner, const std::string& name, const std::string& desc) {
  return Json{{"owner", owner.str()}, {"name", name}, {"descriptor", desc}};
}

MethodRef method_from_json(const Json& j) {
  return guarded([&] {
    return MethodRef(ClassName(str_field(j, "owner")), str_field(j, "name"),
                     str_field(j, "descriptor"));
  });
}


// Inverse of GlobalMethodId::text(). Coordinates containing '!' cannot be
// told apart from the separator and are not supported here.
GlobalMethodId parse_method_id(const std::string& text) {
  return guarded([&] {
    std::optional<MavenCoordinate> coordinate;
    std::size_t rest_at;
    std::string phantom_prefix = std::string(kPhantomText) + "!";
    if (text.starts_with(phantom_prefix)) {
      rest_at = phantom_prefix.size();
    } else {
      std::size_t bang = text.find('!');
      if (bang == std::string::npos) corrupt("method id '" + text + "' has no coordinate");
      coordinate = parse_coordinate(text.substr(0, bang));
      rest_at = bang + 1;
    }
    std::size_t dot = text.find('.', rest_at);
    if (dot == std::string::npos) corrupt("method id '" + text + "' has no method name");
    std::size_t paren = text.find('(', dot);
    while (paren != std::string::npos &&
           !is_valid_method_descriptor(std::string_view(text).substr(paren))) {
      paren = text.find('(', paren + 1);
    }
    if (paren == std::string::npos) corrupt("method id '" + text + "' has no descriptor");
    ClassName owner(text.substr(rest_at, dot - rest_at));
    std::string name = text.substr(dot + 1, paren - dot - 1);
    std::string desc = text.substr(paren);
    MethodRef check(owner, name, desc);  // validates
    if (coordinate) return GlobalMethodId(*coordinate, owner, name, desc);
    return GlobalMethodId::phantom(owner, name, desc);
  });
}

double round_ms(double ms) { return std::round(ms * 1000.0) / 1000.0; }

}  // namespace

std::string dump_canonical(const Json& j, int indent) {
  // Keys are already sorted (std::map-backed objects); names are valid
  // UTF-8 by construction, so strict handling never triggers.
  return j.dump(indent, ' ', false, Json::error_handler_t::strict);
}

Json partial_to_json(const PartialCG& pcg) {
  Json classes = Json::object();
  for (const auto& [name, rec] : pcg.classes) {
    Json methods = Json::array();
    for (const auto& [key, flags] : rec.methods) {
      methods.push_back({{"name", key.name},
                         {"descriptor", key.descriptor},
                         {"flags",
                          {{"static", flags.is_static},
                           {"abstract", flags.is_abstract},
                           {"private", flags.is_private},
                           {"final", flags.is_final}}}});
    }
    Json interfaces = Json::array();
    for (const auto& i : rec.interfaces) interfaces.push_back(i.str());
    classes[name.str()] = {
        {"super", rec.super_name ? Json(rec.super_name->str()) : Json(nullptr)},
        {"interfaces", std::move(interfaces)},
        {"flags",
         {{"interface", rec.is_interface}, {"abstract", rec.is_abstract}, {"final", rec.is_final}}},
        {"methods", std::move(methods)}};
  }

  std::vector<PendingCallSite> sites = pcg.call_sites;
  std::sort(sites.begin(), sites.end(), call_site_less);
  Json call_sites = Json::array();
  for (const auto& s : sites) {
    const auto& t = s.site.declared_target;
    call_sites.push_back(
        {{"caller", method_json(s.caller_owner, s.caller_name, s.caller_descriptor)},
         {"pc", s.site.pc},
         {"kind", std::string(to_string(s.site.kind))},
         {"target", t ? method_json(t->owner, t->name, t->descriptor) : Json(nullptr)}});
  }

  std::set<Edge> edges(pcg.internal_edges.begin(), pcg.internal_edges.end());
  Json internal = Json::array();
  for (const Edge& e : edges) {
    internal.push_back(
        {{"source", method_json(e.source.owner(), e.source.name(), e.source.descriptor())},
         {"target", method_json(e.target.owner(), e.target.name(), e.target.descriptor())},
         {"kind", std::string(to_string(e.kind))},
         {"pc", e.site_pc}});
  }

  return {{"formatVersion", pcg.format_version},
          {"coordinate", pcg.coordinate.to_string()},
          {"classes", std::move(classes)},
          {"callSites", std::move(call_sites)},
          {"internalEdges", std::move(internal)}};
}

PartialCG partial_from_json(const Json& j) {
  if (!j.is_object()) corrupt("top level must be an object");
  const Json& version = field(j, "formatVersion");
  if (!version.is_number_integer() || version.get<int>() != kPartialFormatVersion) {
    corrupt("unsupported formatVersion " + version.dump());
  }
  PartialCG pcg{guarded([&] { return parse_coordinate(str_field(j, "coordinate")); }),
                {},
                {},
                {},
                kPartialFormatVersion};

  const Json& classes = field(j, "classes");
  if (!classes.is_object()) corrupt("'classes' must be an object");
  for (const auto& [name, c] : classes.items()) {
    ClassRecord rec;
    const Json& super = field(c, "super");
    if (!super.is_null()) {
      if (!super.is_string()) corrupt("'super' must be a string or null");
      rec.super_name = guarded([&] { return ClassName(super.get<std::string>()); });
    }
    for (const Json& i : array_field(c, "interfaces")) {
      if (!i.is_string()) corrupt("interface names must be strings");
      rec.interfaces.push_back(guarded([&] { return ClassName(i.get<std::string>()); }));
    }
    const Json& flags = field(c, "flags");
    rec.is_interface = bool_field(flags, "interface");
    rec.is_abstract = bool_field(flags, "abstract");
    rec.is_final = bool_field(flags, "final");
    for (const Json& m : array_field(c, "methods")) {
      std::string mname = str_field(m, "name");
      std::string mdesc = str_field(m, "descriptor");
      if (!is_valid_method_name(mname) || !is_valid_method_descriptor(mdesc)) {
        corrupt("invalid method " + name + "." + mname + mdesc);
      }
      const Json& mf = field(m, "flags");
      MethodFlags f{bool_field(mf, "static"), bool_field(mf, "abstract"),
                    bool_field(mf, "private"), bool_field(mf, "final")};
      if (!rec.methods.emplace(MethodKey{mname, mdesc}, f).second) {
        corrupt("duplicate method " + name + "." + mname + mdesc);
      }
    }
    pcg.classes.emplace(guarded([&] { return ClassName(name); }), std::move(rec));
  }

  auto require_method = [&](const MethodRef& m, const char* role) -> const MethodFlags& {
    auto c = pcg.classes.find(m.owner);
    if (c == pcg.classes.end()) corrupt(std::string(role) + " class " + m.owner.str() + " unknown");
    const MethodFlags* f = c->second.find(m.name, m.descriptor);
    if (f == nullptr) corrupt(std::string(role) + " method " + m.to_string() + " unknown");
    return *f;
  };

  for (const Json& s : array_field(j, "callSites")) {
    MethodRef caller = method_from_json(field(s, "caller"));
    if (require_method(caller, "caller").is_abstract) {
      corrupt("abstract method " + caller.to_string() + " has call sites");
    }
    CallSite site;
    site.pc = pc_field(s);
    site.kind = kind_field(s);
    const Json& target = field(s, "target");
    if (target.is_null() != (site.kind == CallKind::Dynamic)) {
      corrupt("call site target must be null exactly for DYNAMIC");
    }
    if (!target.is_null()) site.declared_target = method_from_json(target);
    pcg.call_sites.push_back({caller.owner, caller.name, caller.descriptor, std::move(site)});
  }
  std::sort(pcg.call_sites.begin(), pcg.call_sites.end(), call_site_less);
  for (std::size_t i = 1; i < pcg.call_sites.size(); ++i) {
    const auto& a = pcg.call_sites[i - 1];
    const auto& b = pcg.call_sites[i];
    if (!call_site_less(a, b)) corrupt("duplicate call site at pc " + std::to_string(b.site.pc));
  }

  std::set<Edge> edges;
  for (const Json& e : array_field(j, "internalEdges")) {
    MethodRef src = method_from_json(field(e, "source"));
    MethodRef dst = method_from_json(field(e, "target"));
    require_method(src, "edge source");
    require_method(dst, "edge target");
    CallKind kind = kind_field(e);
    if (kind == CallKind::Dynamic) corrupt("DYNAMIC edges are not allowed");
    edges.insert(Edge{GlobalMethodId(pcg.coordinate, src.owner, src.name, src.descriptor),
                      GlobalMethodId(pcg.coordinate, dst.owner, dst.name, dst.descriptor), kind,
                      pc_field(e)});
  }
  pcg.internal_edges.assign(edges.begin(), edges.end());
  return pcg;
}

std::string serialize_partial(const PartialCG& pcg) {
  return dump_canonical(partial_to_json(pcg)) + "\n";
}

PartialCG deserialize_partial(std::string_view text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) corrupt("not valid JSON");
  return partial_from_json(j);
}

Json fullcg_to_json(const FullCG& cg, const FullCGJsonOptions& options) {
  Json nodes = Json::array();
  for (const auto& n : cg.nodes) nodes.push_back(n.text());
  Json edges = Json::array();
  for (const auto& e : cg.edges) {
    edges.push_back({{"source", e.source.text()},
                     {"target", e.target.text()},
                     {"kind", std::string(to_string(e.kind))},
                     {"pc", e.site_pc}});
  }
  Json abstract = Json::array();
  for (const auto& n : cg.abstract_methods) abstract.push_back(n.text());
  Json unresolved = Json::array();
  for (const auto& u : cg.unresolved) {
    unresolved.push_back({{"caller", u.caller.text()},
                          {"pc", u.pc},
                          {"kind", std::string(to_string(u.kind))},
                          {"target", method_json(u.declared_target.owner, u.declared_target.name,
                                                 u.declared_target.descriptor)},
                          {"reason", u.reason}});
  }
  Json dynamic = Json::array();
  for (const auto& d : cg.dynamic_sites) {
    dynamic.push_back({{"caller", d.caller.text()}, {"pc", d.pc}});
  }
  Json out = {{"nodes", std::move(nodes)},
              {"edges", std::move(edges)},
              {"abstract", std::move(abstract)},
              {"unresolved", std::move(unresolved)},
              {"dynamic", std::move(dynamic)},
              {"diagnostics", cg.diagnostics}};
  if (options.include_stats) {
    out["stats"] = {{"poolMs", round_ms(cg.stats.pool_ms)},
                    {"uchMs", round_ms(cg.stats.uch_ms)},
                    {"stitchMs", round_ms(cg.stats.stitch_ms)}};
  }
  return out;
}

FullCG fullcg_from_json(const Json& j) {
  FullCG cg;
  auto ids = [&](const char* key, std::set<GlobalMethodId>& into) {
    for (const Json& n : array_field(j, key)) {
      if (!n.is_string()) corrupt(std::string("'") + key + "' entries must be strings");
      into.insert(parse_method_id(n.get<std::string>()));
    }
  };
  ids("nodes", cg.nodes);
  if (j.contains("abstract")) ids("abstract", cg.abstract_methods);
  for (const Json& e : array_field(j, "edges")) {
    cg.edges.insert(Edge{parse_method_id(str_field(e, "source")),
                         parse_method_id(str_field(e, "target")), kind_field(e), pc_field(e)});
  }
  for (const Json& u : array_field(j, "unresolved")) {
    cg.unresolved.push_back({parse_method_id(str_field(u, "caller")), pc_field(u), kind_field(u),
                             method_from_json(field(u, "target")), str_field(u, "reason")});
  }
  for (const Json& d : array_field(j, "dynamic")) {
    cg.dynamic_sites.push_back({parse_method_id(str_field(d, "caller")), pc_field(d)});
  }
  if (j.contains("diagnostics")) {
    for (const Json& d : array_field(j, "diagnostics")) {
      if (!d.is_string()) corrupt("diagnostics must be strings");
      cg.diagnostics.push_back(d.get<std::string>());
    }
  }
  if (j.contains("stats")) {
    const Json& s = j["stats"];
    auto num = [&](const char* key) {
      const Json& v = field(s, key);
      if (!v.is_number()) corrupt(std::string("'") + key + "' must be a number");
      return v.get<double>();
    };
    cg.stats = {num("poolMs"), num("uchMs"), num("stitchMs")};
  }
  return cg;
}

std::string serialize_fullcg(const FullCG& cg, const FullCGJsonOptions& options) {
  return dump_canonical(fullcg_to_json(cg, options), 2) + "\n";
}

}  // namespace cgstitch
