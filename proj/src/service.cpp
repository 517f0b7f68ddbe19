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


#include "cgstitch/service.hpp"

#include <cstdio>
#include <set>

#include "cgstitch/codec.hpp"
#include "httplib.h"

namespace cgstitch {

namespace {

constexpr const char* kProblemType = "application/problem+json";

ServiceResponse problem(int status, std::string_view kind, const std::string& detail) {
  Json body = {{"type", "about:blank"},
               {"title", httplib::status_message(status)},
               {"status", status},
               {"kind", kind},
               {"detail", detail}};
  return {status, kProblemType, dump_canonical(body) + "\n", {}};
}

int status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedCoordinate:
    case ErrorKind::InvalidName:
    case ErrorKind::MalformedTree:
      return 400;
    case ErrorKind::ArtifactNotFound:
      return 404;
    case ErrorKind::TransportError:
      return 502;
    default:
      return 500;
  }
}

ServiceResponse problem(const Error& e) { return problem(status_for(e.kind()), to_string(e.kind()), e.what()); }

[[noreturn]] void bad_request(const std::string& what) {
  throw Error(ErrorKind::MalformedTree, "malformed stitch request: " + what);
}

std::string server_timing(const PhaseStats& s) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "pool;dur=%.3f, uch;dur=%.3f, stitch;dur=%.3f", s.pool_ms,
                s.uch_ms, s.stitch_ms);
  return buf;
}

struct StitchRequest {
  std::vector<MavenCoordinate> set;
  bool include_abstract_targets = true;
};

StitchRequest parse_request(std::string_view body) {
  Json j = Json::parse(body, nullptr, false);
  if (j.is_discarded()) bad_request("body is not valid JSON");
  if (!j.is_object()) bad_request("body must be a JSON object");
  bool has_tree = j.contains("tree");
  bool has_set = j.contains("set");
  if (has_tree == has_set) bad_request("exactly one of 'tree' and 'set' is required");
  StitchRequest req;
  if (has_tree) {
    req.set = mediate(tree_from_json(j["tree"])).coordinates;
  } else {
    const Json& s = j["set"];
    if (!s.is_array()) bad_request("'set' must be an array of coordinates");
    std::set<std::string> seen;
    for (const Json& c : s) {
      if (!c.is_string()) bad_request("'set' entries must be strings");
      MavenCoordinate coord = parse_lenient_coordinate(c.get<std::string>());
      if (!seen.insert(coord.group_artifact()).second) {
        bad_request(coord.group_artifact() + " listed twice in 'set'");
      }
      req.set.push_back(std::move(coord));
    }
  }
  if (auto opts = j.find("options"); opts != j.end()) {
    if (!opts->is_object()) bad_request("'options' must be an object");
    if (auto inc = opts->find("includeAbstractTargets"); inc != opts->end()) {
      if (!inc->is_boolean()) bad_request("'includeAbstractTargets' must be a boolean");
      req.include_abstract_targets = inc->get<bool>();
    }
  }
  return req;
}

}  // namespace

struct Service::Impl {
  Impl(Pool& p, ArtifactFetcher& f, ServiceConfig c) : pool(p), pipeline(p, f), config(c) {}

  Pool& pool;
  Pipeline pipeline;
  ServiceConfig config;
  httplib::Server server;
  bool bound = false;
};

Service::Service(Pool& pool, ArtifactFetcher& fetcher, ServiceConfig config)
    : impl_(std::make_unique<Impl>(pool, fetcher, config)) {
  auto reply = [](httplib::Response& res, const ServiceResponse& r) {
    res.status = r.status;
    if (!r.server_timing.empty()) res.set_header("Server-Timing", r.server_timing);
    res.set_content(r.body, r.content_type);
  };
  auto& server = impl_->server;
  server.Post("/v1/stitch", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, stitch(req.body));
  });
  server.Get(R"(/v1/pool/([^/]+)/([^/]+)/([^/]+))",
             [this, reply](const httplib::Request& req, httplib::Response& res) {
               reply(res, pool_entry(req.matches[1], req.matches[2], req.matches[3]));
             });
  server.Get("/v1/stats", [this, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, stats());
  });
  server.Get("/v1/health", [this, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, health());
  });
  server.set_error_handler([reply](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    reply(res, problem(res.status, "NotFound", "no route for " + req.method + " " + req.path));
  });
  server.set_exception_handler(
      [reply](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string what = "unknown failure";
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          what = e.what();
        } catch (...) {
        }
        reply(res, problem(500, "Internal", what));
      });
}

Service::~Service() { stop(); }

ServiceResponse Service::stitch(std::string_view body) {
  try {
    StitchRequest req = parse_request(body);
    RunOptions options;
    options.jobs = impl_->config.jobs;
    options.stitch.jobs = impl_->config.jobs;
    options.stitch.use_internal_edges = impl_->config.use_internal_edges;
    options.include_abstract_targets = req.include_abstract_targets;
    RunResult r = impl_->pipeline.run(req.set, options);
    Json j = fullcg_to_json(r.cg, {.include_stats = false});
    j["phaseStats"] = {{"requests", r.counters.requests},
                       {"generations", r.counters.generations},
                       {"generationsAvoided", r.counters.avoided()},
                       {"classParses", r.counters.class_parses}};
    return {200, "application/json", dump_canonical(j, 2) + "\n", server_timing(r.cg.stats)};
  } catch (const Error& e) {
    return problem(e);
  } catch (const std::exception& e) {
    return problem(500, "Internal", e.what());
  }
}

ServiceResponse Service::pool_entry(const std::string& group, const std::string& artifact,
                                    const std::string& version) {
  try {
    MavenCoordinate c(group, artifact, version);
    auto pcg = impl_->pool.peek(c);
    if (!pcg) return problem(404, "NotPooled", c.to_string() + " is not in the pool");
    return {200, "application/json", serialize_partial(*pcg), {}};
  } catch (const Error& e) {
    return problem(e);
  } catch (const std::exception& e) {
    return problem(500, "Internal", e.what());
  }
}

ServiceResponse Service::stats() {
  try {
    return {200, "application/json", dump_canonical(stats_json(impl_->pool.stats())) + "\n", {}};
  } catch (const Error& e) {
    return problem(e);
  }
}

ServiceResponse Service::health() { return {200, "application/json", "{\"status\":\"ok\"}\n", {}}; }

int Service::bind(const std::string& host, int port) {
  int bound = port == 0 ? impl_->server.bind_to_any_port(host)
                        : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound <= 0) {
    throw Error(ErrorKind::IoError, "cannot listen on " + host + ":" + std::to_string(port));
  }
  impl_->bound = true;
  return bound;
}

void Service::serve() {
  if (!impl_->bound) throw Error(ErrorKind::IoError, "serve() before bind()");
  impl_->server.listen_after_bind();
}

void Service::stop() { impl_->server.stop(); }

}  // namespace cgstitch
