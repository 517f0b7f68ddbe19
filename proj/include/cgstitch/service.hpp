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


// service.hpp -- HTTP front end for on-demand stitching over a shared pool.

#ifndef CGSTITCH_SERVICE_HPP
#define CGSTITCH_SERVICE_HPP

#include <memory>
#include <string>
#include <string_view>

#include "cgstitch/depset.hpp"
#include "cgstitch/pipeline.hpp"
#include "cgstitch/pool.hpp"

namespace cgstitch {

struct ServiceConfig {
  unsigned jobs = 1;
  bool use_internal_edges = false;
};

struct ServiceResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::string server_timing;  // empty when not applicable
};

// Routes:
//   POST /v1/stitch                 {"tree": {...}} or {"set": [...]}, "options"
//   GET  /v1/pool/{g}/{a}/{v}       pooled partial CG
//   GET  /v1/stats                  pool counters
//   GET  /v1/health
// Errors are problem JSON bodies: {"type","title","status","kind","detail"}.
class Service {
 public:
  Service(Pool& pool, ArtifactFetcher& fetcher, ServiceConfig config = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Handlers, usable without a socket.
  ServiceResponse stitch(std::string_view body);
  ServiceResponse pool_entry(const std::string& group, const std::string& artifact,
                             const std::string& version);
  ServiceResponse stats();
  ServiceResponse health();

  // Binds to host:port; port 0 picks a free one. Returns the bound port.
  // Throws Error(IoError).
  int bind(const std::string& host, int port);
  // Serves until stop(). Requires a successful bind().
  void serve();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cgstitch

#endif  // CGSTITCH_SERVICE_HPP
