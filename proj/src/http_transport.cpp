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

#include "cgstitch/depset.hpp"
#include "httplib.h"

namespace cgstitch {

HttpTransport::HttpTransport(std::chrono::milliseconds timeout) : timeout_(timeout) {}

TransportResponse HttpTransport::get(const std::string& url) {
  constexpr std::string_view kScheme = "http://";
  if (!url.starts_with(kScheme)) {
    throw Error(ErrorKind::TransportError, "only http:// URLs are supported: " + url);
  }
  std::size_t slash = url.find('/', kScheme.size());
  std::string host = url.substr(0, slash);
  std::string path = slash == std::string::npos ? "/" : url.substr(slash);

  httplib::Client client(host);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_write_timeout(timeout_);
  auto res = client.Get(path);
  if (!res) {
    throw Error(ErrorKind::TransportError,
                "GET " + url + " failed: " + httplib::to_string(res.error()));
  }
  return {res->status, std::move(res->body)};
}

}  // namespace cgstitch
