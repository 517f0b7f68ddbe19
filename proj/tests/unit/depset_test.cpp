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


#include <deque>
#include <mutex>
#include <thread>

#include "cgstitch/depset.hpp"
#include "doctest.h"
#include "httplib.h"
#include "mediation_oracle.hpp"
#include "test_support.hpp"

using namespace cgstitch;
using namespace cgstitch::testing;
using Json = nlohmann::json;

namespace {

DependencyNode node(const std::string& coord, std::vector<DependencyNode> children = {}) {
  return {parse_lenient_coordinate(coord), std::move(children)};
}

std::vector<std::string> strings(const std::vector<MavenCoordinate>& cs) {
  std::vector<std::string> out;
  for (const auto& c : cs) out.push_back(c.to_string());
  return out;
}

// Replays scripted responses; a status of -1 means "no response".
class ScriptedTransport : public Transport {
 public:
  explicit ScriptedTransport(std::deque<TransportResponse> script) : script_(std::move(script)) {}

  TransportResponse get(const std::string& url) override {
    std::lock_guard lock(mu_);
    urls.push_back(url);
    if (script_.empty()) throw std::runtime_error("unexpected request " + url);
    TransportResponse r = script_.front();
    script_.pop_front();
    if (r.status == -1) throw Error(ErrorKind::TransportError, "connection reset");
    return r;
  }

  std::vector<std::string> urls;

 private:
  std::mutex mu_;
  std::deque<TransportResponse> script_;
};

}  // namespace

TEST_SUITE("depset") {

TEST_CASE("lenient coordinates drop packaging and scope") {
  CHECK(parse_lenient_coordinate("g:a:1").to_string() == "g:a:1");
  CHECK(parse_lenient_coordinate("g:a:jar:1").to_string() == "g:a:1");
  CHECK(parse_lenient_coordinate("g:a:war:1.2").to_string() == "g:a:1.2");
  CHECK(parse_lenient_coordinate("g:a:jar:1:compile").to_string() == "g:a:1");
  CHECK(parse_lenient_coordinate("g:a:bundle:2:test").to_string() == "g:a:2");
  for (const char* bad : {"g:a", "g:a:zip:1", "g:a:jar:1:weird", "g::1", "g:a:jar:1:compile:x", ""}) {
    CAPTURE(bad);
    CHECK(error_kind([&] { parse_lenient_coordinate(bad); }) == ErrorKind::MalformedCoordinate);
  }
}

TEST_CASE("dependency trees parse structurally") {
  DependencyTree t = parse_tree(R"({"coordinate":"g:root:jar:1","children":[
      {"coordinate":"g:a:1"},{"coordinate":"g:b:2","children":[{"coordinate":"g:c:3","children":[]}]}]})");
  CHECK(t.coordinate.to_string() == "g:root:1");
  REQUIRE(t.children.size() == 2);
  CHECK(t.children[0].children.empty());
  CHECK(t.children[1].children[0].coordinate.to_string() == "g:c:3");
  CHECK(tree_from_json(tree_to_json(t)) == t);
  for (const char* bad : {"", "[]", "{}", R"({"coordinate":5})", R"({"coordinate":"g:a"})",
                          R"({"coordinate":"g:a:1","children":{}})",
                          R"({"coordinate":"g:a:1","children":[3]})", "{\"coordinate\":\"g:a:1\""}) {
    CAPTURE(bad);
    CHECK(error_kind([&] { parse_tree(bad); }) == ErrorKind::MalformedTree);
  }
  std::string deep = R"({"coordinate":"g:a:1"})";
  for (int i = 0; i < 600; ++i) deep = R"({"coordinate":"g:a:1","children":[)" + deep + "]}";
  CHECK(error_kind([&] { parse_tree(deep); }) == ErrorKind::MalformedTree);
}

TEST_CASE("set files skip comments and reject repeats") {
  auto set = parse_set("# header\n\ng:a:1\r\n  g:b:jar:2  \n# g:c:3\ng:c:3");
  CHECK(strings(set) == std::vector<std::string>{"g:a:1", "g:b:2", "g:c:3"});
  CHECK(parse_set("").empty());
  CHECK(error_kind([] { parse_set("g:a:1\ng:a:2\n"); }) == ErrorKind::MalformedTree);
  CHECK(error_kind([] { parse_set("g:a:1\nnonsense\n"); }) == ErrorKind::MalformedTree);
}

TEST_CASE("nearest version wins and losers are logged") {
  CHECK(strings(mediate(node("g:root:1")).coordinates) == std::vector<std::string>{"g:root:1"});
  DependencyTree t = node("g:root:1", {node("g:A:1"), node("g:B:1", {node("g:A:2")})});
  ResolvedSet r = mediate(t);
  CHECK(strings(r.coordinates) == std::vector<std::string>{"g:root:1", "g:A:1", "g:B:1"});
  REQUIRE(r.mediation_log.size() == 1);
  CHECK(r.mediation_log[0] == MediationEntry{"g:A", "1", 1, {{"2", 2}}});
  ResolvedSet tie = mediate(node("g:root:1", {node("g:A:1"), node("g:A:2")}));
  CHECK(strings(tie.coordinates) == std::vector<std::string>{"g:root:1", "g:A:1"});
  // A deeper, earlier-declared occurrence loses to a shallower later one.
  ResolvedSet deep = mediate(node("g:root:1", {node("g:B:1", {node("g:A:1")}), node("g:A:2")}));
  CHECK(strings(deep.coordinates) == std::vector<std::string>{"g:root:1", "g:B:1", "g:A:2"});
  Json j = resolved_to_json(r);
  CHECK(j["coordinates"] == Json::array({"g:root:1", "g:A:1", "g:B:1"}));
  CHECK(j["mediation"][0]["losers"][0]["depth"] == 2);
}

TEST_CASE("conflict fixtures agree with the brute-force oracle") {
  int n = 0;
  for (const auto& e : std::filesystem::directory_iterator(fixture_dir() / "trees")) {
    CAPTURE(e.path().filename().string());
    DependencyTree t = parse_tree(read_text(e.path()));
    CHECK(mediate(t) == oracle_mediate(t));
    ++n;
  }
  CHECK(n >= 6);
}

TEST_CASE("random trees agree with the oracle and mediation is idempotent") {
  std::mt19937 rng(31337);
  for (int i = 0; i < 500; ++i) {
    DependencyTree t = random_tree(rng, 60);
    ResolvedSet r = mediate(t);
    CHECK(r == oracle_mediate(t));
    DependencyTree flat{r.coordinates[0], {}};
    for (std::size_t k = 1; k < r.coordinates.size(); ++k) flat.children.push_back({r.coordinates[k], {}});
    ResolvedSet again = mediate(flat);
    CHECK(again.coordinates == r.coordinates);
    CHECK(again.mediation_log.empty());
  }
}

TEST_CASE("local repositories use the Maven layout") {
  CHECK(ArtifactFetcher::jar_relative_path(parse_coordinate("com.x:lib:1.0")) ==
        std::filesystem::path("com/x/lib/1.0/lib-1.0.jar"));
  TempDir repo;
  write_text(repo / "com/x/lib/1.0/lib-1.0.jar", "PK-bytes");
  ArtifactFetcher f(repo.path().string());
  CHECK_FALSE(f.is_remote());
  auto bytes = f.fetch_jar(parse_coordinate("com.x:lib:1.0"));
  CHECK(std::string(bytes.begin(), bytes.end()) == "PK-bytes");
  CHECK(error_kind([&] { f.fetch_jar(parse_coordinate("com.x:lib:2.0")); }) ==
        ErrorKind::ArtifactNotFound);
  CHECK(f.network_ops() == 0);
}

TEST_CASE("remote fetches are cached") {
  TempDir cache;
  auto t = std::make_shared<ScriptedTransport>(std::deque<TransportResponse>{{200, "jar-bytes"}});
  ArtifactFetcher f("http://repo.invalid/maven2/", cache.path(), t);
  auto c = parse_coordinate("com.x:lib:1.0");
  CHECK(f.is_remote());
  CHECK(f.fetch_jar(c).size() == 9);
  CHECK(f.network_ops() == 1);
  CHECK(t->urls == std::vector<std::string>{"http://repo.invalid/maven2/com/x/lib/1.0/lib-1.0.jar"});
  CHECK(f.fetch_jar(c).size() == 9);
  CHECK(f.network_ops() == 1);
  CHECK(read_text(cache / "com/x/lib/1.0/lib-1.0.jar") == "jar-bytes");
}

TEST_CASE("transient failures are retried at most twice") {
  auto c = parse_coordinate("com.x:lib:1.0");
  {
    auto t = std::make_shared<ScriptedTransport>(
        std::deque<TransportResponse>{{503, ""}, {-1, ""}, {200, "ok"}});
    ArtifactFetcher f("http://repo.invalid", std::nullopt, t);
    CHECK(f.fetch_jar(c).size() == 2);
    CHECK(f.network_ops() == 3);
  }
  {
    auto t = std::make_shared<ScriptedTransport>(
        std::deque<TransportResponse>{{500, ""}, {502, ""}, {503, ""}});
    ArtifactFetcher f("http://repo.invalid", std::nullopt, t);
    CHECK(error_kind([&] { f.fetch_jar(c); }) == ErrorKind::TransportError);
    CHECK(f.network_ops() == 3);
  }
  {
    auto t = std::make_shared<ScriptedTransport>(std::deque<TransportResponse>{{404, ""}});
    ArtifactFetcher f("http://repo.invalid", std::nullopt, t);
    CHECK(error_kind([&] { f.fetch_jar(c); }) == ErrorKind::ArtifactNotFound);
    CHECK(f.network_ops() == 1);
  }
  {
    auto t = std::make_shared<ScriptedTransport>(std::deque<TransportResponse>{{403, ""}});
    ArtifactFetcher f("http://repo.invalid", std::nullopt, t);
    CHECK(error_kind([&] { f.fetch_jar(c); }) == ErrorKind::TransportError);
    CHECK(f.network_ops() == 1);
  }
}

TEST_CASE("HTTP transport against a local server") {
  httplib::Server server;
  server.Get("/repo/com/x/lib/1.0/lib-1.0.jar",
             [](const httplib::Request&, httplib::Response& res) { res.set_content("served", "application/java-archive"); });
  int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  TempDir cache;
  std::string base = "http://127.0.0.1:" + std::to_string(port) + "/repo";
  ArtifactFetcher f(base, cache.path());
  auto bytes = f.fetch_jar(parse_coordinate("com.x:lib:1.0"));
  CHECK(std::string(bytes.begin(), bytes.end()) == "served");
  CHECK(error_kind([&] { f.fetch_jar(parse_coordinate("com.x:lib:9")); }) ==
        ErrorKind::ArtifactNotFound);
  server.stop();
  th.join();

  HttpTransport http(std::chrono::milliseconds(500));
  CHECK(error_kind([&] { http.get("https://example.invalid/x"); }) == ErrorKind::TransportError);
  CHECK(error_kind([&] { http.get(base + "/gone"); }) == ErrorKind::TransportError);
}

}  // TEST_SUITE
