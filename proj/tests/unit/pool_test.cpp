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


#include <atomic>
#include <chrono>
#include <random>
#include <thread>

#include "cgstitch/codec.hpp"
#include "cgstitch/pool.hpp"
#include "doctest.h"
#include "programs.hpp"

using namespace cgstitch;
using namespace cgstitch::testing;

namespace {

PartialCG sample(const std::string& coord = "org.fixture.p03:app:1.0") {
  for (auto& p : build_parts(load_program("p03_shapes"))) {
    if (p.coordinate.to_string() == coord) return p;
  }
  throw std::runtime_error("no such part");
}

std::size_t count_files(const std::filesystem::path& dir) {
  std::size_t n = 0;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) n += e.is_regular_file();
  return n;
}

}  // namespace

TEST_SUITE("pool") {

TEST_CASE("entries live under the Maven repository path") {
  TempDir dir;
  Pool pool(dir.path());
  auto c = parse_coordinate("com.x:lib:1.0");
  CHECK(pool.entry_path(c) == dir.path() / "com" / "x" / "lib" / "1.0" / "partial-cg.json");
  CHECK(error_kind([&] { pool.entry_path(MavenCoordinate("..", "lib", "1")); }) ==
        ErrorKind::MalformedCoordinate);
  CHECK(error_kind([&] { pool.entry_path(MavenCoordinate("a..b", "lib", "1")); }) ==
        ErrorKind::MalformedCoordinate);
  CHECK(error_kind([&] { pool.entry_path(MavenCoordinate("a", "li/b", "1")); }) ==
        ErrorKind::MalformedCoordinate);
}

TEST_CASE("put then get returns the same partial CG and counts") {
  TempDir dir;
  Pool pool(dir.path());
  PartialCG pcg = sample();
  CHECK_FALSE(pool.get(pcg.coordinate).has_value());
  pool.put(pcg);
  auto back = pool.get(pcg.coordinate);
  REQUIRE(back.has_value());
  CHECK(*back == pcg);
  CHECK(pool.session_stats() == PoolStats{2, 1, 1, 0});
  CHECK(pool.peek(pcg.coordinate).has_value());
  CHECK(pool.session_stats().requests == 2);
}

TEST_CASE("ensure generates once, then serves from disk") {
  TempDir dir;
  Pool pool(dir.path());
  PartialCG pcg = sample();
  int calls = 0;
  auto gen = [&](const MavenCoordinate&) {
    ++calls;
    return pcg;
  };
  CHECK(pool.ensure(pcg.coordinate, gen) == pcg);
  CHECK(pool.ensure(pcg.coordinate, gen) == pcg);
  CHECK(calls == 1);
  PoolStats s = pool.session_stats();
  CHECK(s == PoolStats{2, 1, 1, 1});
  CHECK(s.avoided() == 1);
}

TEST_CASE("a failing generator stores nothing and is counted as a miss") {
  TempDir dir;
  Pool pool(dir.path());
  auto c = parse_coordinate("g:broken:1");
  auto gen = [](const MavenCoordinate& x) -> PartialCG {
    throw Error(ErrorKind::ArtifactNotFound, x.to_string());
  };
  CHECK(error_kind([&] { pool.ensure(c, gen); }) == ErrorKind::ArtifactNotFound);
  CHECK(pool.session_stats() == PoolStats{1, 0, 1, 0});
  CHECK_FALSE(pool.peek(c).has_value());
  auto wrong = [](const MavenCoordinate&) { return sample(); };
  CHECK(error_kind([&] { pool.ensure(c, wrong); }) == ErrorKind::PartsMismatch);
}

TEST_CASE("concurrent ensure calls share one generation") {
  std::mt19937 rng(99);
  for (int round = 0; round < 25; ++round) {
    TempDir dir;
    Pool pool(dir.path());
    PartialCG pcg = sample();
    std::atomic<int> calls{0};
    auto delay = std::chrono::microseconds(rng() % 2000);
    auto gen = [&](const MavenCoordinate&) {
      ++calls;
      std::this_thread::sleep_for(delay);
      return pcg;
    };
    std::vector<std::thread> threads;
    std::atomic<int> equal{0};
    for (int t = 0; t < 8; ++t) {
      auto start = std::chrono::microseconds(rng() % 500);
      threads.emplace_back([&, start] {
        std::this_thread::sleep_for(start);
        if (pool.ensure(pcg.coordinate, gen) == pcg) ++equal;
      });
    }
    for (auto& t : threads) t.join();
    CHECK(calls == 1);
    CHECK(equal == 8);
    PoolStats s = pool.session_stats();
    CHECK(s.requests == 8);
    CHECK(s.generations == 1);
    CHECK(s.hits + s.misses == s.requests);
  }
}

TEST_CASE("a crash before rename leaves no visible entry") {
  TempDir dir;
  Pool pool(dir.path());
  PartialCG pcg = sample();
  pool.set_before_rename_hook([](const std::filesystem::path&) { throw std::runtime_error("crash"); });
  CHECK_THROWS(pool.put(pcg));
  CHECK_FALSE(pool.peek(pcg.coordinate).has_value());
  CHECK(count_files(dir.path()) == 1);  // the orphaned temporary file
  pool.set_before_rename_hook({});
  pool.put(pcg);
  CHECK(pool.peek(pcg.coordinate) == pcg);
}

TEST_CASE("a rewritten entry is replaced atomically") {
  TempDir dir;
  Pool pool(dir.path());
  PartialCG pcg = sample();
  pool.put(pcg);
  std::string before = read_text(pool.entry_path(pcg.coordinate));
  bool checked = false;
  pool.set_before_rename_hook([&](const std::filesystem::path& tmp) {
    // The complete new content is on disk; readers still see the old.
    CHECK(read_text(tmp) == serialize_partial(pcg));
    CHECK(read_text(pool.entry_path(pcg.coordinate)) == before);
    checked = true;
  });
  pool.put(pcg);
  CHECK(checked);
}

TEST_CASE("corrupt entries are reported, not regenerated") {
  TempDir dir;
  Pool pool(dir.path());
  PartialCG pcg = sample();
  write_text(pool.entry_path(pcg.coordinate), "{\"formatVersion\":1,\"coordinate\":");
  CHECK(error_kind([&] { pool.get(pcg.coordinate); }) == ErrorKind::CorruptEntry);
  int calls = 0;
  auto gen = [&](const MavenCoordinate&) {
    ++calls;
    return pcg;
  };
  CHECK(error_kind([&] { pool.ensure(pcg.coordinate, gen); }) == ErrorKind::CorruptEntry);
  CHECK(calls == 0);
  // An entry holding another coordinate is corrupt too.
  PartialCG other = sample("org.fixture.p03:circle:1.0");
  write_text(pool.entry_path(pcg.coordinate), serialize_partial(other));
  CHECK(error_kind([&] { pool.peek(pcg.coordinate); }) == ErrorKind::CorruptEntry);
}

TEST_CASE("an entry from another format version is regenerated") {
  TempDir dir;
  Pool pool(dir.path());
  PartialCG pcg = sample();
  Json old = partial_to_json(pcg);
  old["formatVersion"] = 0;
  write_text(pool.entry_path(pcg.coordinate), old.dump());
  int calls = 0;
  auto gen = [&](const MavenCoordinate&) {
    ++calls;
    return pcg;
  };
  CHECK(pool.ensure(pcg.coordinate, gen) == pcg);
  CHECK(calls == 1);
  auto notes = pool.take_diagnostics();
  REQUIRE_FALSE(notes.empty());
  CHECK(notes[0].find("formatVersion") != std::string::npos);
  CHECK(pool.take_diagnostics().empty());
}

TEST_CASE("counters persist across pool objects") {
  TempDir dir;
  PartialCG pcg = sample();
  auto gen = [&](const MavenCoordinate&) { return pcg; };
  {
    Pool pool(dir.path());
    CHECK(pool.stats() == PoolStats{});
    pool.ensure(pcg.coordinate, gen);
  }
  {
    Pool pool(dir.path());
    pool.ensure(pcg.coordinate, gen);
    CHECK(pool.session_stats() == PoolStats{1, 1, 0, 0});
    CHECK(pool.stats() == PoolStats{2, 1, 1, 1});
    pool.record_generation();
    pool.flush_stats();
    CHECK(pool.stats() == PoolStats{3, 1, 2, 2});
  }
  Pool a(dir.path());
  Pool b(dir.path());
  std::thread ta([&] {
    for (int i = 0; i < 50; ++i) {
      a.get(pcg.coordinate);
      a.flush_stats();
    }
  });
  std::thread tb([&] {
    for (int i = 0; i < 50; ++i) {
      b.get(pcg.coordinate);
      b.flush_stats();
    }
  });
  ta.join();
  tb.join();
  CHECK(Pool(dir.path()).stats() == PoolStats{103, 101, 2, 2});
}

}  // TEST_SUITE
