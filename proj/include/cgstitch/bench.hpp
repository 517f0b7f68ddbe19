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


// bench.hpp -- repeated stitch runs over a list of dependency sets against
// one shared pool, reported per phase in the shape of a phase-timing table.

#ifndef CGSTITCH_BENCH_HPP
#define CGSTITCH_BENCH_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "cgstitch/pipeline.hpp"
#include "json.hpp"

namespace cgstitch {

struct BenchInput {
  std::string name;
  std::vector<MavenCoordinate> set;  // classpath order
};

// A tree JSON file is mediated; any other file is read as a set. The name
// is the file stem. Throws Error(IoError) or Error(MalformedTree).
BenchInput load_bench_input(const std::filesystem::path& path);

struct BenchRow {
  std::string label;  // tree name, or a summary label
  unsigned round = 1;
  std::size_t deps = 0;
  double pool_ms = 0;
  double uch_ms = 0;
  double stitch_ms = 0;
  double total_ms() const { return pool_ms + uch_ms + stitch_ms; }
  RunCounters counters;
};

struct BenchReport {
  std::vector<BenchRow> rows;     // one per input per round
  std::vector<BenchRow> summary;  // one total per round
};

// Rounds run the inputs in order. Throws on the first failing run.
BenchReport run_bench(Pipeline& pipeline, const std::vector<BenchInput>& inputs, unsigned rounds,
                      const RunOptions& options = {});

// Every row, then the per-round totals.
std::string bench_csv(const BenchReport& report);
// First-round rows, a cumulative row, and one row per later round.
std::string bench_table(const BenchReport& report);
nlohmann::json bench_json(const BenchReport& report);

}  // namespace cgstitch

#endif  // CGSTITCH_BENCH_HPP
