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


#include "cgstitch/bench.hpp"

#include <cstdio>
#include <sstream>

#include "cgstitch/fileio.hpp"

namespace cgstitch {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

BenchRow total_of(const std::vector<BenchRow>& rows, unsigned round, std::string label) {
  BenchRow t;
  t.label = std::move(label);
  t.round = round;
  for (const auto& r : rows) {
    if (r.round != round) continue;
    t.deps += r.deps;
    t.pool_ms += r.pool_ms;
    t.uch_ms += r.uch_ms;
    t.stitch_ms += r.stitch_ms;
    t.counters.requests += r.counters.requests;
    t.counters.generations += r.counters.generations;
    t.counters.class_parses += r.counters.class_parses;
  }
  return t;
}

std::string summary_label(unsigned round) {
  if (round == 1) return "cumulative";
  if (round == 2) return "+second round";
  return "+round " + std::to_string(round);
}

const std::vector<std::string> kColumns = {"round",       "tree",        "#deps",
                                           "poolPhase",   "uchPhase",    "stitchPhase",
                                           "total",       "generations", "generationsAvoided",
                                           "classParses"};

std::vector<std::string> cells(const BenchRow& r) {
  return {std::to_string(r.round),
          r.label,
          std::to_string(r.deps),
          fixed(r.pool_ms, 3),
          fixed(r.uch_ms, 3),
          fixed(r.stitch_ms, 3),
          fixed(r.total_ms(), 3),
          std::to_string(r.counters.generations),
          std::to_string(r.counters.avoided()),
          std::to_string(r.counters.class_parses)};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

BenchInput load_bench_input(const std::filesystem::path& path) {
  auto text = read_text_file(path);
  if (!text) throw Error(ErrorKind::IoError, "cannot read " + path.string());
  auto first = text->find_first_not_of(" \t\r\n");
  BenchInput in{path.stem().string(), {}};
  if (first != std::string::npos && (*text)[first] == '{') {
    in.set = mediate(parse_tree(*text)).coordinates;
  } else {
    in.set = parse_set(*text);
  }
  return in;
}

BenchReport run_bench(Pipeline& pipeline, const std::vector<BenchInput>& inputs, unsigned rounds,
                      const RunOptions& options) {
  BenchReport report;
  for (unsigned round = 1; round <= rounds; ++round) {
    for (const auto& in : inputs) {
      RunResult r = pipeline.run(in.set, options);
      report.rows.push_back({in.name, round, in.set.size(), r.cg.stats.pool_ms, r.cg.stats.uch_ms,
                             r.cg.stats.stitch_ms, r.counters});
    }
    report.summary.push_back(total_of(report.rows, round, summary_label(round)));
  }
  return report;
}

std::string bench_csv(const BenchReport& report) {
  std::ostringstream out;
  for (std::size_t i = 0; i < kColumns.size(); ++i) out << (i ? "," : "") << kColumns[i];
  out << '\n';
  auto emit = [&](const BenchRow& r) {
    auto c = cells(r);
    for (std::size_t i = 0; i < c.size(); ++i) out << (i ? "," : "") << csv_field(c[i]);
    out << '\n';
  };
  for (const auto& r : report.rows) emit(r);
  for (const auto& r : report.summary) emit(r);
  return out.str();
}

std::string bench_table(const BenchReport& report) {
  std::vector<std::vector<std::string>> grid;
  grid.emplace_back(kColumns.begin() + 1, kColumns.end());
  for (const auto& r : report.rows) {
    if (r.round != 1) continue;
    auto c = cells(r);
    grid.emplace_back(c.begin() + 1, c.end());
  }
  for (const auto& r : report.summary) {
    auto c = cells(r);
    grid.emplace_back(c.begin() + 1, c.end());
  }
  std::vector<std::size_t> width(grid[0].size(), 0);
  for (const auto& row : grid) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::ostringstream out;
  for (const auto& row : grid) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::string pad(width[i] - row[i].size(), ' ');
      out << (i ? "  " : "") << (i == 0 ? row[i] + pad : pad + row[i]);
    }
    out << '\n';
  }
  return out.str();
}

nlohmann::json bench_json(const BenchReport& report) {
  auto row_json = [](const BenchRow& r) {
    return nlohmann::json{{"round", r.round},
                          {"tree", r.label},
                          {"deps", r.deps},
                          {"poolMs", r.pool_ms},
                          {"uchMs", r.uch_ms},
                          {"stitchMs", r.stitch_ms},
                          {"totalMs", r.total_ms()},
                          {"requests", r.counters.requests},
                          {"generations", r.counters.generations},
                          {"generationsAvoided", r.counters.avoided()},
                          {"classParses", r.counters.class_parses}};
  };
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) rows.push_back(row_json(r));
  nlohmann::json summary = nlohmann::json::array();
  for (const auto& r : report.summary) summary.push_back(row_json(r));
  return {{"rows", std::move(rows)}, {"summary", std::move(summary)}};
}

}  // namespace cgstitch
