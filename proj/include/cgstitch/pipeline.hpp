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


// pipeline.hpp -- the end-to-end stitch run shared by the CLI, the
// benchmark harness and the service: pooled partial CGs for a resolved set,
// then UCH construction and stitching, with phase timings and counters.

#ifndef CGSTITCH_PIPELINE_HPP
#define CGSTITCH_PIPELINE_HPP

#include <atomic>
#include <functional>
#include <cstdint>
#include <string>
#include <vector>

#include "cgstitch/depset.hpp"
#include "cgstitch/model.hpp"
#include "cgstitch/partial.hpp"
#include "cgstitch/pool.hpp"
#include "cgstitch/stitch.hpp"

namespace cgstitch {

struct RunOptions {
  StitchOptions stitch;
  bool include_abstract_targets = true;
  // Concurrent pool lookups and generations; 0 picks the hardware count.
  unsigned jobs = 1;
};

// Counters for a single run. Deterministic for a given input and pool state.
struct RunCounters {
  std::uint64_t requests = 0;
  std::uint64_t generations = 0;
  std::uint64_t class_parses = 0;

  std::uint64_t avoided() const { return requests - generations; }
  friend bool operator==(const RunCounters&, const RunCounters&) = default;
};

struct RunResult {
  FullCG cg;  // cg.stats holds the phase timings
  RunCounters counters;
  // Non-fatal notes from JARs generated during this run.
  std::vector<std::string> generation_notes;
};

class Pipeline {
 public:
  Pipeline(Pool& pool, ArtifactFetcher& fetcher) : pool_(pool), fetcher_(fetcher) {}

  // fetch_jar -> read_jar -> build_partial_cg, without touching the pool.
  PartialCG generate(const MavenCoordinate& c, std::vector<std::string>* notes = nullptr,
                     std::uint64_t* parses = nullptr);

  // Throws Error; when several coordinates fail, the first in classpath
  // order is reported.
  RunResult run(const std::vector<MavenCoordinate>& set, const RunOptions& options = {});

  Pool& pool() { return pool_; }
  // Class files parsed by this pipeline since construction.
  std::uint64_t class_parses() const { return class_parses_.load(); }

 private:
  Pool& pool_;
  ArtifactFetcher& fetcher_;
  std::atomic<std::uint64_t> class_parses_{0};
};

// Runs fn(i) for i in [0, n) on up to `jobs` threads (0 = hardware count).
// Rethrows the exception of the lowest failing index.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

}  // namespace cgstitch

#endif  // CGSTITCH_PIPELINE_HPP
