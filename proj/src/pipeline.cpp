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


#include "cgstitch/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>

#include "cgstitch/classfile.hpp"
#include "cgstitch/hierarchy.hpp"

namespace cgstitch {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

}  // namespace

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  std::vector<std::exception_ptr> errors(n);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (unsigned j = 0; j < jobs; ++j) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& w : workers) w.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

PartialCG Pipeline::generate(const MavenCoordinate& c, std::vector<std::string>* notes,
                             std::uint64_t* parses) {
  std::vector<std::uint8_t> bytes = fetcher_.fetch_jar(c);
  JarContents jar = read_jar(std::span<const std::uint8_t>(bytes));
  std::uint64_t parsed = jar.classes.size() + jar.skipped.size();
  class_parses_ += parsed;
  if (parses) *parses += parsed;
  if (notes) {
    for (const auto& s : jar.skipped) {
      notes->push_back(c.to_string() + ": skipped " + s.entry_path + ": " + s.reason);
    }
    for (const auto& d : jar.diagnostics) notes->push_back(c.to_string() + ": " + d);
  }
  std::vector<ClassSummary> classes;
  classes.reserve(jar.classes.size());
  for (auto& jc : jar.classes) classes.push_back(std::move(jc.summary));
  return build_partial_cg(c, classes);
}

RunResult Pipeline::run(const std::vector<MavenCoordinate>& set, const RunOptions& options) {
  RunResult result;
  std::atomic<std::uint64_t> generations{0};
  std::atomic<std::uint64_t> parses{0};
  std::mutex notes_mu;

  auto t0 = Clock::now();
  std::vector<std::optional<PartialCG>> slots(set.size());
  parallel_for(set.size(), options.jobs, [&](std::size_t i) {
    slots[i] = pool_.ensure(set[i], [&](const MavenCoordinate& c) {
      std::vector<std::string> notes;
      std::uint64_t parsed = 0;
      PartialCG pcg = generate(c, &notes, &parsed);
      parses += parsed;
      ++generations;
      std::lock_guard lock(notes_mu);
      for (auto& n : notes) result.generation_notes.push_back(std::move(n));
      return pcg;
    });
  });
  std::vector<PartialCG> parts;
  parts.reserve(slots.size());
  for (auto& s : slots) parts.push_back(std::move(*s));
  double pool_ms = elapsed_ms(t0);

  auto t1 = Clock::now();
  UCH uch = build_uch(parts);
  double uch_ms = elapsed_ms(t1);

  auto t2 = Clock::now();
  result.cg = stitch(uch, parts, options.stitch);
  if (!options.include_abstract_targets) remove_abstract_targets(result.cg);
  double stitch_ms = elapsed_ms(t2);

  std::sort(result.generation_notes.begin(), result.generation_notes.end());
  result.cg.stats = {pool_ms, uch_ms, stitch_ms};
  result.counters.requests = set.size();
  result.counters.generations = generations.load();
  result.counters.class_parses = parses.load();
  return result;
}

}  // namespace cgstitch
