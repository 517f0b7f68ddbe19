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


#include "cli.hpp"

#include <pthread.h>
#include <signal.h>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "cgstitch/bench.hpp"
#include "cgstitch/classfile.hpp"
#include "cgstitch/codec.hpp"
#include "cgstitch/depset.hpp"
#include "cgstitch/fileio.hpp"
#include "cgstitch/pipeline.hpp"
#include "cgstitch/pool.hpp"
#include "cgstitch/service.hpp"

namespace cgstitch::cli {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ArtifactNotFound:
      return kArtifactNotFound;
    case ErrorKind::PartsMismatch:
    case ErrorKind::TransportError:
      return kInternal;
    default:
      return kInput;
  }
}

std::string read_input(const std::string& path) {
  auto text = read_text_file(path);
  if (!text) throw Error(ErrorKind::IoError, "cannot read " + path);
  return std::move(*text);
}

MavenCoordinate coordinate_argument(const std::string& text) {
  try {
    return parse_coordinate(text);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

std::unique_ptr<ArtifactFetcher> make_fetcher(const std::string& repo, const std::string& cache,
                                              const fs::path& pool) {
  std::optional<fs::path> cache_dir;
  if (!cache.empty()) {
    cache_dir = cache;
  } else if (repo.starts_with("http://") || repo.starts_with("https://")) {
    cache_dir = pool / ".cache" / "artifacts";
  }
  return std::make_unique<ArtifactFetcher>(repo, cache_dir);
}

std::string phase_json(const RunResult& r) {
  Json j = {{"poolMs", r.cg.stats.pool_ms},
            {"uchMs", r.cg.stats.uch_ms},
            {"stitchMs", r.cg.stats.stitch_ms},
            {"requests", r.counters.requests},
            {"generations", r.counters.generations},
            {"generationsAvoided", r.counters.avoided()},
            {"classParses", r.counters.class_parses}};
  return dump_canonical(j);
}

struct Options {
  std::string pool;
  std::string repo;
  std::string cache;
  unsigned jobs = 1;

  std::string jar;
  std::string coordinate;

  std::string tree;
  std::string set;
  std::string out_file;
  bool stats = false;
  bool use_internal_edges = false;
  bool exclude_abstract = false;

  std::vector<std::string> trees;
  unsigned rounds = 2;
  std::string csv;

  std::string listen = "127.0.0.1:8080";
};

int cmd_ingest(const Options& o, std::ostream& out, std::ostream&) {
  MavenCoordinate c = coordinate_argument(o.coordinate);
  JarContents jar = read_jar(fs::path(o.jar));
  std::vector<ClassSummary> classes;
  std::size_t methods = 0;
  for (auto& jc : jar.classes) {
    methods += jc.summary.methods.size();
    classes.push_back(std::move(jc.summary));
  }
  PartialCG pcg = build_partial_cg(c, classes);
  Pool pool(o.pool);
  pool.put(pcg);
  pool.record_generation();
  pool.flush_stats();
  Json j = {{"coordinate", c.to_string()},
            {"classes", pcg.classes.size()},
            {"methods", methods},
            {"callSites", pcg.call_sites.size()},
            {"internalEdges", pcg.internal_edges.size()},
            {"skippedEntries", jar.skipped.size()}};
  out << dump_canonical(j) << '\n';
  return kOk;
}

int cmd_resolve(const Options& o, std::ostream& out, std::ostream&) {
  ResolvedSet r = mediate(parse_tree(read_input(o.tree)));
  out << dump_canonical(resolved_to_json(r), 2) << '\n';
  return kOk;
}

std::vector<MavenCoordinate> load_set(const Options& o) {
  if (!o.tree.empty()) return mediate(parse_tree(read_input(o.tree))).coordinates;
  return parse_set(read_input(o.set));
}

int cmd_stitch(const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<MavenCoordinate> set = load_set(o);
  Pool pool(o.pool);
  auto fetcher = make_fetcher(o.repo, o.cache, pool.root());
  Pipeline pipeline(pool, *fetcher);
  RunOptions options;
  options.jobs = o.jobs;
  options.stitch.jobs = o.jobs;
  options.stitch.use_internal_edges = o.use_internal_edges;
  options.include_abstract_targets = !o.exclude_abstract;
  RunResult r = pipeline.run(set, options);
  pool.flush_stats();
  for (const auto& n : r.generation_notes) err << "note: " << n << '\n';
  for (const auto& d : pool.take_diagnostics()) err << "note: " << d << '\n';
  std::string text = serialize_fullcg(r.cg, {.include_stats = o.stats});
  if (o.out_file.empty()) {
    out << text;
  } else {
    write_file_atomically(o.out_file, text);
    Json summary = {{"out", o.out_file},
                    {"coordinates", set.size()},
                    {"nodes", r.cg.nodes.size()},
                    {"edges", r.cg.edges.size()},
                    {"unresolved", r.cg.unresolved.size()},
                    {"dynamic", r.cg.dynamic_sites.size()}};
    out << dump_canonical(summary) << '\n';
  }
  err << phase_json(r) << '\n';
  return kOk;
}

int cmd_bench(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.rounds == 0) throw UsageError("--rounds must be at least 1");
  std::vector<BenchInput> inputs;
  for (const auto& t : o.trees) inputs.push_back(load_bench_input(t));
  Pool pool(o.pool);
  auto fetcher = make_fetcher(o.repo, o.cache, pool.root());
  Pipeline pipeline(pool, *fetcher);
  RunOptions options;
  options.jobs = o.jobs;
  options.stitch.jobs = o.jobs;
  BenchReport report = run_bench(pipeline, inputs, o.rounds, options);
  pool.flush_stats();
  if (!o.csv.empty()) write_file_atomically(o.csv, bench_csv(report));
  err << bench_table(report);
  out << dump_canonical(bench_json(report), 2) << '\n';
  return kOk;
}

int cmd_pool_stats(const Options& o, std::ostream& out, std::ostream&) {
  Pool pool(o.pool);
  out << dump_canonical(stats_json(pool.stats())) << '\n';
  return kOk;
}

int cmd_serve(const Options& o, std::ostream& out, std::ostream& err) {
  auto colon = o.listen.rfind(':');
  if (colon == std::string::npos) throw UsageError("--listen expects HOST:PORT");
  std::string host = o.listen.substr(0, colon);
  int port = 0;
  try {
    std::size_t used = 0;
    port = std::stoi(o.listen.substr(colon + 1), &used);
    if (used != o.listen.size() - colon - 1 || port < 0 || port > 65535) throw std::out_of_range("");
  } catch (const std::exception&) {
    throw UsageError("bad port in --listen " + o.listen);
  }

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  Pool pool(o.pool);
  auto fetcher = make_fetcher(o.repo, o.cache, pool.root());
  Service service(pool, *fetcher, {o.jobs, o.use_internal_edges});
  int bound = service.bind(host, port);
  out << dump_canonical(Json{{"listening", host + ":" + std::to_string(bound)}}) << std::endl;
  err << "serving on " << host << ":" << bound << '\n';

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    service.stop();
  });
  service.serve();
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  pool.flush_stats();
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Incremental CHA call graphs stitched from pooled per-package partial graphs",
               "cgstitch"};
  app.require_subcommand(1);
  Options o;

  auto add_pool = [&](CLI::App* cmd) {
    cmd->add_option("--pool", o.pool, "Pool directory")->envname("CGSTITCH_POOL")->required();
  };
  auto add_repo = [&](CLI::App* cmd) {
    cmd->add_option("--repo", o.repo, "Maven repository directory or http:// URL")->required();
    cmd->add_option("--cache", o.cache, "Artifact cache for a remote repository");
    cmd->add_option("--jobs", o.jobs, "Worker threads, 0 for all cores")->check(CLI::NonNegativeNumber);
  };

  auto* ingest = app.add_subcommand("ingest", "Build a partial CG from a JAR and pool it");
  ingest->add_option("--jar", o.jar, "JAR file")->required();
  ingest->add_option("--coordinate", o.coordinate, "groupId:artifactId:version")->required();
  add_pool(ingest);

  auto* resolve = app.add_subcommand("resolve", "Mediate a dependency tree");
  resolve->add_option("--tree", o.tree, "Dependency tree JSON")->required();

  auto* stitch_cmd = app.add_subcommand("stitch", "Stitch a full CG for a dependency set");
  auto* tree_opt = stitch_cmd->add_option("--tree", o.tree, "Dependency tree JSON");
  auto* set_opt = stitch_cmd->add_option("--set", o.set, "Coordinate list, classpath order");
  tree_opt->excludes(set_opt);
  set_opt->excludes(tree_opt);
  add_pool(stitch_cmd);
  add_repo(stitch_cmd);
  stitch_cmd->add_option("--out", o.out_file, "Output file; stdout when omitted");
  stitch_cmd->add_flag("--stats", o.stats, "Include phase timings in the output");
  stitch_cmd->add_flag("--use-internal-edges", o.use_internal_edges,
                       "Reuse package-internal edges where safe");
  stitch_cmd->add_flag("--exclude-abstract-targets", o.exclude_abstract,
                       "Drop edges into abstract declarations");

  auto* bench = app.add_subcommand("bench", "Time repeated stitches over shared pool");
  bench->add_option("--trees", o.trees, "Tree JSON or set files")->required()->expected(1, -1);
  add_pool(bench);
  add_repo(bench);
  bench->add_option("--rounds", o.rounds, "Rounds over all trees")->capture_default_str();
  bench->add_option("--csv", o.csv, "Also write the rows as CSV");

  auto* pool_stats = app.add_subcommand("pool-stats", "Print pool counters");
  add_pool(pool_stats);

  auto* serve = app.add_subcommand("serve", "Serve stitching over HTTP");
  serve->add_option("--listen", o.listen, "HOST:PORT")->capture_default_str();
  add_pool(serve);
  add_repo(serve);
  serve->add_flag("--use-internal-edges", o.use_internal_edges,
                  "Reuse package-internal edges where safe");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    err << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    err << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  if (stitch_cmd->parsed() && o.tree.empty() && o.set.empty()) {
    err << "error: stitch needs --tree or --set\n";
    return kUsage;
  }

  std::ostringstream buffered;
  int code = kInternal;
  try {
    if (ingest->parsed()) code = cmd_ingest(o, buffered, err);
    else if (resolve->parsed()) code = cmd_resolve(o, buffered, err);
    else if (stitch_cmd->parsed()) code = cmd_stitch(o, buffered, err);
    else if (bench->parsed()) code = cmd_bench(o, buffered, err);
    else if (pool_stats->parsed()) code = cmd_pool_stats(o, buffered, err);
    else if (serve->parsed()) return cmd_serve(o, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << '\n';
    return kInternal;
  }
  out << buffered.str();
  out.flush();
  return code;
}

}  // namespace cgstitch::cli
