// Copyright 2026 The cuedist Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// cuedist: command-line front end for stimulus generation, measurement,
// analysis and the listening-session service.
//
// Exit codes: 0 success, 1 usage error, 2 data or I/O error.

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cuedist/bcc_file.h"
#include "cuedist/config.h"
#include "cuedist/error.h"
#include "cuedist/fileio.h"
#include "cuedist/pipeline.h"
#include "cuedist/report.h"
#include "cuedist/score_csv.h"
#include "cuedist/session.h"
#include "cuedist/synth_raters.h"
#include "cuedist/wav.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

cuedist::PipelineConfig ConfigOrDefault(const std::string& path) {
  if (path.empty()) return cuedist::PipelineConfig{};
  return cuedist::LoadConfig(path);
}

cuedist::SessionServer* g_server = nullptr;

extern "C" void OnSignal(int) {
  if (g_server != nullptr) g_server->Stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inter-channel cue distortion toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<uint64_t> seed;
  std::string out;

  // generate-items
  auto* gen = app.add_subcommand("generate-items",
                                 "write the bundled stereo items and a config");
  double seconds = 3.0;
  gen->add_option("--out", out, "output directory")->required();
  gen->add_option("--seed", seed, "item seed");
  gen->add_option("--seconds", seconds, "item duration")->check(CLI::PositiveNumber);

  // encode
  auto* enc = app.add_subcommand("encode", "stereo WAV -> mono + cue stream");
  std::string in_path, out_path;
  enc->add_option("input", in_path, "stereo WAV")->required();
  enc->add_option("output", out_path, "BCC stream")->required();
  enc->add_option("--config", config_path, "pipeline config (framing and cues)");

  // decode
  auto* dec = app.add_subcommand("decode", "cue stream -> stereo WAV");
  bool no_icld = false, no_icc = false;
  dec->add_option("input", in_path, "BCC stream")->required();
  dec->add_option("output", out_path, "stereo WAV")->required();
  dec->add_flag("--no-icld", no_icld, "skip ICLD reconstruction");
  dec->add_flag("--no-icc", no_icc, "skip ICC reconstruction");

  // conditions
  auto* cond = app.add_subcommand("conditions",
                                  "generate the condition stimuli and manifest");
  cond->add_option("--config", config_path, "pipeline config")->required();
  cond->add_option("--seed", seed, "override the config seed");
  cond->add_option("--out", out, "override the output directory");

  // measure
  auto* meas = app.add_subcommand("measure", "MOVs of every manifest entry");
  std::string manifest_path;
  meas->add_option("manifest", manifest_path, "manifest.jsonl")->required();
  meas->add_option("--config", config_path, "pipeline config (framing and cues)");
  meas->add_option("--out", out, "results file (default: movs.jsonl next to the manifest)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "synthetic raters from MOV results");
  std::string movs_path;
  int raters = 7;
  sim->add_option("movs", movs_path, "movs.jsonl")->required();
  sim->add_option("--out", out, "scores CSV")->required();
  sim->add_option("--seed", seed, "rater seed");
  sim->add_option("--raters", raters, "number of raters")->check(CLI::PositiveNumber);

  // analyze
  auto* ana = app.add_subcommand("analyze", "statistics over a score CSV");
  std::string scores_path;
  double alpha = 0.05;
  int mc_reps = 10000;
  bool independent = false;
  std::vector<std::string> group_args;
  ana->add_option("scores", scores_path, "scores CSV")->required();
  ana->add_option("--config", config_path, "pipeline config providing item groups");
  ana->add_option("--group", group_args, "ITEM=GROUP (repeatable)");
  ana->add_option("--out", out, "report directory")->required();
  ana->add_option("--alpha", alpha, "significance level")->check(CLI::Range(0.0, 1.0));
  ana->add_option("--mc-reps", mc_reps, "Lilliefors Monte Carlo replications")
      ->check(CLI::PositiveNumber);
  ana->add_option("--seed", seed, "Lilliefors Monte Carlo seed");
  ana->add_flag("--independent", independent, "two-sample post-hoc tests");

  // serve
  auto* srv = app.add_subcommand("serve", "run the listening-session service");
  std::string root = "sessions", host = "127.0.0.1";
  int port = 8080;
  srv->add_option("--root", root, "session store directory");
  srv->add_option("--manifest", manifest_path, "default manifest for new sessions");
  srv->add_option("--host", host, "bind address");
  srv->add_option("--port", port, "port (0 picks a free one)")->check(CLI::Range(0, 65535));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) {
      cuedist::ItemOptions options;
      options.seconds = seconds;
      if (seed) options.seed = *seed;
      auto config = cuedist::BundledConfig(fs::path(out) / "out");
      config.items = cuedist::GenerateItems(fs::path(out) / "items", options);
      // Paths in the written config are relative to it.
      for (auto& item : config.items) item.path = fs::path("items") / item.path.filename();
      config.out_dir = "out";
      cuedist::WriteFileAtomic(fs::path(out) / "config.json", cuedist::ConfigToJson(config));
      std::cout << "wrote " << config.items.size() << " items and "
                << (fs::path(out) / "config.json").string() << "\n";
    } else if (*enc) {
      cuedist::CodecConfig codec = ConfigOrDefault(config_path).codec;
      const auto stereo = cuedist::ReadWav(in_path);
      codec.frame.sample_rate = stereo.sample_rate;
      cuedist::WriteBccFile(out_path, cuedist::Encode(stereo, codec));
    } else if (*dec) {
      cuedist::SynthesisFlags flags;
      flags.apply_icld = !no_icld;
      flags.apply_icc = !no_icc;
      cuedist::WriteWav(out_path, cuedist::Decode(cuedist::ReadBccFile(in_path), flags));
    } else if (*cond) {
      auto config = cuedist::LoadConfig(config_path);
      if (seed) config.seed = *seed;
      if (!out.empty()) config.out_dir = out;
      const auto entries = cuedist::RunConditions(config);
      std::cout << "wrote " << entries.size() << " stimuli and "
                << (config.out_dir / "manifest.jsonl").string() << "\n";
    } else if (*meas) {
      const auto mov = ConfigOrDefault(config_path).MakeMovConfig();
      const fs::path results =
          out.empty() ? fs::path(manifest_path).parent_path() / "movs.jsonl" : fs::path(out);
      const auto records = cuedist::RunMeasure(manifest_path, mov, results);
      std::cout << "wrote " << records.size() << " MOV records to " << results.string()
                << "\n";
    } else if (*sim) {
      cuedist::RaterModel model;
      model.num_raters = raters;
      if (seed) model.seed = *seed;
      const auto table = cuedist::SimulateRatings(cuedist::ReadMovRecords(movs_path), model);
      cuedist::WriteScoreCsv(out, table);
      std::cout << "wrote " << table.size() << " scores to " << out << "\n";
    } else if (*ana) {
      const auto table = cuedist::ReadScoreCsv(scores_path);
      std::map<std::string, std::string> grouping;
      if (!config_path.empty()) grouping = cuedist::LoadConfig(config_path).Grouping();
      for (const std::string& arg : group_args) {
        const size_t eq = arg.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == arg.size()) {
          throw UsageError("--group expects ITEM=GROUP, got '" + arg + "'");
        }
        grouping[arg.substr(0, eq)] = arg.substr(eq + 1);
      }
      if (grouping.empty()) {
        for (const auto& row : table) grouping[row.item_id] = "all";
      }
      cuedist::AnalysisOptions options;
      options.alpha = alpha;
      options.mc_reps = mc_reps;
      options.independent = independent;
      if (seed) options.mc_seed = *seed;
      const auto reports = cuedist::WriteAnalysis(table, grouping, options, out);
      for (const auto& r : reports) {
        std::cout << r.group << ": " << r.rows << " rows";
        for (const char* effect : {"ICLDD", "ICCD", "ICLDD:ICCD"}) {
          if (const auto* a = r.FindAnova(effect)) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "  %s F=%.3f p=%.4g", effect, a->f, a->p);
            std::cout << buf;
          }
        }
        std::cout << "\n";
      }
    } else if (*srv) {
      cuedist::SessionStore store(root);
      cuedist::ServerOptions options;
      options.default_manifest = manifest_path;
      cuedist::SessionServer server(store, options);
      const int bound = server.Bind(host, port);
      if (bound < 0) {
        std::cerr << "error: cannot bind " << host << ":" << port << "\n";
        return kExitData;
      }
      g_server = &server;
      std::signal(SIGINT, OnSignal);
      std::signal(SIGTERM, OnSignal);
      std::cout << "listening on http://" << host << ":" << bound << "\n" << std::flush;
      server.Run();
      g_server = nullptr;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const cuedist::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}
