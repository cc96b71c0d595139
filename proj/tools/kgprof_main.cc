// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// kgprof command line: one subcommand per pipeline stage plus run-all.
//
// Exit codes: 0 success, 1 usage error, 2 invalid configuration,
// 10 + stage index (ingest 11 ... eval 18) when a stage fails.

#include <algorithm>
#include <cctype>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "kgprof/pipeline.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitStageBase = 10;

void print_error(const kgprof::Error& e, std::optional<kgprof::Stage> stage) {
  nlohmann::ordered_json j;
  j["error"] = std::string(kgprof::error_code_name(e.code()));
  j["message"] = e.what();
  if (stage) j["stage"] = std::string(kgprof::stage_name(*stage));
  if (e.line() > 0) j["line"] = e.line();
  std::cerr << j.dump() << '\n';
}

std::string flag_name(std::string_view key) {
  std::string s(key);
  std::replace(s.begin(), s.end(), '_', '-');
  return "--" + s;
}

std::string env_name(std::string_view key) {
  std::string s = "KGP_";
  for (char c : key) s += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("kgprof"));
  spdlog::set_pattern("[%l] %v");

  CLI::App app{"Entity profiling for knowledge graphs"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::string config_path;
  std::map<std::string, std::string> values;
  app.add_option("-c,--config", config_path, "flat key = value config file")->envname("KGP_CONFIG");
  for (const kgprof::ConfigKey& k : kgprof::config_keys()) {
    auto* opt = app.add_option(flag_name(k.name), values[std::string(k.name)], std::string(k.help));
    opt->envname(env_name(k.name));
  }
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "debug logging");

  struct Command {
    std::string name;
    std::string help;
    std::optional<kgprof::Stage> stage;
  };
  const std::vector<Command> commands = {
      {"ingest", "parse the input graph into graph.tsv", kgprof::Stage::kIngest},
      {"stats", "write graph statistics to stats.txt", kgprof::Stage::kStats},
      {"labels", "enumerate and filter candidate labels into candidates.json", kgprof::Stage::kLabels},
      {"embed", "generate walks and train embeddings", kgprof::Stage::kEmbed},
      {"score", "score candidate distinctiveness into scored.json", kgprof::Stage::kScore},
      {"select", "select label sets into labelset.json and trace.jsonl", kgprof::Stage::kSelect},
      {"profile", "write entity profiles", kgprof::Stage::kProfile},
      {"eval", "compare label sets with a ground truth", kgprof::Stage::kEval},
      {"run-all", "run every stage in order", std::nullopt},
  };
  std::optional<std::size_t> chosen;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    auto* sub = app.add_subcommand(commands[i].name, commands[i].help);
    sub->fallthrough();
    sub->callback([&chosen, i] { chosen = i; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  if (verbose) spdlog::set_level(spdlog::level::debug);

  kgprof::PipelineConfig cfg;
  try {
    if (!config_path.empty()) kgprof::load_config_file(config_path, cfg);
    for (const kgprof::ConfigKey& k : kgprof::config_keys()) {
      const std::string& v = values[std::string(k.name)];
      if (!v.empty()) kgprof::set_config_value(cfg, k.name, v);
    }
    kgprof::validate_config(cfg);
  } catch (const kgprof::Error& e) {
    print_error(e, std::nullopt);
    return kExitConfig;
  }

  const Command& cmd = commands[*chosen];
  kgprof::Pipeline pipeline(cfg);
  int code = 0;
  try {
    if (cmd.stage) {
      pipeline.run(*cmd.stage);
    } else {
      pipeline.run_all();
    }
  } catch (const kgprof::StageError& e) {
    print_error(e, e.stage());
    code = kExitStageBase + static_cast<int>(e.stage());
  }
  try {
    pipeline.write_manifest(cmd.name);
  } catch (const kgprof::Error& e) {
    print_error(e, std::nullopt);
    if (code == 0) code = kExitStageBase;
  }
  return code;
}
