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

// Staged pipeline. Every stage reads the files written by the stages before
// it from the output directory and writes its own, so any stage can be
// re-run alone.

#ifndef KGPROF_PIPELINE_H_
#define KGPROF_PIPELINE_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kgprof/common.h"

namespace kgprof {

struct PipelineConfig {
  std::string input;
  std::string format = "auto";  // auto | ntriples | tsv
  std::string type_predicate = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
  bool strict = true;
  double alpha = 0.1;
  bool include_inverse = false;
  double lambda_h = 1.0, lambda_a = 1.0, lambda_s = 1.0;
  std::size_t dim = 200;
  std::size_t walks = 100;
  std::size_t walk_len = 8;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double lr = 0.025;
  std::string estimator = "exact";  // exact | sampled
  std::size_t pair_budget = 100000;
  bool exclude_diagonal = false;
  double delta = 0.5;
  std::size_t top_k = 10;
  bool marginal_reward = false;
  std::size_t profile_len = 5;
  std::string truth;
  std::string eval_k = "5,10";
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::string out = "out";
};

struct ConfigKey {
  std::string_view name;
  std::string_view help;
};

// Every settable key, in snapshot order.
const std::vector<ConfigKey>& config_keys();

// Throws kInvalidArgument for unknown keys and unparsable values.
void set_config_value(PipelineConfig& cfg, std::string_view key, std::string_view value);
std::string get_config_value(const PipelineConfig& cfg, std::string_view key);

// Flat "key = value" lines; '#' starts a comment. Throws kMissingInput and
// kInvalidArgument (with the line number).
void load_config_file(const std::string& path, PipelineConfig& cfg);

// Range checks. Throws kInvalidAlpha and kInvalidArgument.
void validate_config(const PipelineConfig& cfg);

enum class Stage { kIngest = 1, kStats, kLabels, kEmbed, kScore, kSelect, kProfile, kEval };

std::string_view stage_name(Stage s);
const std::vector<Stage>& all_stages();

namespace artifact {
inline constexpr const char* kGraph = "graph.tsv";
inline constexpr const char* kStats = "stats.txt";
inline constexpr const char* kCandidates = "candidates.json";
inline constexpr const char* kWalks = "walks.txt";
inline constexpr const char* kEmbeddings = "embeddings.txt";
inline constexpr const char* kScored = "scored.json";
inline constexpr const char* kLabelSet = "labelset.json";
inline constexpr const char* kTrace = "trace.jsonl";
inline constexpr const char* kProfilesJson = "profiles.json";
inline constexpr const char* kProfilesMd = "profiles.md";
inline constexpr const char* kMetricsJson = "metrics.json";
inline constexpr const char* kMetricsTxt = "metrics.txt";
inline constexpr const char* kManifest = "manifest.json";
}  // namespace artifact

// A stage failure, carrying the stage it happened in.
class StageError : public Error {
 public:
  StageError(Stage stage, const Error& cause)
      : Error(cause.code(), cause.what(), cause.line()), stage_(stage) {}
  Stage stage() const { return stage_; }

 private:
  Stage stage_;
};

// Hex SHA-256 of a file's bytes.
std::string file_sha256(const std::string& path);

class Pipeline {
 public:
  explicit Pipeline(PipelineConfig cfg);

  // Throws StageError.
  void run(Stage stage);
  // All stages in order; eval is skipped when no truth file is configured.
  void run_all();

  // Config snapshot, digests of files read and written, stage timings.
  void write_manifest(std::string_view command) const;

  const PipelineConfig& config() const { return cfg_; }
  std::string path(std::string_view file) const;

 private:
  void ingest();
  void stats();
  void labels();
  void embed();
  void score();
  void select();
  void profile();
  void evaluate();

  std::string require(std::string_view file);
  std::string require_path(const std::string& path);
  void produced(std::string_view file);

  PipelineConfig cfg_;
  std::map<std::string, std::string> inputs_;   // path -> digest
  std::map<std::string, std::string> outputs_;  // file -> digest
  std::vector<std::pair<std::string, double>> timings_;
};

}  // namespace kgprof

#endif  // KGPROF_PIPELINE_H_
