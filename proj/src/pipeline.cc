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

#include "kgprof/pipeline.h"

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>
#include <spdlog/spdlog.h>

#include "kgprof/distinct.h"
#include "kgprof/evalkit.h"
#include "kgprof/graph.h"
#include "kgprof/label_io.h"
#include "kgprof/labels.h"
#include "kgprof/profiler.h"
#include "kgprof/rerank.h"
#include "kgprof/skipgram.h"
#include "kgprof/walks.h"

namespace kgprof {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw Error(ErrorCode::kInvalidArgument, fmt::format("invalid value '{}' for '{}'", value, key));
}

double to_double(std::string_view key, std::string_view v) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, v);
  return x;
}

std::uint64_t to_u64(std::string_view key, std::string_view v) {
  std::uint64_t x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, v);
  return x;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, v);
}

std::string from_double(double x) { return fmt::format("{}", x); }
std::string from_bool(bool b) { return b ? "true" : "false"; }

struct KeyImpl {
  ConfigKey key;
  std::function<void(PipelineConfig&, std::string_view)> set;
  std::function<std::string(const PipelineConfig&)> get;
};

#define KGP_STRING(name, help) \
  KeyImpl{{#name, help}, [](PipelineConfig& c, std::string_view v) { c.name = std::string(v); }, \
          [](const PipelineConfig& c) { return c.name; }}
#define KGP_DOUBLE(name, help) \
  KeyImpl{{#name, help}, [](PipelineConfig& c, std::string_view v) { c.name = to_double(#name, v); }, \
          [](const PipelineConfig& c) { return from_double(c.name); }}
#define KGP_SIZE(name, help) \
  KeyImpl{{#name, help}, [](PipelineConfig& c, std::string_view v) { c.name = to_u64(#name, v); }, \
          [](const PipelineConfig& c) { return std::to_string(c.name); }}
#define KGP_BOOL(name, help) \
  KeyImpl{{#name, help}, [](PipelineConfig& c, std::string_view v) { c.name = to_bool(#name, v); }, \
          [](const PipelineConfig& c) { return from_bool(c.name); }}

const std::vector<KeyImpl>& key_table() {
  static const std::vector<KeyImpl> table = {
      KGP_STRING(input, "input graph file"),
      KGP_STRING(format, "input format: auto, ntriples or tsv"),
      KGP_STRING(type_predicate, "predicate IRI of type assertions"),
      KGP_BOOL(strict, "fail on malformed input lines instead of skipping them"),
      KGP_DOUBLE(alpha, "support bound: keep labels with alpha < support < 1 - alpha"),
      KGP_BOOL(include_inverse, "also enumerate relational labels over incoming edges"),
      KGP_DOUBLE(lambda_h, "weight of homophily walks"),
      KGP_DOUBLE(lambda_a, "weight of attributive walks"),
      KGP_DOUBLE(lambda_s, "weight of structural walks"),
      KGP_SIZE(dim, "embedding dimension"),
      KGP_SIZE(walks, "walks per entity"),
      KGP_SIZE(walk_len, "entities per walk"),
      KGP_SIZE(window, "skip-gram window"),
      KGP_SIZE(negatives, "negative samples per context"),
      KGP_SIZE(epochs, "training epochs"),
      KGP_DOUBLE(lr, "initial learning rate"),
      KGP_STRING(estimator, "distinctiveness estimator: exact or sampled"),
      KGP_SIZE(pair_budget, "pairs per average for the sampled estimator"),
      KGP_BOOL(exclude_diagonal, "leave self pairs out of the internal similarity"),
      KGP_DOUBLE(delta, "coverage versus redundancy bias of the selection"),
      KGP_SIZE(top_k, "labels selected per type"),
      KGP_BOOL(marginal_reward, "reward the coverage gain instead of the coverage"),
      KGP_SIZE(profile_len, "maximum labels per profile"),
      KGP_STRING(truth, "ground-truth JSON for eval"),
      KGP_STRING(eval_k, "comma-separated cut-offs for eval"),
      KGP_SIZE(seed, "random seed"),
      KGP_SIZE(threads, "worker threads; 1 is fully deterministic"),
      KGP_STRING(out, "output directory"),
  };
  return table;
}

#undef KGP_STRING
#undef KGP_DOUBLE
#undef KGP_SIZE
#undef KGP_BOOL

const KeyImpl& find_key(std::string_view key) {
  for (const KeyImpl& k : key_table()) {
    if (k.key.name == key) return k;
  }
  throw Error(ErrorCode::kInvalidArgument, fmt::format("unknown config key '{}'", key));
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::size_t> parse_ks(std::string_view list) {
  std::vector<std::size_t> ks;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = list.find(',', start);
    const auto part = trim(list.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                               : comma - start));
    const auto k = to_u64("eval_k", part);
    if (k < 1) bad_value("eval_k", list);
    ks.push_back(k);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return ks;
}

GraphFormat input_format(const PipelineConfig& cfg) {
  if (cfg.format == "ntriples") return GraphFormat::kNTriples;
  if (cfg.format == "tsv") return GraphFormat::kTsv;
  const std::string ext = fs::path(cfg.input).extension().string();
  if (ext == ".nt" || ext == ".ntriples") return GraphFormat::kNTriples;
  if (ext == ".tsv") return GraphFormat::kTsv;
  throw Error(ErrorCode::kInvalidArgument,
              fmt::format("cannot infer the format of '{}'; set format", cfg.input));
}

template <typename Fn>
void write_file(const std::string& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, fmt::format("cannot open '{}' for writing", path));
  fn(out);
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, fmt::format("write to '{}' failed", path));
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingInput, fmt::format("cannot open '{}'", path));
  return in;
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const KeyImpl& k : key_table()) out.push_back(k.key);
    return out;
  }();
  return keys;
}

void set_config_value(PipelineConfig& cfg, std::string_view key, std::string_view value) {
  find_key(key).set(cfg, trim(value));
}

std::string get_config_value(const PipelineConfig& cfg, std::string_view key) {
  return find_key(key).get(cfg);
}

void load_config_file(const std::string& path, PipelineConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingInput, fmt::format("config file '{}' not found", path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("{}:{}: expected 'key = value'", path, line_no), line_no);
    }
    try {
      set_config_value(cfg, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    } catch (const Error& e) {
      throw Error(e.code(), fmt::format("{}:{}: {}", path, line_no, e.what()), line_no);
    }
  }
}

void validate_config(const PipelineConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha < 0.5)) {
    throw Error(ErrorCode::kInvalidAlpha, fmt::format("alpha must lie in (0, 0.5), got {}", cfg.alpha));
  }
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw Error(ErrorCode::kInvalidArgument, msg);
  };
  require(cfg.format == "auto" || cfg.format == "ntriples" || cfg.format == "tsv",
          fmt::format("unknown format '{}'", cfg.format));
  require(cfg.lambda_h >= 0.0 && cfg.lambda_a >= 0.0 && cfg.lambda_s >= 0.0 &&
              cfg.lambda_h + cfg.lambda_a + cfg.lambda_s > 0.0,
          "lambdas must be non-negative and not all zero");
  require(cfg.dim >= 1, "dim must be at least 1");
  require(cfg.walks >= 1, "walks must be at least 1");
  require(cfg.walk_len >= 1, "walk_len must be at least 1");
  require(cfg.window >= 1, "window must be at least 1");
  require(cfg.epochs >= 1, "epochs must be at least 1");
  require(cfg.lr > 0.0, "lr must be positive");
  require(cfg.estimator == "exact" || cfg.estimator == "sampled",
          fmt::format("unknown estimator '{}'", cfg.estimator));
  require(cfg.pair_budget >= 1000, "pair_budget must be at least 1000");
  require(cfg.delta >= 0.0 && cfg.delta <= 1.0, "delta must lie in [0, 1]");
  require(cfg.top_k >= 1, "top_k must be at least 1");
  require(cfg.profile_len >= 1, "profile_len must be at least 1");
  require(cfg.threads >= 1, "threads must be at least 1");
  require(!cfg.out.empty(), "out must not be empty");
  parse_ks(cfg.eval_k);
}

std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::kIngest:
      return "ingest";
    case Stage::kStats:
      return "stats";
    case Stage::kLabels:
      return "labels";
    case Stage::kEmbed:
      return "embed";
    case Stage::kScore:
      return "score";
    case Stage::kSelect:
      return "select";
    case Stage::kProfile:
      return "profile";
    case Stage::kEval:
      return "eval";
  }
  return "?";
}

const std::vector<Stage>& all_stages() {
  static const std::vector<Stage> stages = {Stage::kIngest, Stage::kStats,  Stage::kLabels,
                                            Stage::kEmbed,  Stage::kScore,  Stage::kSelect,
                                            Stage::kProfile, Stage::kEval};
  return stages;
}

std::string file_sha256(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingInput, fmt::format("cannot open '{}'", path));
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
  return hex;
}

Pipeline::Pipeline(PipelineConfig cfg) : cfg_(std::move(cfg)) {}

std::string Pipeline::path(std::string_view file) const {
  return (fs::path(cfg_.out) / fs::path(file)).string();
}

std::string Pipeline::require_path(const std::string& p) {
  if (!fs::exists(p)) throw Error(ErrorCode::kMissingInput, fmt::format("missing input '{}'", p));
  inputs_[p] = file_sha256(p);
  return p;
}

std::string Pipeline::require(std::string_view file) {
  const std::string p = path(file);
  if (!fs::exists(p)) {
    throw Error(ErrorCode::kMissingInput,
                fmt::format("missing input '{}'; run the stage that writes it first", p));
  }
  inputs_[std::string(file)] = file_sha256(p);
  return p;
}

void Pipeline::produced(std::string_view file) {
  outputs_[std::string(file)] = file_sha256(path(file));
}

void Pipeline::run(Stage stage) {
  const auto start = std::chrono::steady_clock::now();
  try {
    validate_config(cfg_);
    fs::create_directories(cfg_.out);
    switch (stage) {
      case Stage::kIngest:
        ingest();
        break;
      case Stage::kStats:
        stats();
        break;
      case Stage::kLabels:
        labels();
        break;
      case Stage::kEmbed:
        embed();
        break;
      case Stage::kScore:
        score();
        break;
      case Stage::kSelect:
        select();
        break;
      case Stage::kProfile:
        profile();
        break;
      case Stage::kEval:
        evaluate();
        break;
    }
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(stage, e);
  } catch (const fs::filesystem_error& e) {
    throw StageError(stage, Error(ErrorCode::kIo, e.what()));
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  timings_.emplace_back(std::string(stage_name(stage)), secs);
  spdlog::info("{}: done in {:.2f}s", stage_name(stage), secs);
}

void Pipeline::run_all() {
  for (Stage s : all_stages()) {
    if (s == Stage::kEval && cfg_.truth.empty()) {
      spdlog::warn("eval: no truth file configured; skipping");
      continue;
    }
    run(s);
  }
}

namespace {

KnowledgeGraph load_stage_graph(const std::string& p, const PipelineConfig& cfg) {
  IngestOptions opts;
  opts.type_predicate = cfg.type_predicate;
  return load_graph_file(p, GraphFormat::kTsv, opts);
}

}  // namespace

void Pipeline::ingest() {
  if (cfg_.input.empty()) throw Error(ErrorCode::kMissingInput, "no input graph configured");
  const std::string in = require_path(cfg_.input);
  IngestOptions opts;
  opts.type_predicate = cfg_.type_predicate;
  opts.strict = cfg_.strict;
  const KnowledgeGraph g = load_graph_file(in, input_format(cfg_), opts);
  spdlog::info("ingest: {} entities, {} literals, {} edges, {} types", g.num_entities(),
               g.num_literals(), g.num_edges(), g.num_types());
  write_file(path(artifact::kGraph), [&](std::ostream& o) { write_tsv(g, o, cfg_.type_predicate); });
  produced(artifact::kGraph);
}

void Pipeline::stats() {
  const KnowledgeGraph g = load_stage_graph(require(artifact::kGraph), cfg_);
  write_file(path(artifact::kStats), [&](std::ostream& o) { write_stats(g, o); });
  produced(artifact::kStats);
}

void Pipeline::labels() {
  const KnowledgeGraph g = load_stage_graph(require(artifact::kGraph), cfg_);
  EnumerateOptions opts;
  opts.alpha = cfg_.alpha;
  opts.include_inverse = cfg_.include_inverse;
  opts.threads = cfg_.threads;
  const CandidatePool all = enumerate_candidates(g, opts);
  const CandidatePool pool = filter_candidates(all, cfg_.alpha);
  spdlog::info("labels: {} candidates, {} after support filtering", all.size(), pool.size());
  write_file(path(artifact::kCandidates),
             [&](std::ostream& o) { write_candidates(pool, g, cfg_.alpha, o); });
  produced(artifact::kCandidates);
}

void Pipeline::embed() {
  const KnowledgeGraph g = load_stage_graph(require(artifact::kGraph), cfg_);
  WalkConfig wc;
  wc.lambda_h = cfg_.lambda_h;
  wc.lambda_a = cfg_.lambda_a;
  wc.lambda_s = cfg_.lambda_s;
  wc.walks_per_entity = cfg_.walks;
  wc.walk_len = cfg_.walk_len;
  wc.seed = cfg_.seed;
  wc.threads = cfg_.threads;
  CorpusReport report;
  const WalkCorpus corpus = generate_corpus(g, wc, &report);
  spdlog::info("embed: corpus of {} walks (H {}, A {}, S {})", corpus.size(), report.taken[0],
               report.taken[1], report.taken[2]);
  write_file(path(artifact::kWalks), [&](std::ostream& o) { write_corpus(corpus, g, o); });
  produced(artifact::kWalks);

  SkipGramConfig sc;
  sc.dim = cfg_.dim;
  sc.window = cfg_.window;
  sc.negatives = cfg_.negatives;
  sc.epochs = cfg_.epochs;
  sc.initial_lr = cfg_.lr;
  sc.seed = cfg_.seed;
  sc.threads = cfg_.threads;
  const Embedding emb = train_skipgram(corpus, sc, [](std::size_t epoch, const Embedding&) {
    spdlog::debug("embed: epoch {} finished", epoch);
  });
  write_file(path(artifact::kEmbeddings), [&](std::ostream& o) { write_embedding(emb, g, o); });
  produced(artifact::kEmbeddings);
}

void Pipeline::score() {
  const KnowledgeGraph g = load_stage_graph(require(artifact::kGraph), cfg_);
  std::ifstream cand_in = open_input(require(artifact::kCandidates));
  const CandidatePool pool = read_candidates(cand_in, g);
  std::ifstream emb_in = open_input(require(artifact::kEmbeddings));
  const Embedding emb = read_embedding(emb_in, g);
  ScoreOptions opts;
  opts.exclude_diagonal = cfg_.exclude_diagonal;
  opts.estimator = cfg_.estimator == "sampled" ? Estimator::kSampled : Estimator::kExact;
  opts.pair_budget = cfg_.pair_budget;
  opts.seed = cfg_.seed;
  opts.threads = cfg_.threads;
  ScoreStats st;
  const auto scored = score_pool(pool, emb, g, opts, &st);
  spdlog::info("score: {} labels scored", st.scored);
  write_file(path(artifact::kScored), [&](std::ostream& o) { write_scored(scored, g, o); });
  produced(artifact::kScored);
}

void Pipeline::select() {
  const KnowledgeGraph g = load_stage_graph(require(artifact::kGraph), cfg_);
  std::ifstream in = open_input(require(artifact::kScored));
  const auto scored = read_scored(in, g);
  SelectOptions opts;
  opts.marginal_reward = cfg_.marginal_reward;
  const auto sets = select_per_type(scored, g, cfg_.top_k, cfg_.delta, opts, cfg_.threads);
  write_file(path(artifact::kLabelSet),
             [&](std::ostream& o) { write_label_sets(sets, g, cfg_.top_k, cfg_.delta, o); });
  produced(artifact::kLabelSet);
  write_file(path(artifact::kTrace), [&](std::ostream& o) { write_trace(sets, g, o); });
  produced(artifact::kTrace);
}

void Pipeline::profile() {
  const std::string set_path = require(artifact::kLabelSet);
  const KnowledgeGraph g = load_stage_graph(require(artifact::kGraph), cfg_);
  std::ifstream in = open_input(set_path);
  const auto sets = read_label_sets(in, g);
  const auto profiles = profile_all(sets, g, cfg_.profile_len, cfg_.threads);
  std::size_t sparse = 0;
  for (const Profile& p : profiles) sparse += p.empty() ? 1 : 0;
  spdlog::info("profile: {} profiles, {} sparse", profiles.size(), sparse);
  write_file(path(artifact::kProfilesJson),
             [&](std::ostream& o) { render(profiles, g, RenderFormat::kJson, o); });
  produced(artifact::kProfilesJson);
  write_file(path(artifact::kProfilesMd),
             [&](std::ostream& o) { render(profiles, g, RenderFormat::kMarkdown, o); });
  produced(artifact::kProfilesMd);
}

void Pipeline::evaluate() {
  if (cfg_.truth.empty()) throw Error(ErrorCode::kMissingInput, "no truth file configured");
  const KnowledgeGraph g = load_stage_graph(require(artifact::kGraph), cfg_);
  std::ifstream set_in = open_input(require(artifact::kLabelSet));
  const auto sets = read_label_sets(set_in, g);
  std::ifstream cand_in = open_input(require(artifact::kCandidates));
  const CandidatePool pool = read_candidates(cand_in, g);
  std::ifstream truth_in = open_input(require_path(cfg_.truth));
  const GroundTruth truth = read_ground_truth(truth_in);
  const auto ks = parse_ks(cfg_.eval_k);
  const EvalReport report = kgprof::evaluate(sets, pool, truth, g, ks, cfg_.seed);
  write_file(path(artifact::kMetricsJson), [&](std::ostream& o) { write_report_json(report, o); });
  produced(artifact::kMetricsJson);
  write_file(path(artifact::kMetricsTxt), [&](std::ostream& o) { write_report_text(report, o); });
  produced(artifact::kMetricsTxt);
}

void Pipeline::write_manifest(std::string_view command) const {
  Json j;
  j["format"] = "kgprof.manifest";
  j["version"] = kFormatVersion;
  j["command"] = std::string(command);
  Json config = Json::object();
  for (const ConfigKey& k : config_keys()) config[std::string(k.name)] = get_config_value(cfg_, k.name);
  j["config"] = std::move(config);
  j["seed"] = cfg_.seed;
  j["inputs"] = inputs_;
  j["outputs"] = outputs_;
  Json timings = Json::object();
  for (const auto& [stage, secs] : timings_) timings[stage] = secs;
  j["timings_sec"] = std::move(timings);
  fs::create_directories(cfg_.out);
  write_file(path(artifact::kManifest), [&](std::ostream& o) { o << j.dump(2) << '\n'; });
}

}  // namespace kgprof
