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

#include "kgprof/evalkit.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_set>

#include <fmt/format.h>

#include "kgprof/label_io.h"
#include "kgprof/profiler.h"

namespace kgprof {

GroundTruth read_ground_truth(std::istream& in) {
  const Json root = parse_json(in, "ground truth");
  if (!root.is_object()) throw Error(ErrorCode::kFormat, "ground truth must be a JSON object");
  GroundTruth truth;
  for (const auto& [type, list] : root.items()) {
    if (!list.is_array()) {
      throw Error(ErrorCode::kFormat, fmt::format("ground truth for '{}' must be an array", type));
    }
    std::vector<std::string> props;
    std::set<std::string> seen;
    for (const Json& p : list) {
      if (!p.is_string()) {
        throw Error(ErrorCode::kFormat, fmt::format("ground truth for '{}' holds a non-string", type));
      }
      const std::string s = p.get<std::string>();
      if (!seen.insert(s).second) {
        throw Error(ErrorCode::kFormat,
                    fmt::format("property '{}' listed twice for type '{}'", s, type));
      }
      props.push_back(s);
    }
    truth.by_type.emplace(type, std::move(props));
  }
  return truth;
}

namespace {

void check_args(std::span<const std::string> truth, std::size_t k) {
  if (truth.empty()) throw Error(ErrorCode::kEmptyTruth, "ground truth list is empty");
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
}

}  // namespace

double map_at_k(std::span<const std::string> predicted, std::span<const std::string> truth,
                std::size_t k) {
  check_args(truth, k);
  const std::unordered_set<std::string> relevant(truth.begin(), truth.end());
  std::unordered_set<std::string> hit;
  double sum = 0.0;
  for (std::size_t i = 0; i < predicted.size() && i < k; ++i) {
    if (relevant.count(predicted[i]) && hit.insert(predicted[i]).second) {
      sum += static_cast<double>(hit.size()) / static_cast<double>(i + 1);
    }
  }
  return sum / static_cast<double>(truth.size());
}

std::size_t overlap_at_k(std::span<const std::string> predicted, std::span<const std::string> truth,
                         std::size_t k) {
  const std::unordered_set<std::string> relevant(truth.begin(), truth.end());
  std::unordered_set<std::string> hit;
  for (std::size_t i = 0; i < predicted.size() && i < k; ++i) {
    if (relevant.count(predicted[i])) hit.insert(predicted[i]);
  }
  return hit.size();
}

double f_measure_at_k(std::span<const std::string> predicted, std::span<const std::string> truth,
                      std::size_t k) {
  check_args(truth, k);
  const std::size_t hits = overlap_at_k(predicted, truth, k);
  if (hits == 0) return 0.0;
  const double p = static_cast<double>(hits) / static_cast<double>(k);
  const double r = static_cast<double>(hits) / static_cast<double>(truth.size());
  return 2.0 * p * r / (p + r);
}

double mean_pairwise_agreement(std::span<const std::vector<std::string>> lists, std::size_t k) {
  if (lists.size() < 2) throw Error(ErrorCode::kInvalidArgument, "agreement needs two lists");
  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < lists.size(); ++i) {
    for (std::size_t j = i + 1; j < lists.size(); ++j) {
      const std::size_t cut = std::min(k, lists[j].size());
      total += static_cast<double>(
          overlap_at_k(lists[i], std::span<const std::string>(lists[j].data(), cut), k));
      ++pairs;
    }
  }
  return total / static_cast<double>(pairs);
}

std::vector<Candidate> baseline_random(const TypePool& pool, std::size_t k, Rng& rng) {
  if (pool.candidates.empty()) throw Error(ErrorCode::kEmptyCandidates, "candidate pool is empty");
  std::vector<std::size_t> idx(pool.candidates.size());
  std::iota(idx.begin(), idx.end(), 0);
  const std::size_t take = std::min(k, idx.size());
  // Partial Fisher-Yates: idx[0..take) is a uniform ordered sample.
  for (std::size_t i = 0; i < take; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < take; ++i) out.push_back(pool.candidates[idx[i]]);
  return out;
}

namespace {

// Number of types holding a candidate with property p and a positive.
std::size_t document_frequency(const CandidatePool& pool, PropertyId p) {
  std::size_t df = 0;
  for (const TypePool& tp : pool.types) {
    for (const Candidate& c : tp.candidates) {
      if (c.label.property == p && !c.positives.empty()) {
        ++df;
        break;
      }
    }
  }
  return df;
}

}  // namespace

double tfidf_score(const Candidate& c, const CandidatePool& pool, const KnowledgeGraph& g) {
  const std::size_t df = document_frequency(pool, c.label.property);
  if (df == 0) return 0.0;
  const double idf = std::log(static_cast<double>(g.num_types()) / static_cast<double>(df));
  return c.support * idf;
}

std::vector<Candidate> baseline_tfidf(const CandidatePool& pool, TypeId t, const KnowledgeGraph& g,
                                      std::size_t k) {
  const TypePool* tp = pool.find(t);
  if (!tp || tp->candidates.empty()) {
    throw Error(ErrorCode::kEmptyCandidates,
                fmt::format("no candidates for type '{}'", g.type_name(t)));
  }
  std::map<PropertyId, double> idf;
  for (const Candidate& c : tp->candidates) {
    if (idf.count(c.label.property)) continue;
    const std::size_t df = document_frequency(pool, c.label.property);
    idf[c.label.property] =
        df == 0 ? 0.0 : std::log(static_cast<double>(g.num_types()) / static_cast<double>(df));
  }
  std::vector<std::pair<double, const Candidate*>> scored;
  for (const Candidate& c : tp->candidates) {
    scored.emplace_back(c.support * idf[c.label.property], &c);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second->key < b.second->key;
  });
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < scored.size() && i < k; ++i) out.push_back(*scored[i].second);
  return out;
}

std::vector<std::string> simplified(std::span<const Candidate> labels, const KnowledgeGraph& g) {
  std::vector<std::string> out;
  for (const Candidate& c : labels) out.push_back(g.property_name(c.label.property));
  return out;
}

std::vector<std::string> simplified(const LabelSet& set, const KnowledgeGraph& g) {
  std::vector<std::string> out;
  for (const ScoredLabel& s : set.labels) out.push_back(g.property_name(s.candidate.label.property));
  return out;
}

namespace {

// Truth entries may name properties by full name or by local name.
std::vector<std::string> resolve_properties(const std::vector<std::string>& props,
                                            const KnowledgeGraph& g) {
  std::vector<std::string> out;
  for (const std::string& p : props) {
    std::string resolved = p;
    if (!g.find_property(p)) {
      for (std::uint32_t i = 0; i < g.num_properties(); ++i) {
        const std::string& full = g.property_name(PropertyId{i});
        if (local_name(full) == p) {
          resolved = full;
          break;
        }
      }
    }
    out.push_back(std::move(resolved));
  }
  return out;
}

}  // namespace

EvalReport evaluate(std::span<const LabelSet> sets, const CandidatePool& pool,
                    const GroundTruth& truth, const KnowledgeGraph& g,
                    std::span<const std::size_t> ks, std::uint64_t seed) {
  EvalReport report;
  std::size_t type_index = 0;
  for (const auto& [type_name, listed] : truth.by_type) {
    const std::vector<std::string> props = resolve_properties(listed, g);
    const auto t = g.find_type(type_name);
    if (!t) {
      throw Error(ErrorCode::kFormat, fmt::format("ground-truth type '{}' not in graph", type_name));
    }
    std::vector<std::string> model;
    for (const LabelSet& s : sets) {
      if (s.type == *t) model = simplified(s, g);
    }
    const TypePool* tp = pool.find(*t);
    const bool has_pool = tp && !tp->candidates.empty();
    for (std::size_t k : ks) {
      std::vector<std::pair<std::string, std::vector<std::string>>> methods;
      methods.emplace_back("model", model);
      if (has_pool) {
        methods.emplace_back("tfidf", simplified(baseline_tfidf(pool, *t, g, k), g));
        Rng rng = make_rng(seed, type_index * 1000 + k, 31);
        methods.emplace_back("random", simplified(baseline_random(*tp, k, rng), g));
      } else {
        methods.emplace_back("tfidf", std::vector<std::string>{});
        methods.emplace_back("random", std::vector<std::string>{});
      }
      for (const auto& [name, pred] : methods) {
        report.rows.push_back(MethodMetrics{name, type_name, k, map_at_k(pred, props, k),
                                            f_measure_at_k(pred, props, k),
                                            overlap_at_k(pred, props, k)});
      }
    }
    ++type_index;
  }
  std::map<std::pair<std::size_t, std::string>, std::vector<const MethodMetrics*>> groups;
  for (const MethodMetrics& m : report.rows) groups[{m.k, m.method}].push_back(&m);
  for (const char* method : {"model", "tfidf", "random"}) {
    for (std::size_t k : ks) {
      const auto it = groups.find({k, method});
      if (it == groups.end()) continue;
      MethodMetrics mean{method, "*", k, 0.0, 0.0, 0};
      double overlap = 0.0;
      for (const MethodMetrics* m : it->second) {
        mean.map += m->map;
        mean.f += m->f;
        overlap += static_cast<double>(m->overlap);
      }
      const double n = static_cast<double>(it->second.size());
      mean.map /= n;
      mean.f /= n;
      mean.overlap = static_cast<std::size_t>(std::lround(overlap / n));
      report.means.push_back(mean);
    }
  }
  return report;
}

void write_report_json(const EvalReport& report, std::ostream& out) {
  Json j;
  j["format"] = "kgprof.metrics";
  j["version"] = kFormatVersion;
  auto rows = [](const std::vector<MethodMetrics>& v) {
    Json arr = Json::array();
    for (const MethodMetrics& m : v) {
      arr.push_back({{"method", m.method},
                     {"type", m.type},
                     {"k", m.k},
                     {"map", round_sig6(m.map)},
                     {"f_measure", round_sig6(m.f)},
                     {"overlap", m.overlap}});
    }
    return arr;
  };
  j["per_type"] = rows(report.rows);
  j["mean"] = rows(report.means);
  out << j.dump(2) << '\n';
}

void write_report_text(const EvalReport& report, std::ostream& out) {
  out << fmt::format("{:<8} {:>4} {:>8} {:>8} {:>8}  {}\n", "method", "k", "MAP", "F", "overlap",
                     "type");
  auto line = [&](const MethodMetrics& m) {
    out << fmt::format("{:<8} {:>4} {:>8.4f} {:>8.4f} {:>8}  {}\n", m.method, m.k, m.map, m.f,
                       m.overlap, m.type);
  };
  for (const MethodMetrics& m : report.rows) line(m);
  for (const MethodMetrics& m : report.means) line(m);
}

}  // namespace kgprof
