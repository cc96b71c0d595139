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

#include "kgprof/distinct.h"

#include <algorithm>
#include <cmath>
#include <optional>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

namespace kgprof {

namespace {

constexpr std::size_t kMinPairBudget = 1000;

// Unit vectors of one type's members, by position in E_t. Members without an
// embedding are flagged; zero vectors stay zero.
struct TypeVectors {
  std::size_t dim = 0;
  std::vector<std::int64_t> row;  // embedding row, -1 when missing
  std::vector<double> unit;
  std::vector<std::uint8_t> nonzero;
  std::vector<double> self_dot;  // dot(u, u)
  std::vector<double> total;     // sum of all embedded unit vectors
  std::size_t embedded = 0;

  const double* u(std::size_t pos) const { return unit.data() + pos * dim; }
  bool has(std::size_t pos) const { return row[pos] >= 0; }
};

TypeVectors type_vectors(TypeId t, const Embedding& emb, const KnowledgeGraph& g) {
  const auto members = g.entities_of_type(t);
  TypeVectors tv;
  tv.dim = emb.dim();
  tv.row.assign(members.size(), -1);
  tv.unit.assign(members.size() * tv.dim, 0.0);
  tv.nonzero.assign(members.size(), 0);
  tv.self_dot.assign(members.size(), 0.0);
  tv.total.assign(tv.dim, 0.0);
  for (std::size_t pos = 0; pos < members.size(); ++pos) {
    const auto r = emb.row_of(members[pos]);
    if (!r) continue;
    tv.row[pos] = static_cast<std::int64_t>(*r);
    ++tv.embedded;
    const auto v = emb.input(*r);
    const double n = std::sqrt(dot(v, v));
    if (n == 0.0) continue;
    tv.nonzero[pos] = 1;
    double* u = tv.unit.data() + pos * tv.dim;
    for (std::size_t k = 0; k < tv.dim; ++k) u[k] = v[k] / n;
    tv.self_dot[pos] = dot({u, tv.dim}, {u, tv.dim});
    for (std::size_t k = 0; k < tv.dim; ++k) tv.total[k] += u[k];
  }
  return tv;
}

struct PositiveSums {
  std::vector<double> sum;
  std::size_t count = 0;
  std::size_t nonzero = 0;
  double self_dot = 0.0;
};

PositiveSums positive_sums(const TypeVectors& tv, std::span<const std::uint32_t> positives) {
  PositiveSums s;
  s.sum.assign(tv.dim, 0.0);
  for (std::uint32_t pos : positives) {
    if (!tv.has(pos)) continue;
    ++s.count;
    if (!tv.nonzero[pos]) continue;
    ++s.nonzero;
    s.self_dot += tv.self_dot[pos];
    const double* u = tv.u(pos);
    for (std::size_t k = 0; k < tv.dim; ++k) s.sum[k] += u[k];
  }
  return s;
}

ScoredLabel exact_from_sums(const Candidate& c, const PositiveSums& p,
                            std::span<const double> negative_sum, std::size_t negatives,
                            bool exclude_diagonal) {
  const double np = static_cast<double>(p.count);
  const double nn = static_cast<double>(negatives);
  // Sum of cosines over ordered pairs i != j inside P.
  const double off = dot(p.sum, p.sum) - p.self_dot;
  ScoredLabel s;
  s.candidate = c;
  if (exclude_diagonal) {
    s.internal_sim = p.count > 1 ? off / (np * (np - 1.0)) : 0.0;
  } else {
    s.internal_sim = (off + static_cast<double>(p.nonzero)) / (np * np);
  }
  s.external_sim = dot(p.sum, negative_sum) / (np * nn);
  s.d = s.internal_sim - s.external_sim;
  s.estimator = Estimator::kExact;
  return s;
}

void check_sets(const Candidate& c, std::size_t positives, std::size_t negatives,
                const KnowledgeGraph& g) {
  if (positives == 0) {
    throw Error(ErrorCode::kEmptyPositives,
                fmt::format("label {} has no positive entities", c.key));
  }
  if (negatives == 0) {
    throw Error(ErrorCode::kEmptyNegatives,
                fmt::format("label {} covers every entity of type '{}'", c.key,
                            g.type_name(c.label.type)));
  }
}

void require_embedded(const Candidate& c, const TypeVectors& tv, const KnowledgeGraph& g) {
  if (tv.embedded == tv.row.size()) return;
  const auto members = g.entities_of_type(c.label.type);
  for (std::size_t pos = 0; pos < tv.row.size(); ++pos) {
    if (!tv.has(pos)) {
      throw Error(ErrorCode::kMissingEmbedding,
                  fmt::format("entity '{}' has no embedding", g.entity_name(members[pos])));
    }
  }
}

ScoredLabel exact_in_type(const Candidate& c, const TypeVectors& tv, bool exclude_diagonal,
                          bool direct_negatives, const KnowledgeGraph& g) {
  const PositiveSums p = positive_sums(tv, c.positives);
  const std::size_t negatives = tv.embedded - p.count;
  check_sets(c, p.count, negatives, g);
  std::vector<double> neg(tv.dim, 0.0);
  if (direct_negatives) {
    auto it = c.positives.begin();
    for (std::size_t pos = 0; pos < tv.row.size(); ++pos) {
      while (it != c.positives.end() && *it < pos) ++it;
      if ((it != c.positives.end() && *it == pos) || !tv.nonzero[pos]) continue;
      const double* u = tv.u(pos);
      for (std::size_t k = 0; k < tv.dim; ++k) neg[k] += u[k];
    }
  } else {
    for (std::size_t k = 0; k < tv.dim; ++k) neg[k] = tv.total[k] - p.sum[k];
  }
  return exact_from_sums(c, p, neg, negatives, exclude_diagonal);
}

ScoredLabel sampled_in_type(const Candidate& c, const TypeVectors& tv, const Embedding& emb,
                            std::size_t budget, Rng& rng, bool exclude_diagonal,
                            const KnowledgeGraph& g) {
  if (budget < kMinPairBudget) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("pair budget must be at least {}, got {}", kMinPairBudget, budget));
  }
  std::vector<std::size_t> pos_rows, neg_rows;
  auto it = c.positives.begin();
  for (std::size_t pos = 0; pos < tv.row.size(); ++pos) {
    while (it != c.positives.end() && *it < pos) ++it;
    if (!tv.has(pos)) continue;
    const bool positive = it != c.positives.end() && *it == pos;
    (positive ? pos_rows : neg_rows).push_back(static_cast<std::size_t>(tv.row[pos]));
  }
  check_sets(c, pos_rows.size(), neg_rows.size(), g);
  const std::size_t np = pos_rows.size();
  const std::size_t nn = neg_rows.size();
  if (np * nn <= budget && np * np <= budget) {
    return exact_in_type(c, tv, exclude_diagonal, true, g);
  }

  std::uniform_int_distribution<std::size_t> pick_p(0, np - 1);
  std::uniform_int_distribution<std::size_t> pick_n(0, nn - 1);
  double internal = 0.0;
  if (!exclude_diagonal) {
    for (std::size_t s = 0; s < budget; ++s) {
      internal += cosine(emb.input(pos_rows[pick_p(rng)]), emb.input(pos_rows[pick_p(rng)]));
    }
    internal /= static_cast<double>(budget);
  } else if (np > 1) {
    std::uniform_int_distribution<std::size_t> pick_other(0, np - 2);
    for (std::size_t s = 0; s < budget; ++s) {
      const std::size_t i = pick_p(rng);
      std::size_t j = pick_other(rng);
      if (j >= i) ++j;
      internal += cosine(emb.input(pos_rows[i]), emb.input(pos_rows[j]));
    }
    internal /= static_cast<double>(budget);
  }
  double external = 0.0;
  for (std::size_t s = 0; s < budget; ++s) {
    external += cosine(emb.input(pos_rows[pick_p(rng)]), emb.input(neg_rows[pick_n(rng)]));
  }
  external /= static_cast<double>(budget);

  ScoredLabel out;
  out.candidate = c;
  out.internal_sim = internal;
  out.external_sim = external;
  out.d = internal - external;
  out.estimator = Estimator::kSampled;
  out.pair_budget = budget;
  return out;
}

}  // namespace

bool scored_before(const ScoredLabel& a, const ScoredLabel& b) {
  if (a.d != b.d) return a.d > b.d;
  if (a.candidate.support != b.candidate.support) return a.candidate.support > b.candidate.support;
  return a.candidate.key < b.candidate.key;
}

ScoredLabel distinctiveness_exact(const Candidate& c, const Embedding& emb, const KnowledgeGraph& g,
                                  bool exclude_diagonal) {
  const TypeVectors tv = type_vectors(c.label.type, emb, g);
  require_embedded(c, tv, g);
  return exact_in_type(c, tv, exclude_diagonal, true, g);
}

ScoredLabel distinctiveness_sampled(const Candidate& c, const Embedding& emb,
                                    const KnowledgeGraph& g, std::size_t pair_budget, Rng& rng,
                                    bool exclude_diagonal) {
  const TypeVectors tv = type_vectors(c.label.type, emb, g);
  require_embedded(c, tv, g);
  return sampled_in_type(c, tv, emb, pair_budget, rng, exclude_diagonal, g);
}

std::vector<ScoredLabel> score_pool(const CandidatePool& pool, const Embedding& emb,
                                    const KnowledgeGraph& g, const ScoreOptions& options,
                                    ScoreStats* stats) {
  ScoreStats local;
  std::vector<ScoredLabel> out;
  std::size_t label_index = 0;
  for (const TypePool& tp : pool.types) {
    if (tp.candidates.empty()) continue;
    const TypeVectors tv = type_vectors(tp.type, emb, g);
    local.unembedded += tv.row.size() - tv.embedded;
    std::vector<std::optional<ScoredLabel>> results(tp.candidates.size());
    parallel_for(tp.candidates.size(), options.threads, [&](std::size_t i) {
      const Candidate& c = tp.candidates[i];
      try {
        if (options.estimator == Estimator::kSampled) {
          Rng rng = make_rng(options.seed, label_index + i, 21);
          results[i] =
              sampled_in_type(c, tv, emb, options.pair_budget, rng, options.exclude_diagonal, g);
        } else {
          results[i] = exact_in_type(c, tv, options.exclude_diagonal, false, g);
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kEmptyPositives && e.code() != ErrorCode::kEmptyNegatives) throw;
      }
    });
    label_index += tp.candidates.size();
    for (auto& r : results) {
      if (r) {
        out.push_back(std::move(*r));
      } else {
        ++local.skipped;
      }
    }
  }
  std::sort(out.begin(), out.end(), scored_before);
  local.scored = out.size();
  if (local.unembedded > 0 || local.skipped > 0) {
    spdlog::info("score: {} typed entities without embedding excluded, {} labels skipped",
                 local.unembedded, local.skipped);
  }
  if (stats) *stats = local;
  return out;
}

}  // namespace kgprof
