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

#include "kgprof/walks.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <memory>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

namespace kgprof {

namespace {

std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace

std::vector<Walk> h_walks(const KnowledgeGraph& g, EntityId anchor, std::size_t n, std::size_t len,
                          Rng& rng) {
  std::vector<Walk> out(n);
  for (Walk& walk : out) {
    walk.reserve(len);
    walk.push_back(anchor);
    while (walk.size() < len) {
      const auto nbrs = g.neighbors(walk.back());
      if (nbrs.empty()) break;
      walk.push_back(nbrs[uniform_index(rng, nbrs.size())]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// HypercubeWalker

HypercubeWalker::HypercubeWalker(const PointSpace& space, double r, std::size_t ball_cap,
                                 std::size_t threads)
    : space_(&space), r_(r) {
  const RadiusIndex index(space, r);
  std::vector<std::vector<std::uint32_t>> balls(space.size());
  parallel_for(space.size(), threads, [&](std::size_t row) {
    auto& ball = balls[row];
    index.ball(row, ball);
    if (ball.size() > ball_cap) {
      // Uniform subset, stable per row.
      Rng rng = make_rng(0x6b67, row);
      for (std::size_t i = 0; i < ball_cap; ++i) {
        std::swap(ball[i], ball[i + uniform_index(rng, ball.size() - i)]);
      }
      ball.resize(ball_cap);
      std::sort(ball.begin(), ball.end());
    }
  });
  offsets_.assign(space.size() + 1, 0);
  for (std::size_t i = 0; i < balls.size(); ++i) {
    offsets_[i + 1] = offsets_[i] + static_cast<std::uint32_t>(balls[i].size());
  }
  members_.reserve(offsets_.back());
  for (const auto& ball : balls) members_.insert(members_.end(), ball.begin(), ball.end());
}

std::span<const std::uint32_t> HypercubeWalker::ball(std::size_t row) const {
  return std::span<const std::uint32_t>(members_).subspan(offsets_[row],
                                                          offsets_[row + 1] - offsets_[row]);
}

std::vector<Walk> HypercubeWalker::walks(std::size_t anchor_row, std::size_t n, std::size_t len,
                                         Rng& rng) const {
  std::vector<Walk> out(n);
  for (Walk& walk : out) {
    walk.reserve(len);
    std::size_t row = anchor_row;
    walk.push_back(space_->rows[row]);
    while (walk.size() < len) {
      const auto nbrs = ball(row);
      if (nbrs.empty()) break;
      row = nbrs[uniform_index(rng, nbrs.size())];
      walk.push_back(space_->rows[row]);
    }
  }
  return out;
}

std::vector<Walk> hypercube_walks(const PointSpace& space, std::size_t anchor_row, std::size_t n,
                                  std::size_t len, double r, Rng& rng) {
  const RadiusIndex index(space, r);
  std::vector<Walk> out(n);
  std::vector<std::uint32_t> ball;
  for (Walk& walk : out) {
    std::size_t row = anchor_row;
    walk.push_back(space.rows[row]);
    while (walk.size() < len) {
      index.ball(row, ball);
      if (ball.empty()) break;
      row = ball[uniform_index(rng, ball.size())];
      walk.push_back(space.rows[row]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Mixing

namespace {

// Largest-remainder apportionment of `total` over `weights` (ties go to the
// lower index).
std::array<std::size_t, 3> apportion(std::array<double, 3> weights, std::size_t total) {
  std::array<std::size_t, 3> out{};
  const double sum = weights[0] + weights[1] + weights[2];
  if (sum <= 0.0 || total == 0) return out;
  std::array<double, 3> frac{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double exact = static_cast<double>(total) * weights[i] / sum;
    out[i] = static_cast<std::size_t>(std::floor(exact));
    frac[i] = weights[i] > 0.0 ? exact - std::floor(exact) : -1.0;
    assigned += out[i];
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  for (std::size_t k = 0; assigned < total && k < 3; ++k) {
    if (weights[order[k]] <= 0.0) continue;
    ++out[order[k]];
    ++assigned;
  }
  return out;
}

void validate_lambda(const std::array<double, 3>& lambda) {
  for (double l : lambda) {
    if (!(l >= 0.0) || !std::isfinite(l)) {
      throw Error(ErrorCode::kInvalidArgument, "path mixing weights must be nonnegative");
    }
  }
  if (lambda[0] + lambda[1] + lambda[2] <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "at least one path mixing weight must be positive");
  }
}

}  // namespace

std::array<std::size_t, 3> mix_quotas(std::array<double, 3> lambda,
                                      std::array<std::size_t, 3> pool_sizes,
                                      std::size_t corpus_size) {
  validate_lambda(lambda);
  std::array<std::size_t, 3> quota = apportion(lambda, corpus_size);
  std::array<bool, 3> saturated{};
  for (;;) {
    std::size_t excess = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      if (quota[i] > pool_sizes[i]) {
        excess += quota[i] - pool_sizes[i];
        quota[i] = pool_sizes[i];
        saturated[i] = true;
      }
    }
    if (excess == 0) break;
    std::array<double, 3> open{};
    for (std::size_t i = 0; i < 3; ++i) open[i] = saturated[i] ? 0.0 : lambda[i];
    if (open[0] + open[1] + open[2] <= 0.0) break;
    const auto extra = apportion(open, excess);
    for (std::size_t i = 0; i < 3; ++i) quota[i] += extra[i];
  }
  return quota;
}

MixResult mix_paths(std::span<const Walk> h, std::span<const Walk> a, std::span<const Walk> s,
                    std::array<double, 3> lambda, std::size_t corpus_size, Rng& rng) {
  validate_lambda(lambda);
  const std::array<std::span<const Walk>, 3> pools{h, a, s};
  static constexpr const char* kNames[3] = {"H", "A", "S"};
  for (std::size_t i = 0; i < 3; ++i) {
    if (lambda[i] > 0.0 && pools[i].empty()) {
      throw Error(ErrorCode::kEmptyPool,
                  fmt::format("{} pool is empty but its weight is {}", kNames[i], lambda[i]));
    }
  }
  MixResult result;
  result.taken = mix_quotas(lambda, {h.size(), a.size(), s.size()}, corpus_size);
  result.corpus.reserve(result.taken[0] + result.taken[1] + result.taken[2]);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto pool = pools[i];
    const std::size_t want = result.taken[i];
    if (want == pool.size()) {
      result.corpus.insert(result.corpus.end(), pool.begin(), pool.end());
      continue;
    }
    std::vector<std::size_t> idx(pool.size());
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t k = 0; k < want; ++k) {
      std::swap(idx[k], idx[k + uniform_index(rng, idx.size() - k)]);
    }
    idx.resize(want);
    std::sort(idx.begin(), idx.end());
    for (std::size_t k : idx) result.corpus.push_back(pool[k]);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Corpus generation

namespace {

struct TypeWalkers {
  std::unique_ptr<AttributiveSpace> attr;
  std::unique_ptr<HypercubeWalker> attr_walker;
  std::unique_ptr<StructuralSpace> structure;
  std::unique_ptr<HypercubeWalker> struct_walker;
};

// Spreads n walks over the anchor's usable spaces round-robin.
void walks_over_spaces(const std::vector<std::pair<const HypercubeWalker*, std::size_t>>& homes,
                       std::size_t n, std::size_t len, Rng& rng, std::vector<Walk>& out) {
  if (homes.empty()) return;
  for (std::size_t k = 0; k < homes.size(); ++k) {
    const std::size_t count = n / homes.size() + (k < n % homes.size() ? 1 : 0);
    if (count == 0) continue;
    auto walks = homes[k].first->walks(homes[k].second, count, len, rng);
    std::move(walks.begin(), walks.end(), std::back_inserter(out));
  }
}

}  // namespace

WalkCorpus generate_corpus(const KnowledgeGraph& g, const WalkConfig& config,
                           CorpusReport* report) {
  std::array<double, 3> lambda{config.lambda_h, config.lambda_a, config.lambda_s};
  validate_lambda(lambda);
  if (config.walk_len < 1) throw Error(ErrorCode::kInvalidArgument, "walk_len must be >= 1");

  std::vector<EntityId> anchors;
  for (std::uint32_t i = 0; i < g.num_entities(); ++i) {
    if (g.is_typed(EntityId{i})) anchors.push_back(EntityId{i});
  }

  const double target =
      config.radius_target > 0.0 ? config.radius_target : std::max(1.0, g.average_degree());
  const std::size_t nt = g.num_types();
  std::vector<TypeWalkers> walkers(nt);
  CorpusReport local;
  for (std::uint32_t t = 0; t < nt; ++t) {
    const TypeId type{t};
    if (g.entities_of_type(type).size() < 2) continue;
    if (lambda[1] > 0.0) {
      try {
        auto space = std::make_unique<AttributiveSpace>(build_attr_space(g, type));
        const auto rr = adapt_radius(space->points, target, initial_radius(space->points));
        local.spaces.push_back({type, true, rr});
        if (rr.degenerate) throw Error(ErrorCode::kNoUsableDimensions, "all rows identical");
        walkers[t].attr_walker = std::make_unique<HypercubeWalker>(space->points, rr.r,
                                                                   config.ball_cap, config.threads);
        walkers[t].attr = std::move(space);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kNoUsableDimensions) throw;
      }
    }
    if (lambda[2] > 0.0) {
      auto space = std::make_unique<StructuralSpace>(build_struct_space(g, type));
      const auto rr = adapt_radius(space->points, target, initial_radius(space->points));
      local.spaces.push_back({type, false, rr});
      // Identical rows carry no structural signal.
      if (rr.degenerate) continue;
      walkers[t].struct_walker = std::make_unique<HypercubeWalker>(space->points, rr.r,
                                                                   config.ball_cap, config.threads);
      walkers[t].structure = std::move(space);
    }
  }

  // Per-anchor homes in the attributive / structural spaces.
  auto homes_of = [&](EntityId e, bool attributive) {
    std::vector<std::pair<const HypercubeWalker*, std::size_t>> homes;
    for (TypeId t : g.types_of(e)) {
      const auto& w = walkers[t.value];
      const HypercubeWalker* walker = attributive ? w.attr_walker.get() : w.struct_walker.get();
      if (!walker) continue;
      if (auto row = walker->space().row_of(e)) homes.emplace_back(walker, *row);
    }
    return homes;
  };

  for (std::size_t i = 1; i < 3; ++i) {
    if (lambda[i] <= 0.0) continue;
    const bool any = std::any_of(anchors.begin(), anchors.end(),
                                 [&](EntityId e) { return !homes_of(e, i == 1).empty(); });
    if (any) continue;
    if (!config.rescale_empty) {
      throw Error(ErrorCode::kEmptyPool,
                  fmt::format("no anchor has a row in any {} space", i == 1 ? "attributive" : "structural"));
    }
    spdlog::warn("{} strategy has no usable space; dropping its weight",
                 i == 1 ? "attributive" : "structural");
    lambda[i] = 0.0;
  }
  if (lambda[0] + lambda[1] + lambda[2] <= 0.0) {
    throw Error(ErrorCode::kEmptyPool, "no strategy can produce walks");
  }

  const double sum = lambda[0] + lambda[1] + lambda[2];
  std::array<std::size_t, 3> per_anchor{};
  for (std::size_t i = 0; i < 3; ++i) {
    per_anchor[i] = lambda[i] > 0.0
                        ? static_cast<std::size_t>(std::ceil(
                              static_cast<double>(config.walks_per_entity) * lambda[i] / sum - 1e-9))
                        : 0;
  }

  std::vector<std::array<std::vector<Walk>, 3>> produced(anchors.size());
  parallel_for(anchors.size(), config.threads, [&](std::size_t k) {
    const EntityId e = anchors[k];
    auto& out = produced[k];
    if (per_anchor[0] > 0) {
      Rng rng = make_rng(config.seed, e.value, 1);
      out[0] = h_walks(g, e, per_anchor[0], config.walk_len, rng);
    }
    if (per_anchor[1] > 0) {
      Rng rng = make_rng(config.seed, e.value, 2);
      walks_over_spaces(homes_of(e, true), per_anchor[1], config.walk_len, rng, out[1]);
    }
    if (per_anchor[2] > 0) {
      Rng rng = make_rng(config.seed, e.value, 3);
      walks_over_spaces(homes_of(e, false), per_anchor[2], config.walk_len, rng, out[2]);
    }
  });

  std::array<std::vector<Walk>, 3> pools;
  for (auto& per : produced) {
    for (std::size_t i = 0; i < 3; ++i) {
      std::move(per[i].begin(), per[i].end(), std::back_inserter(pools[i]));
      std::vector<Walk>().swap(per[i]);
    }
  }
  produced.clear();

  Rng mix_rng = make_rng(config.seed, 0, 7);
  MixResult mixed = mix_paths(pools[0], pools[1], pools[2], lambda,
                              config.walks_per_entity * anchors.size(), mix_rng);
  if (report) {
    for (std::size_t i = 0; i < 3; ++i) local.pool_sizes[i] = pools[i].size();
    local.taken = mixed.taken;
    local.lambda = lambda;
    *report = std::move(local);
  }
  return std::move(mixed.corpus);
}

void write_corpus(const WalkCorpus& corpus, const KnowledgeGraph& g, std::ostream& out) {
  for (const Walk& walk : corpus) {
    for (std::size_t i = 0; i < walk.size(); ++i) {
      if (i) out << ' ';
      out << g.entity_name(walk[i]);
    }
    out << '\n';
  }
}

WalkCorpus read_corpus(std::istream& in, const KnowledgeGraph& g) {
  WalkCorpus corpus;
  std::string line, token;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    Walk walk;
    while (ss >> token) {
      auto e = g.find_entity(token);
      if (!e) {
        throw Error(ErrorCode::kFormat,
                    fmt::format("walk line {}: unknown entity '{}'", line_no, token), line_no);
      }
      walk.push_back(*e);
    }
    if (!walk.empty()) corpus.push_back(std::move(walk));
  }
  return corpus;
}

}  // namespace kgprof
