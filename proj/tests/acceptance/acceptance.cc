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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.
//
//   kgprof_acceptance [--only N] [--scale-entities N] [--scale-edges N]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "kgprof/discretize.h"
#include "kgprof/distinct.h"
#include "kgprof/evalkit.h"
#include "kgprof/graph.h"
#include "kgprof/labels.h"
#include "kgprof/pipeline.h"
#include "kgprof/profiler.h"
#include "kgprof/rerank.h"
#include "kgprof/skipgram.h"
#include "kgprof/spaces.h"
#include "kgprof/synth.h"
#include "kgprof/walks.h"

namespace fs = std::filesystem;
using namespace kgprof;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::size_t g_scale_entities = 100000;
std::size_t g_scale_edges = 1000000;

// ---------------------------------------------------------------- 1

Outcome support_filter() {
  // 20 entities; value vK is carried by the first K of them.
  GraphBuilder b;
  const std::vector<int> carriers = {1, 2, 6, 18, 19};
  for (int i = 0; i < 20; ++i) {
    const std::string e = fmt::format("e{:02}", i);
    b.add_type(e, "T");
    for (int k : carriers) {
      if (i < k) b.add_attribute(e, "tag", fmt::format("v{}", k));
    }
  }
  const KnowledgeGraph g = std::move(b).build();
  const CandidatePool pool = enumerate_candidates(g);
  std::multiset<double> all, kept;
  for (const TypePool& tp : pool.types) {
    for (const Candidate& c : tp.candidates) all.insert(c.support);
  }
  for (const TypePool& tp : filter_candidates(pool, 0.1).types) {
    for (const Candidate& c : tp.candidates) kept.insert(c.support);
  }
  const std::multiset<double> want_all = {0.05, 0.1, 0.3, 0.9, 0.95};
  const std::multiset<double> want_kept = {0.3, 0.9};
  std::string got;
  for (double s : kept) got += fmt::format("{}{}", got.empty() ? "" : ", ", s);
  return {all == want_all && kept == want_kept,
          fmt::format("supports {{0.05, 0.1, 0.3, 0.9, 0.95}}, alpha 0.1: kept {{{}}}, expected "
                      "{{0.3, 0.9}}",
                      got)};
}

// ---------------------------------------------------------------- 2

// Dense-grid Gaussian KDE, independent of the library: the cut between the
// two highest modes.
struct KdeOracle {
  int modes = 0;
  double cut = 0.0;
};

KdeOracle kde_oracle(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (n - 1));
  const double iqr = v[static_cast<std::size_t>(0.75 * (n - 1))] - v[static_cast<std::size_t>(0.25 * (n - 1))];
  const double h = 0.9 * std::min(sd, iqr / 1.34) * std::pow(n, -0.2);
  const int points = 20001;
  const double lo = v.front() - 3 * h, hi = v.back() + 3 * h;
  std::vector<double> grid(points), dens(points);
  for (int i = 0; i < points; ++i) {
    grid[i] = lo + (hi - lo) * i / (points - 1);
    double s = 0.0;
    for (double x : v) s += std::exp(-0.5 * std::pow((grid[i] - x) / h, 2));
    dens[i] = s;
  }
  std::vector<int> peaks;
  for (int i = 1; i + 1 < points; ++i) {
    if (dens[i] > dens[i - 1] && dens[i] >= dens[i + 1] && dens[i] > 1e-6 * n) peaks.push_back(i);
  }
  KdeOracle out;
  out.modes = static_cast<int>(peaks.size());
  if (peaks.size() >= 2) {
    std::sort(peaks.begin(), peaks.end(), [&](int a, int b) { return dens[a] > dens[b]; });
    const int a = std::min(peaks[0], peaks[1]), c = std::max(peaks[0], peaks[1]);
    const int m = static_cast<int>(std::min_element(dens.begin() + a, dens.begin() + c) - dens.begin());
    out.cut = grid[m];
  }
  return out;
}

Outcome discretization() {
  Rng rng = make_rng(2026, 0);
  std::normal_distribution<double> left(2.0, 0.3), right(8.0, 0.3);
  std::vector<double> v;
  for (int i = 0; i < 500; ++i) v.push_back(left(rng));
  for (int i = 0; i < 500; ++i) v.push_back(right(rng));
  const auto parts = discretize(v, DiscretizePolicy{});
  const KdeOracle oracle = kde_oracle(v);
  bool ok = parts.size() == 2 && oracle.modes == 2;
  double cut = parts.size() == 2 ? parts[0].hi : std::nan("");
  ok = ok && cut >= 4.0 && cut <= 6.0 && oracle.cut >= 4.0 && oracle.cut <= 6.0;
  // The library grid is coarser than the oracle's.
  ok = ok && std::fabs(cut - oracle.cut) <= 0.05;

  std::vector<double> years;
  for (int y = 1988; y <= 2003; ++y) years.push_back(y);
  DiscretizePolicy yp;
  yp.mode = DiscretizePolicy::Mode::kYear;
  const auto buckets = discretize(years, yp);
  const std::vector<Interval> want = {
      {1985, 1990, false}, {1990, 1995, false}, {1995, 2000, false}, {2000, 2005, false}};
  // The greatest bucket of a partition is allowed to be closed.
  bool years_ok = buckets.size() == want.size();
  for (std::size_t i = 0; years_ok && i < want.size(); ++i) {
    years_ok = buckets[i].lo == want[i].lo && buckets[i].hi == want[i].hi;
  }
  return {ok && years_ok,
          fmt::format("bimodal: {} intervals, cut {:.3f}, oracle modes {} cut {:.3f}; years: {} "
                      "buckets {}",
                      parts.size(), cut, oracle.modes, oracle.cut, buckets.size(),
                      years_ok ? "[1985,1990)..[2000,2005)" : "mismatch")};
}

// ---------------------------------------------------------------- 3

// Independent L-infinity test: a dimension missing at the center imposes
// nothing, one missing at the other point excludes it, categories differ by 1.
bool linf_within(const PointSpace& s, std::size_t a, std::size_t b, double r) {
  double dist = 0.0;
  for (std::size_t d = 0; d < s.numeric_dims; ++d) {
    const double x = s.numeric[a * s.numeric_dims + d];
    const double y = s.numeric[b * s.numeric_dims + d];
    if (std::isnan(x)) continue;
    if (std::isnan(y)) return false;
    dist = std::max(dist, std::fabs(x - y));
  }
  for (std::size_t d = 0; d < s.categorical_dims; ++d) {
    const int x = s.categorical[a * s.categorical_dims + d];
    const int y = s.categorical[b * s.categorical_dims + d];
    if (x < 0) continue;
    if (y < 0) return false;
    if (x != y) dist = std::max(dist, 1.0);
  }
  return dist <= r;
}

Outcome walk_validity() {
  RandomGraphSpec spec;
  spec.entities = 400;
  spec.relation_edges = 1600;
  spec.types = 2;
  spec.categorical_attributes = 0;
  spec.numeric_attributes = 3;
  const KnowledgeGraph g = random_graph(spec, 11);

  std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (const Edge& e : g.edges()) {
    if (!e.is_relation()) continue;
    edges.emplace(e.source.value, e.target.id);
    edges.emplace(e.target.id, e.source.value);
  }
  std::size_t h_pairs = 0, h_bad = 0, h_walks_n = 0;
  Rng rng = make_rng(3, 0);
  for (std::uint32_t a = 0; a < 100; ++a) {
    for (const Walk& w : h_walks(g, EntityId{a}, 100, 8, rng)) {
      ++h_walks_n;
      for (std::size_t i = 1; i < w.size(); ++i) {
        ++h_pairs;
        if (!edges.count({w[i - 1].value, w[i].value})) ++h_bad;
      }
    }
  }

  std::size_t s_pairs = 0, s_bad = 0, s_walks_n = 0;
  auto check_space = [&](const PointSpace& space, std::uint64_t salt) {
    const auto rr = adapt_radius(space, g.average_degree(), initial_radius(space));
    Rng wr = make_rng(5, salt);
    for (std::size_t a = 0; a < 50; ++a) {
      const std::size_t row = a * space.size() / 50;
      for (const Walk& w : hypercube_walks(space, row, 100, 8, rr.r, wr)) {
        ++s_walks_n;
        for (std::size_t i = 1; i < w.size(); ++i) {
          ++s_pairs;
          const auto x = space.row_of(w[i - 1]), y = space.row_of(w[i]);
          if (!x || !y || !linf_within(space, *x, *y, rr.r)) ++s_bad;
        }
      }
    }
  };
  const AttributiveSpace attr = build_attr_space(g, TypeId{0});
  check_space(attr.points, 1);
  const StructuralSpace st = build_struct_space(g, TypeId{0});
  check_space(st.points, 2);

  const bool ok = h_walks_n == 10000 && s_walks_n == 10000 && h_pairs > 0 && s_pairs > 0 &&
                  h_bad == 0 && s_bad == 0;
  return {ok, fmt::format("H: {} walks, {}/{} pairs are edges; A+S: {} walks, {}/{} pairs within r",
                          h_walks_n, h_pairs - h_bad, h_pairs, s_walks_n, s_pairs - s_bad, s_pairs)};
}

// ---------------------------------------------------------------- 4

Outcome mixing() {
  // generate_corpus with lambda 1:0:0 against an independently regenerated
  // H pool (same per-anchor streams).
  RandomGraphSpec spec;
  spec.entities = 120;
  spec.relation_edges = 400;
  const KnowledgeGraph g = random_graph(spec, 4);
  WalkConfig wc;
  wc.lambda_h = 1;
  wc.lambda_a = 0;
  wc.lambda_s = 0;
  wc.walks_per_entity = 10;
  wc.seed = 9;
  const WalkCorpus corpus = generate_corpus(g, wc);
  std::vector<Walk> ph;
  for (std::uint32_t i = 0; i < g.num_entities(); ++i) {
    if (!g.is_typed(EntityId{i})) continue;
    Rng rng = make_rng(wc.seed, i, 1);
    for (Walk& w : h_walks(g, EntityId{i}, wc.walks_per_entity, wc.walk_len, rng)) ph.push_back(std::move(w));
  }
  auto sorted = [](std::vector<Walk> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  const bool deepwalk = sorted(corpus) == sorted(ph);

  // 2:1:1 over 400 from three tagged pools of 400.
  auto pool = [](std::uint32_t tag) {
    std::vector<Walk> p;
    for (std::uint32_t i = 0; i < 400; ++i) p.push_back({EntityId{tag}, EntityId{i}});
    return p;
  };
  const auto h = pool(0), a = pool(1), s = pool(2);
  Rng rng = make_rng(1, 0);
  const MixResult mixed = mix_paths(h, a, s, {2, 1, 1}, 400, rng);
  std::array<std::size_t, 3> counted{};
  std::set<Walk> distinct;
  for (const Walk& w : mixed.corpus) {
    ++counted[w[0].value];
    distinct.insert(w);
  }
  const bool quotas = mixed.corpus.size() == 400 && counted == std::array<std::size_t, 3>{200, 100, 100} &&
                      distinct.size() == 400;
  return {deepwalk && quotas,
          fmt::format("1:0:0 corpus {} walks, multiset equal to P_H: {}; 2:1:1 over 400 -> {}/{}/{}",
                      corpus.size(), deepwalk ? "yes" : "no", counted[0], counted[1], counted[2])};
}

// ---------------------------------------------------------------- 5

Outcome sgns_gradient() {
  Rng rng = make_rng(55, 0);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> dims(2, 8), negs(1, 5);
  double worst = 0.0;
  int passed = 0;
  const double h = 1e-5;
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = dims(rng);
    const int nt = 1 + negs(rng);
    std::vector<double> center(dim);
    std::vector<std::vector<double>> outs(nt, std::vector<double>(dim));
    for (double& x : center) x = u(rng);
    for (auto& o : outs)
      for (double& x : o) x = u(rng);

    auto objective = [&](std::vector<double> c, std::vector<std::vector<double>> o) {
      std::vector<SgnsTarget> t;
      for (int i = 0; i < nt; ++i) t.push_back({o[i], i == 0 ? 1.0 : 0.0});
      return sgns_objective(c, t);
    };
    // lr = 1: the update equals the gradient.
    std::vector<double> c2 = center;
    auto o2 = outs;
    std::vector<SgnsTarget> t2;
    for (int i = 0; i < nt; ++i) t2.push_back({o2[i], i == 0 ? 1.0 : 0.0});
    sgns_step(c2, t2, 1.0);

    std::vector<double> analytic, numeric;
    for (int d = 0; d < dim; ++d) {
      analytic.push_back(c2[d] - center[d]);
      auto cp = center, cm = center;
      cp[d] += h;
      cm[d] -= h;
      numeric.push_back((objective(cp, outs) - objective(cm, outs)) / (2 * h));
    }
    for (int i = 0; i < nt; ++i) {
      for (int d = 0; d < dim; ++d) {
        analytic.push_back(o2[i][d] - outs[i][d]);
        auto op = outs, om = outs;
        op[i][d] += h;
        om[i][d] -= h;
        numeric.push_back((objective(center, op) - objective(center, om)) / (2 * h));
      }
    }
    double diff = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
      diff += std::pow(analytic[i] - numeric[i], 2);
      norm += numeric[i] * numeric[i];
    }
    const double rel = std::sqrt(diff) / std::max(std::sqrt(norm), 1e-12);
    worst = std::max(worst, rel);
    if (rel <= 1e-5) ++passed;
  }
  return {passed == 100, fmt::format("{}/100 instances within 1e-5, worst relative error {:.2e}", passed, worst)};
}

// ---------------------------------------------------------------- 6

double mean_cos(const Embedding& emb, std::span<const EntityId> a, std::span<const EntityId> b, bool same) {
  double s = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (same && i == j) continue;
      s += similarity(emb, a[i], b[j]);
      ++n;
    }
  }
  return s / static_cast<double>(n);
}

Outcome embedding_sanity() {
  const KnowledgeGraph g = two_cliques(10);
  std::vector<EntityId> a, b;
  for (int i = 0; i < 10; ++i) {
    a.push_back(*g.find_entity(fmt::format("{}e/a{}", kSynthBase, i)));
    b.push_back(*g.find_entity(fmt::format("{}e/b{}", kSynthBase, i)));
  }
  int good = 0;
  std::string margins;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    WalkConfig wc;
    wc.lambda_a = 0;
    wc.lambda_s = 0;
    wc.walks_per_entity = 20;
    wc.seed = seed;
    SkipGramConfig sc;
    sc.dim = 32;
    sc.seed = seed;
    const Embedding emb = train_skipgram(generate_corpus(g, wc), sc);
    const double intra = (mean_cos(emb, a, a, true) + mean_cos(emb, b, b, true)) / 2;
    const double inter = mean_cos(emb, a, b, false);
    if (intra - inter >= 0.3) ++good;
    margins += fmt::format("{}{:.3f}", margins.empty() ? "" : " ", intra - inter);
  }
  return {good >= 4, fmt::format("margin >= 0.3 in {}/5 seeds (margins {})", good, margins)};
}

// ---------------------------------------------------------------- 7

struct Planted {
  KnowledgeGraph g;
  Embedding emb;
  Candidate cand;
};

// A type of np + nn entities with random vectors; the label's positives are
// the first np members.
Planted planted(std::size_t np, std::size_t nn, std::size_t dim, std::uint64_t seed, double offset) {
  GraphBuilder b;
  for (std::size_t i = 0; i < np + nn; ++i) {
    const std::string e = fmt::format("x{:05}", i);
    b.add_type(e, "T");
    b.add_attribute(e, "flag", i < np ? "yes" : "no");
  }
  Planted p{std::move(b).build(), {}, {}};
  const auto members = p.g.entities_of_type(TypeId{0});
  p.emb = Embedding(std::vector<EntityId>(members.begin(), members.end()), dim);
  Rng rng = make_rng(seed, 0);
  std::normal_distribution<double> n01;
  for (std::size_t r = 0; r < p.emb.size(); ++r) {
    auto v = p.emb.input(r);
    for (std::size_t d = 0; d < dim; ++d) v[d] = n01(rng) + (d == 0 ? offset : 0.0);
  }
  p.cand = candidate_for(Label::avl(TypeId{0}, *p.g.find_property("flag"), "yes"), p.g);
  return p;
}

double naive_cos(std::span<const double> a, std::span<const double> b) {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return ab / std::sqrt(aa * bb);
}

Outcome estimators() {
  const Planted p = planted(20, 30, 16, 77, 0.0);
  std::vector<EntityId> pos, neg;
  for (EntityId e : p.g.entities_of_type(TypeId{0})) {
    (matches(p.cand.label, e, p.g) ? pos : neg).push_back(e);
  }
  double in = 0, ex = 0;
  for (EntityId i : pos)
    for (EntityId j : pos) in += naive_cos(p.emb.vector(i), p.emb.vector(j));
  for (EntityId i : pos)
    for (EntityId j : neg) ex += naive_cos(p.emb.vector(i), p.emb.vector(j));
  in /= static_cast<double>(pos.size() * pos.size());
  ex /= static_cast<double>(pos.size() * neg.size());
  const ScoredLabel s = distinctiveness_exact(p.cand, p.emb, p.g);
  const double err = std::max({std::fabs(s.internal_sim - in), std::fabs(s.external_sim - ex),
                               std::fabs(s.d - (in - ex))});

  const Planted big = planted(500, 2000, 16, 78, 0.8);
  const ScoredLabel exact = distinctiveness_exact(big.cand, big.emb, big.g);
  int within = 0;
  double worst = 0.0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    Rng rng = make_rng(1000 + t, 0);
    const ScoredLabel sm = distinctiveness_sampled(big.cand, big.emb, big.g, 100000, rng);
    const double dev = std::fabs(sm.d - exact.d);
    worst = std::max(worst, dev);
    if (sm.estimator == Estimator::kSampled && dev <= 0.02) ++within;
  }
  return {err <= 1e-12 && within >= 95,
          fmt::format("20x30 exact vs naive max error {:.1e}; 500x2000 sampled within 0.02 in "
                      "{}/100 trials (worst {:.4f})",
                      err, within, worst)};
}

// ---------------------------------------------------------------- 8

Outcome discrimination() {
  int wins = 0;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Communities c = two_communities(50, 0.3, 0.02, seed);
    WalkConfig wc;
    wc.lambda_a = 0;
    wc.lambda_s = 0;
    wc.walks_per_entity = 20;
    wc.seed = seed;
    SkipGramConfig sc;
    sc.dim = 32;
    sc.seed = seed;
    const Embedding emb = train_skipgram(generate_corpus(c.graph, wc), sc);
    const TypeId t{0};
    const std::size_t pop = c.graph.entities_of_type(t).size();
    auto make = [&](std::vector<std::uint32_t> positions, std::string key) {
      std::sort(positions.begin(), positions.end());
      Candidate cand;
      cand.label = Label::avl(t, PropertyId{0}, key);
      cand.key = key;
      cand.positives = std::move(positions);
      cand.support = static_cast<double>(cand.positives.size()) / static_cast<double>(pop);
      return cand;
    };
    std::vector<std::uint32_t> community;
    for (EntityId e : c.first) community.push_back(*c.graph.position_in_type(t, e));
    std::vector<std::uint32_t> all(pop);
    std::iota(all.begin(), all.end(), 0u);
    Rng rng = make_rng(seed, 0, 99);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(pop / 2);
    const double dc = distinctiveness_exact(make(community, "community"), emb, c.graph).d;
    const double dr = distinctiveness_exact(make(all, "random"), emb, c.graph).d;
    if (dc > dr) ++wins;
  }
  return {wins >= 19, fmt::format("community label beats a random 50/50 label in {}/20 seeds", wins)};
}

// ---------------------------------------------------------------- 9

std::vector<ScoredLabel> random_candidates(std::size_t n, std::size_t pop, Rng& rng) {
  std::uniform_real_distribution<double> dd(-0.5, 1.0);
  std::bernoulli_distribution coin(0.35);
  std::vector<ScoredLabel> out;
  for (std::size_t i = 0; i < n; ++i) {
    ScoredLabel s;
    for (std::uint32_t e = 0; e < pop; ++e) {
      if (coin(rng)) s.candidate.positives.push_back(e);
    }
    if (s.candidate.positives.empty()) s.candidate.positives.push_back(static_cast<std::uint32_t>(i % pop));
    s.candidate.key = fmt::format("c{}", i);
    s.candidate.support = static_cast<double>(s.candidate.positives.size()) / static_cast<double>(pop);
    s.d = dd(rng);
    out.push_back(std::move(s));
  }
  return out;
}

Outcome greedy() {
  const std::size_t pop = 20;
  int agree = 0;
  const int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = make_rng(900 + trial, 0);
    const auto cands = random_candidates(8, pop, rng);
    const LabelSet set = select_labels(cands, pop, 3, 0.5);
    // Exhaustive per-step recomputation with plain sets.
    std::vector<std::set<std::uint32_t>> chosen;
    std::set<std::uint32_t> covered;
    std::vector<bool> used(cands.size());
    bool same = set.trace.size() == 3;
    for (std::size_t step = 0; same && step < 3; ++step) {
      std::size_t best = cands.size();
      double best_obj = 0, best_r = 0, best_p = 0;
      for (std::size_t i = 0; i < cands.size(); ++i) {
        if (used[i]) continue;
        const std::set<std::uint32_t> pos(cands[i].candidate.positives.begin(), cands[i].candidate.positives.end());
        std::set<std::uint32_t> uni = covered;
        uni.insert(pos.begin(), pos.end());
        const double r = static_cast<double>(uni.size()) / pop;
        std::size_t overlap = 0;
        for (const auto& c : chosen)
          for (std::uint32_t e : pos) overlap += c.count(e);
        const double p = chosen.empty() ? 0.0 : static_cast<double>(overlap) / static_cast<double>(chosen.size() * pop);
        const double obj = cands[i].d + 0.5 * r - 0.5 * p;
        const auto& bc = best < cands.size() ? cands[best] : cands[i];
        const bool better =
            best == cands.size() || obj > best_obj ||
            (obj == best_obj &&
             (cands[i].d > bc.d ||
              (cands[i].d == bc.d && (cands[i].candidate.support > bc.candidate.support ||
                                      (cands[i].candidate.support == bc.candidate.support &&
                                       cands[i].candidate.key < bc.candidate.key)))));
        if (better) {
          best = i;
          best_obj = obj;
          best_r = r;
          best_p = p;
        }
      }
      const SelectionStep& st = set.trace[step];
      same = st.candidate == best && st.reward == best_r && st.penalty == best_p &&
             std::fabs(st.objective - best_obj) <= 1e-15;
      used[best] = true;
      chosen.emplace_back(cands[best].candidate.positives.begin(), cands[best].candidate.positives.end());
      covered.insert(chosen.back().begin(), chosen.back().end());
    }
    if (same) ++agree;
  }

  // Duplicate demotion: a, its twin, and a disjoint b of equal d and support.
  auto label = [&](std::string key, std::vector<std::uint32_t> pos) {
    ScoredLabel s;
    s.candidate.key = std::move(key);
    s.candidate.positives = std::move(pos);
    s.candidate.support = static_cast<double>(s.candidate.positives.size()) / pop;
    s.d = 0.4;
    return s;
  };
  const std::vector<ScoredLabel> dup = {label("a", {0, 1, 2, 3, 4, 5}), label("a2", {0, 1, 2, 3, 4, 5}),
                                        label("b", {10, 11, 12, 13, 14, 15})};
  const LabelSet ds = select_labels(dup, pop, 2, 0.5);
  const bool demoted = ds.labels.size() == 2 && ds.labels[0].candidate.key == "a" &&
                       ds.labels[1].candidate.key == "b" && ds.trace[1].penalty == 0.0;

  // Hand values.
  const Bitset six = to_bitset(std::vector<std::uint32_t>{0, 1, 2, 3, 4, 5}, pop);
  const Bitset none(pop);
  const Bitset cov = to_bitset(std::vector<std::uint32_t>{0, 1, 2, 3, 4, 5, 6, 7}, pop);
  const Bitset sub = to_bitset(std::vector<std::uint32_t>{1, 2}, pop);
  const bool hand = penalty(six, std::vector<Bitset>{}, pop) == 0.0 && reward(six, none, pop) == 0.3 &&
                    reward(sub, cov, pop) == 0.4 && penalty(six, std::vector<Bitset>{six}, pop) == 0.3;
  return {agree == trials && demoted && hand,
          fmt::format("trace equals exhaustive argmax in {}/{} instances; duplicate demoted: {}; "
                      "penalty(empty)=0, reward 0.3/0.4 by hand: {}",
                      agree, trials, demoted ? "yes" : "no", hand ? "yes" : "no")};
}

// ---------------------------------------------------------------- 10

Outcome indicators() {
  GraphBuilder b;
  const std::vector<std::string> ratings = {"5.0", "6.1", "6.5", "7.0", "7.0", "7.2", "7.8", "8.1", "8.3", "9.0"};
  for (int i = 0; i < 10; ++i) {
    const std::string f = fmt::format("f{}", i);
    b.add_type(f, "Film");
    b.add_attribute(f, "rating", ratings[i]);
    b.add_attribute(f, "genre", i < 2 ? "Comedy" : "Drama");
    if (i % 3 == 0) b.add_relation(f, "director", "d0");
  }
  const KnowledgeGraph g = std::move(b).build();
  const TypeId film = *g.find_type("Film");
  const PropertyId rating = *g.find_property("rating"), genre = *g.find_property("genre"),
                   director = *g.find_property("director");
  auto film_e = [&](int i) { return *g.find_entity(fmt::format("f{}", i)); };
  struct Case {
    Label l;
    int entity;
    Indicator want;
    const char* what;
  };
  const std::vector<Case> cases = {
      // 2 of 10 match: 8 of the 9 others differ.
      {Label::avl(film, genre, "Comedy"), 0, {IndicatorOp::kNeq, 89}, "genre Comedy"},
      {Label::avl(film, genre, "Drama"), 5, {IndicatorOp::kNeq, 22}, "genre Drama"},
      {Label::rel(film, director, *g.find_entity("d0")), 3, {IndicatorOp::kNeq, 67}, "director d0"},
      // Median of the ratings is 7.1.
      {Label::ail(film, rating, {8.0, 9.0, true}), 9, {IndicatorOp::kGt, 100}, "max rating"},
      {Label::ail(film, rating, {8.0, 9.0, true}), 7, {IndicatorOp::kGt, 78}, "rating 8.1"},
      {Label::ail(film, rating, {5.0, 7.1, false}), 3, {IndicatorOp::kLt, 56}, "rating 7.0 (tie)"},
      {Label::ail(film, rating, {5.0, 7.1, false}), 4, {IndicatorOp::kLt, 56}, "rating 7.0 (tie)"},
      {Label::ail(film, rating, {5.0, 7.1, false}), 0, {IndicatorOp::kLt, 100}, "min rating"},
      {Label::ail(film, rating, {7.1, 8.0, false}), 5, {IndicatorOp::kGt, 56}, "rating 7.2"},
  };
  int ok = 0;
  std::string bad;
  for (const Case& c : cases) {
    const Indicator got = indicator(c.l, film_e(c.entity), g);
    if (got == c.want) {
      ++ok;
    } else {
      bad += fmt::format(" [{}: got {}]", c.what, got.pct);
    }
  }
  return {ok == static_cast<int>(cases.size()),
          fmt::format("{}/{} hand-computed indicators match (Comedy 2 of 10 -> Neq 89%){}", ok, cases.size(), bad)};
}

// ---------------------------------------------------------------- 11

Outcome metrics() {
  const std::vector<std::string> pred = {"a", "x", "b"}, truth = {"a", "b"};
  const double m = map_at_k(pred, truth, 3), f = f_measure_at_k(pred, truth, 3);
  return {std::fabs(m - 0.8333) <= 1e-4 && std::fabs(m - 5.0 / 6.0) <= 1e-6 && std::fabs(f - 0.8) <= 1e-6,
          fmt::format("[a,x,b] vs [a,b] at k=3: MAP {:.6f}, F {:.6f}", m, f)};
}

// ---------------------------------------------------------------- 12

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism_and_scale() {
  const fs::path root = fs::temp_directory_path() / fmt::format("kgprof_accept_{}", ::getpid());
  fs::create_directories(root);
  std::vector<fs::path> outs;
  for (int run = 0; run < 2; ++run) {
    PipelineConfig cfg;
    cfg.input = KGPROF_SOURCE_DIR "/data/sample.tsv";
    cfg.truth = KGPROF_SOURCE_DIR "/data/sample_truth.json";
    cfg.out = (root / fmt::format("run{}", run)).string();
    cfg.seed = 1;
    cfg.threads = 1;
    Pipeline p(cfg);
    p.run_all();
    p.write_manifest("run-all");
    outs.emplace_back(cfg.out);
  }
  std::size_t files = 0, identical = 0;
  for (const auto& entry : fs::directory_iterator(outs[0])) {
    const std::string name = entry.path().filename().string();
    if (name == artifact::kManifest) continue;
    ++files;
    if (fs::exists(outs[1] / name) && slurp(entry.path()) == slurp(outs[1] / name)) ++identical;
  }
  auto digests = [](const fs::path& dir) {
    const auto j = nlohmann::json::parse(slurp(dir / artifact::kManifest));
    return j.at("outputs").dump();
  };
  const bool manifest_same = digests(outs[0]) == digests(outs[1]);
  const bool deterministic = files == 12 && identical == files && manifest_same;
  fs::remove_all(root);

  const std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  const KnowledgeGraph g = scale_graph(g_scale_entities, g_scale_edges, 1);
  const CandidatePool pool = filter_candidates(enumerate_candidates(g), 0.1);
  const auto t0 = Clock::now();
  WalkConfig wc;
  wc.walks_per_entity = 20;
  wc.walk_len = 8;
  wc.threads = threads;
  const WalkCorpus corpus = generate_corpus(g, wc);
  const double t_walks = seconds_since(t0);
  SkipGramConfig sc;
  sc.dim = 64;
  sc.threads = threads;
  const Embedding emb = train_skipgram(corpus, sc);
  const double t_train = seconds_since(t0) - t_walks;
  ScoreOptions so;
  so.threads = threads;
  const auto scored = score_pool(pool, emb, g, so);
  const double total = seconds_since(t0);
  const bool fast = total < 900.0 && !scored.empty();
  return {deterministic && fast,
          fmt::format("run-all twice: {}/{} artifacts byte-identical, manifest digests equal: {}; "
                      "scale {} entities / {} edges on {} thread(s): walks {:.0f}s + train {:.0f}s + "
                      "score {:.0f}s = {:.0f}s ({} labels)",
                      identical, files, manifest_same ? "yes" : "no", g.num_entities(), g.num_edges(),
                      threads, t_walks, t_train, total - t_walks - t_train, total, scored.size())};
}

struct Criterion {
  int id;
  const char* name;
  double limit_sec;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_level(spdlog::level::err);
  int only = 0;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--only") only = std::stoi(argv[i + 1]);
    if (flag == "--scale-entities") g_scale_entities = std::stoul(argv[i + 1]);
    if (flag == "--scale-edges") g_scale_edges = std::stoul(argv[i + 1]);
  }
  const std::vector<Criterion> criteria = {
      {1, "support filter", 1, support_filter},
      {2, "discretization", 5, discretization},
      {3, "walk validity", 30, walk_validity},
      {4, "path mixing", 30, mixing},
      {5, "SGNS gradient", 10, sgns_gradient},
      {6, "embedding sanity", 60, embedding_sanity},
      {7, "distinctiveness estimators", 120, estimators},
      {8, "distinctiveness discrimination", 300, discrimination},
      {9, "greedy selection", 1, greedy},
      {10, "indicators", 1, indicators},
      {11, "ranking metrics", 1, metrics},
      {12, "determinism and scale", 3600, determinism_and_scale},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    if (only && c.id != only) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    const double took = seconds_since(t0);
    const bool in_time = took <= c.limit_sec;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("%s %2d %s: %s [%.2fs%s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), took,
                in_time ? "" : fmt::format(", limit {}s", c.limit_sec).c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
