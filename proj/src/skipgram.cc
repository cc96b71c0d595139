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

#include "kgprof/skipgram.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <charconv>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

namespace kgprof {

Embedding::Embedding(std::vector<EntityId> entities, std::size_t dim)
    : entities_(std::move(entities)), dim_(dim) {
  for (std::uint32_t i = 0; i < entities_.size(); ++i) index_.emplace(entities_[i], i);
  input_.assign(entities_.size() * dim_, 0.0);
  context_.assign(entities_.size() * dim_, 0.0);
}

std::optional<std::size_t> Embedding::row_of(EntityId e) const {
  auto it = index_.find(e);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const double> Embedding::vector(EntityId e) const {
  auto row = row_of(e);
  if (!row) {
    throw Error(ErrorCode::kMissingEmbedding, fmt::format("entity id {} has no embedding", e.value));
  }
  return input(*row);
}

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  for (; i < n; ++i) s0 += a[i] * b[i];
  return (s0 + s1) + (s2 + s3);
}

double cosine(std::span<const double> a, std::span<const double> b) {
  const double na = dot(a, a);
  const double nb = dot(b, b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  // sqrt(x * x) == x exactly, so a vector's self-similarity is exactly 1.
  return dot(a, b) / std::sqrt(na * nb);
}

double similarity(const Embedding& emb, EntityId i, EntityId j) {
  return cosine(emb.vector(i), emb.vector(j));
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double log_sigmoid(double x) {
  // log(1 / (1 + e^-x)), stable for large |x|
  return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

// Accumulates the center gradient into `grad` and updates `out` in place.
inline void sgns_pair(const double* center, double* out, double label, double lr, double* grad,
                      std::size_t dim) {
  const double f = dot({center, dim}, {out, dim});
  const double g = (label - sigmoid(f)) * lr;
  for (std::size_t k = 0; k < dim; ++k) {
    const double o = out[k];
    grad[k] += g * o;
    out[k] = o + g * center[k];
  }
}

inline void prefetch_row(const double* row, std::size_t dim) {
  for (std::size_t k = 0; k < dim; k += 8) __builtin_prefetch(row + k, 1);
}

}  // namespace

double sgns_objective(std::span<const double> center, std::span<const SgnsTarget> targets) {
  double total = 0.0;
  for (const SgnsTarget& t : targets) {
    const double f = dot(center, t.vec);
    total += t.label > 0.5 ? log_sigmoid(f) : log_sigmoid(-f);
  }
  return total;
}

void sgns_step(std::span<double> center, std::span<const SgnsTarget> targets, double lr) {
  const std::size_t dim = center.size();
  std::vector<double> grad(dim, 0.0);
  for (const SgnsTarget& t : targets) {
    if (t.vec.size() != dim) throw Error(ErrorCode::kInvalidArgument, "dimension mismatch");
    sgns_pair(center.data(), t.vec.data(), t.label, lr, grad.data(), dim);
  }
  for (std::size_t k = 0; k < dim; ++k) center[k] += grad[k];
}

Embedding train_skipgram(const WalkCorpus& corpus, const SkipGramConfig& config,
                         const EpochCallback& on_epoch) {
  if (corpus.empty()) throw Error(ErrorCode::kInvalidArgument, "walk corpus is empty");
  if (config.dim == 0) throw Error(ErrorCode::kInvalidArgument, "dim must be positive");

  // Vocabulary and flattened token rows.
  std::uint32_t max_id = 0;
  for (const Walk& w : corpus) {
    for (EntityId e : w) max_id = std::max(max_id, e.value);
  }
  std::vector<std::int64_t> row_of(static_cast<std::size_t>(max_id) + 1, -1);
  for (const Walk& w : corpus) {
    for (EntityId e : w) row_of[e.value] = 0;
  }
  std::vector<EntityId> vocab;
  for (std::uint32_t i = 0; i <= max_id; ++i) {
    if (row_of[i] == 0) {
      row_of[i] = static_cast<std::int64_t>(vocab.size());
      vocab.push_back(EntityId{i});
    }
  }
  std::vector<std::uint32_t> tokens;
  std::vector<std::size_t> offsets{0};
  std::vector<double> counts(vocab.size(), 0.0);
  for (const Walk& w : corpus) {
    for (EntityId e : w) {
      const auto r = static_cast<std::uint32_t>(row_of[e.value]);
      tokens.push_back(r);
      counts[r] += 1.0;
    }
    offsets.push_back(tokens.size());
  }

  const std::size_t dim = config.dim;
  Embedding emb(vocab, dim);
  {
    Rng rng = make_rng(config.seed, 0, 11);
    std::uniform_real_distribution<double> init(-0.5 / static_cast<double>(dim),
                                                0.5 / static_cast<double>(dim));
    for (std::size_t r = 0; r < vocab.size(); ++r) {
      for (double& x : emb.input(r)) x = init(rng);
    }
  }

  // Unigram^0.75 sampling table.
  const std::size_t table_size =
      std::clamp<std::size_t>(100 * vocab.size(), 1'000'000, 100'000'000);
  std::vector<std::uint32_t> table(table_size);
  {
    double norm = 0.0;
    for (double c : counts) norm += std::pow(c, 0.75);
    std::size_t w = 0;
    double cum = std::pow(counts[0], 0.75) / norm;
    for (std::size_t a = 0; a < table_size; ++a) {
      table[a] = static_cast<std::uint32_t>(w);
      if (static_cast<double>(a) / static_cast<double>(table_size) > cum && w + 1 < vocab.size()) {
        ++w;
        cum += std::pow(counts[w], 0.75) / norm;
      }
    }
  }

  const std::size_t num_walks = corpus.size();
  const double total_work = static_cast<double>(config.epochs) * static_cast<double>(tokens.size());
  const double lr0 = config.initial_lr;
  const std::size_t threads = std::max<std::size_t>(config.threads, 1);
  std::atomic<std::size_t> processed{0};

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::vector<std::size_t> order(num_walks);
    std::iota(order.begin(), order.end(), 0);
    {
      Rng shuffle_rng = make_rng(config.seed, epoch, 12);
      std::shuffle(order.begin(), order.end(), shuffle_rng);
    }
    parallel_for(threads, threads, [&](std::size_t tid) {
      Rng rng = make_rng(config.seed, epoch * 1315423911ULL + tid, 13);
      std::vector<double> grad(dim);
      std::vector<std::uint32_t> negs(config.negatives);
      const std::size_t first = num_walks * tid / threads;
      const std::size_t last = num_walks * (tid + 1) / threads;
      std::size_t local = 0;
      double lr = lr0;
      for (std::size_t k = first; k < last; ++k) {
        const std::size_t wi = order[k];
        const std::size_t begin = offsets[wi];
        const std::size_t len = offsets[wi + 1] - begin;
        for (std::size_t c = 0; c < len; ++c) {
          if ((local & 1023) == 0) {
            const double done =
                static_cast<double>(processed.load(std::memory_order_relaxed) + local);
            lr = lr0 * std::max(1.0 - 0.99 * done / total_work, 0.01);
          }
          ++local;
          if (threads > 1 && (local & 1023) == 0) {
            processed.fetch_add(1024, std::memory_order_relaxed);
            local -= 1024;
          }
          const std::uint32_t center = tokens[begin + c];
          if (c + 1 < len) prefetch_row(emb.input(tokens[begin + c + 1]).data(), dim);
          double* v = emb.input(center).data();
          const std::size_t lo = c >= config.window ? c - config.window : 0;
          const std::size_t hi = std::min(len, c + config.window + 1);
          for (std::size_t j = lo; j < hi; ++j) {
            if (j == c) continue;
            const std::uint32_t ctx = tokens[begin + j];
            if (j + 1 < hi) prefetch_row(emb.context(tokens[begin + j + 1]).data(), dim);
            std::size_t num_neg = 0;
            for (std::size_t n = 0; n < config.negatives; ++n) {
              const std::uint32_t neg = table[rng() % table_size];
              if (neg == ctx) continue;
              negs[num_neg++] = neg;
              prefetch_row(emb.context(neg).data(), dim);
            }
            std::fill(grad.begin(), grad.end(), 0.0);
            sgns_pair(v, emb.context(ctx).data(), 1.0, lr, grad.data(), dim);
            for (std::size_t n = 0; n < num_neg; ++n) {
              sgns_pair(v, emb.context(negs[n]).data(), 0.0, lr, grad.data(), dim);
            }
            for (std::size_t d = 0; d < dim; ++d) v[d] += grad[d];
          }
        }
      }
      processed.fetch_add(local, std::memory_order_relaxed);
    });
    if (on_epoch) on_epoch(epoch + 1, emb);
  }
  return emb;
}

void write_embedding(const Embedding& emb, const KnowledgeGraph& g, std::ostream& out) {
  out << emb.size() << ' ' << emb.dim() << '\n';
  std::string line;
  for (std::size_t r = 0; r < emb.size(); ++r) {
    line = g.entity_name(emb.entities()[r]);
    for (double x : emb.input(r)) {
      line += ' ';
      line += format_sig6(x);
    }
    line += '\n';
    out << line;
  }
}

Embedding read_embedding(std::istream& in, const KnowledgeGraph& g) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kFormat, "embedding file is empty");
  std::size_t n = 0, dim = 0;
  {
    std::istringstream header(line);
    if (!(header >> n >> dim) || dim == 0) {
      throw Error(ErrorCode::kFormat, "embedding header must be 'N D'", 1);
    }
  }
  std::vector<EntityId> entities;
  std::vector<std::vector<double>> rows;
  std::string name;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    ss >> name;
    auto e = g.find_entity(name);
    if (!e) {
      throw Error(ErrorCode::kFormat, fmt::format("embedding line {}: unknown entity '{}'", line_no, name),
                  line_no);
    }
    std::vector<double> values;
    values.reserve(dim);
    std::string tok;
    while (ss >> tok) {
      double x = 0.0;
      const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
      if (ec != std::errc() || end != tok.data() + tok.size()) {
        throw Error(ErrorCode::kFormat,
                    fmt::format("embedding line {}: bad number '{}'", line_no, tok), line_no);
      }
      values.push_back(x);
    }
    if (values.size() != dim) {
      throw Error(ErrorCode::kFormat,
                  fmt::format("embedding line {}: expected {} values, got {}", line_no, dim,
                              values.size()),
                  line_no);
    }
    entities.push_back(*e);
    rows.push_back(std::move(values));
  }
  if (entities.size() != n) {
    throw Error(ErrorCode::kFormat,
                fmt::format("embedding header announces {} rows, file has {}", n, entities.size()));
  }
  Embedding emb(entities, dim);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::copy(rows[r].begin(), rows[r].end(), emb.input(r).begin());
  }
  return emb;
}

}  // namespace kgprof
