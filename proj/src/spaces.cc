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

#include "kgprof/spaces.h"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

#include <fmt/format.h>

#include "kgprof/labels.h"

namespace kgprof {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

std::optional<std::size_t> PointSpace::row_of(EntityId e) const {
  auto it = row_index.find(e);
  if (it == row_index.end()) return std::nullopt;
  return it->second;
}

void PointSpace::build_row_index() {
  row_index.clear();
  for (std::uint32_t i = 0; i < rows.size(); ++i) row_index.emplace(rows[i], i);
}

bool PointSpace::within(std::size_t center, std::size_t other, double r) const {
  for (std::size_t d = 0; d < numeric_dims; ++d) {
    const double a = coord(center, d);
    if (std::isnan(a)) continue;
    const double b = coord(other, d);
    if (std::isnan(b) || std::fabs(a - b) > r) return false;
  }
  for (std::size_t d = 0; d < categorical_dims; ++d) {
    const std::int32_t a = category(center, d);
    if (a < 0) continue;
    const std::int32_t b = category(other, d);
    if (b < 0 || (a != b && r < 1.0)) return false;
  }
  return true;
}

double PointSpace::distance(std::size_t center, std::size_t other) const {
  double dist = 0.0;
  for (std::size_t d = 0; d < numeric_dims; ++d) {
    const double a = coord(center, d);
    if (std::isnan(a)) continue;
    const double b = coord(other, d);
    if (std::isnan(b)) return kInf;
    dist = std::max(dist, std::fabs(a - b));
  }
  for (std::size_t d = 0; d < categorical_dims; ++d) {
    const std::int32_t a = category(center, d);
    if (a < 0) continue;
    const std::int32_t b = category(other, d);
    if (b < 0) return kInf;
    if (a != b) dist = std::max(dist, 1.0);
  }
  return dist;
}

// ---------------------------------------------------------------------------
// Space construction

namespace {

void require_two(const KnowledgeGraph& g, TypeId t) {
  if (g.entities_of_type(t).size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("type '{}' needs at least 2 entities for a point space",
                            t.value < g.num_types() ? g.type_name(t) : "?"));
  }
}

// Min-max normalizes column `d` in place over present values.
void normalize_column(std::vector<double>& data, std::size_t stride, std::size_t d,
                      double* out_min = nullptr, double* out_max = nullptr) {
  double lo = kInf, hi = -kInf;
  for (std::size_t i = d; i < data.size(); i += stride) {
    if (std::isnan(data[i])) continue;
    lo = std::min(lo, data[i]);
    hi = std::max(hi, data[i]);
  }
  for (std::size_t i = d; i < data.size(); i += stride) {
    if (std::isnan(data[i])) continue;
    data[i] = hi > lo ? (data[i] - lo) / (hi - lo) : 0.0;
  }
  if (out_min) *out_min = lo;
  if (out_max) *out_max = hi;
}

}  // namespace

AttributiveSpace build_attr_space(const KnowledgeGraph& g, TypeId t, const SpaceOptions& options) {
  require_two(g, t);
  const auto members = g.entities_of_type(t);
  const std::size_t n = members.size();

  std::map<PropertyId, std::vector<std::pair<std::uint32_t, LiteralId>>> attrs;
  for (std::uint32_t pos = 0; pos < n; ++pos) {
    for (const Edge& edge : g.out_edges(members[pos])) {
      if (edge.is_attribute()) attrs[edge.property].emplace_back(pos, edge.target_literal());
    }
  }

  AttributiveSpace space;
  space.type = t;
  std::vector<std::vector<double>> numeric_cols;
  std::vector<std::vector<std::int32_t>> categorical_cols;
  for (const auto& [p, occ] : attrs) {
    std::size_t covered = 0;
    for (std::size_t i = 0; i < occ.size(); ++i) {
      if (i == 0 || occ[i].first != occ[i - 1].first) ++covered;
    }
    if (static_cast<double>(covered) < options.min_coverage * static_cast<double>(n)) continue;

    std::vector<LiteralValue> values;
    values.reserve(occ.size());
    for (const auto& [pos, lit] : occ) values.push_back(g.literal(lit));
    if (classify_attribute(values) != AttributeClass::kCategorical) {
      std::vector<double> sum(n, 0.0);
      std::vector<int> cnt(n, 0);
      for (const auto& [pos, lit] : occ) {
        const LiteralValue& v = g.literal(lit);
        if (!v.is_numeric()) continue;
        sum[pos] += v.number;
        ++cnt[pos];
      }
      std::vector<double> col(n, kNaN);
      for (std::size_t i = 0; i < n; ++i) {
        if (cnt[i] > 0) col[i] = sum[i] / cnt[i];
      }
      space.numeric_columns.push_back(p);
      numeric_cols.push_back(std::move(col));
    } else {
      // The lexicographically smallest value represents a multi-valued entity.
      std::vector<const std::string*> pick(n, nullptr);
      for (const auto& [pos, lit] : occ) {
        const std::string& raw = g.literal(lit).raw;
        if (!pick[pos] || raw < *pick[pos]) pick[pos] = &raw;
      }
      std::vector<std::string> distinct;
      for (const auto* s : pick) {
        if (s) distinct.push_back(*s);
      }
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      std::vector<std::int32_t> col(n, -1);
      for (std::size_t i = 0; i < n; ++i) {
        if (!pick[i]) continue;
        col[i] = static_cast<std::int32_t>(
            std::lower_bound(distinct.begin(), distinct.end(), *pick[i]) - distinct.begin());
      }
      space.categorical_columns.push_back(p);
      categorical_cols.push_back(std::move(col));
    }
  }
  if (numeric_cols.empty() && categorical_cols.empty()) {
    throw Error(ErrorCode::kNoUsableDimensions,
                fmt::format("type '{}' has no attribute with sufficient coverage", g.type_name(t)));
  }

  PointSpace& pts = space.points;
  pts.numeric_dims = numeric_cols.size();
  pts.categorical_dims = categorical_cols.size();
  for (std::size_t i = 0; i < n; ++i) {
    bool usable = false;
    for (const auto& col : numeric_cols) usable |= !std::isnan(col[i]);
    for (const auto& col : categorical_cols) usable |= col[i] >= 0;
    if (!usable) continue;
    pts.rows.push_back(members[i]);
    for (const auto& col : numeric_cols) pts.numeric.push_back(col[i]);
    for (const auto& col : categorical_cols) pts.categorical.push_back(col[i]);
  }
  space.column_min.resize(pts.numeric_dims);
  space.column_max.resize(pts.numeric_dims);
  for (std::size_t d = 0; d < pts.numeric_dims; ++d) {
    normalize_column(pts.numeric, pts.numeric_dims, d, &space.column_min[d], &space.column_max[d]);
  }
  pts.build_row_index();
  return space;
}

StructuralSpace build_struct_space(const KnowledgeGraph& g, TypeId t) {
  require_two(g, t);
  const auto members = g.entities_of_type(t);
  const std::size_t nt = g.num_types();

  StructuralSpace space;
  space.type = t;
  space.columns.resize(nt);
  for (std::uint32_t c = 0; c < nt; ++c) space.columns[c] = TypeId{c};
  space.counts.assign(members.size() * nt, 0);

  std::vector<EntityId> nbrs;
  for (std::size_t i = 0; i < members.size(); ++i) {
    auto span = g.neighbors(members[i]);
    nbrs.assign(span.begin(), span.end());
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    for (EntityId x : nbrs) {
      for (TypeId tx : g.types_of(x)) ++space.counts[i * nt + tx.value];
    }
  }

  PointSpace& pts = space.points;
  pts.rows.assign(members.begin(), members.end());
  pts.numeric_dims = nt;
  pts.numeric.assign(space.counts.begin(), space.counts.end());
  for (std::size_t d = 0; d < nt; ++d) normalize_column(pts.numeric, nt, d);
  pts.build_row_index();
  return space;
}

// ---------------------------------------------------------------------------
// RadiusIndex

std::size_t RadiusIndex::CellHash::operator()(const CellKey& k) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::int64_t c : k.c) {
    h ^= static_cast<std::uint64_t>(c);
    h *= 1099511628211ULL;
    h ^= h >> 32;
  }
  return static_cast<std::size_t>(h);
}

RadiusIndex::RadiusIndex(const PointSpace& space, double r) : space_(&space), r_(r) {
  if (!(r > 0.0)) throw Error(ErrorCode::kInvalidArgument, "radius must be positive");
  std::vector<std::pair<double, std::size_t>> spread;
  for (std::size_t d = 0; d < space.numeric_dims; ++d) {
    double lo = kInf, hi = -kInf;
    bool complete = true;
    for (std::size_t i = 0; i < space.size() && complete; ++i) {
      const double x = space.coord(i, d);
      if (std::isnan(x)) complete = false;
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    if (complete && space.size() > 0) spread.emplace_back(hi - lo, d);
  }
  std::stable_sort(spread.begin(), spread.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; k < spread.size() && k < 3; ++k) grid_dims_.push_back(spread[k].second);

  for (std::uint32_t i = 0; i < space.size(); ++i) cells_[cell_of(i)].push_back(i);
}

RadiusIndex::CellKey RadiusIndex::cell_of(std::size_t row) const {
  CellKey key{{0, 0, 0}};
  for (std::size_t k = 0; k < grid_dims_.size(); ++k) {
    key.c[k] = static_cast<std::int64_t>(std::floor(space_->coord(row, grid_dims_[k]) / r_));
  }
  return key;
}

template <typename Fn>
void RadiusIndex::visit_candidates(std::size_t row, Fn&& fn) const {
  const CellKey home = cell_of(row);
  const std::size_t dims = grid_dims_.size();
  std::size_t combos = 1;
  for (std::size_t k = 0; k < dims; ++k) combos *= 3;
  for (std::size_t code = 0; code < combos; ++code) {
    CellKey key = home;
    std::size_t rest = code;
    for (std::size_t k = 0; k < dims; ++k) {
      key.c[k] += static_cast<std::int64_t>(rest % 3) - 1;
      rest /= 3;
    }
    auto it = cells_.find(key);
    if (it == cells_.end()) continue;
    for (std::uint32_t j : it->second) {
      if (j != row && space_->within(row, j, r_)) fn(j);
    }
  }
}

void RadiusIndex::ball(std::size_t row, std::vector<std::uint32_t>& out) const {
  out.clear();
  visit_candidates(row, [&](std::uint32_t j) { out.push_back(j); });
  std::sort(out.begin(), out.end());
}

std::size_t RadiusIndex::ball_size(std::size_t row) const {
  std::size_t n = 0;
  visit_candidates(row, [&](std::uint32_t) { ++n; });
  return n;
}

// ---------------------------------------------------------------------------
// Radius adaptation

double initial_radius(const PointSpace& space) {
  double total = 0.0;
  std::size_t dims = 0;
  std::vector<double> values;
  for (std::size_t d = 0; d < space.numeric_dims; ++d) {
    values.clear();
    for (std::size_t i = 0; i < space.size(); ++i) {
      const double x = space.coord(i, d);
      if (!std::isnan(x)) values.push_back(x);
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    if (values.size() < 2) continue;
    total += (values.back() - values.front()) / static_cast<double>(values.size() - 1);
    ++dims;
  }
  return dims > 0 ? total / static_cast<double>(dims) : 0.01;
}

namespace {

bool all_rows_identical(const PointSpace& space) {
  for (std::size_t i = 1; i < space.size(); ++i) {
    for (std::size_t d = 0; d < space.numeric_dims; ++d) {
      const double a = space.coord(0, d), b = space.coord(i, d);
      if (std::isnan(a) != std::isnan(b) || (!std::isnan(a) && a != b)) return false;
    }
    for (std::size_t d = 0; d < space.categorical_dims; ++d) {
      if (space.category(0, d) != space.category(i, d)) return false;
    }
  }
  return true;
}

}  // namespace

RadiusResult adapt_radius(const PointSpace& space, double target_count, double r0,
                          std::size_t max_anchors) {
  if (!(target_count >= 1.0)) throw Error(ErrorCode::kInvalidArgument, "target_count must be >= 1");
  if (!(r0 > 0.0)) throw Error(ErrorCode::kInvalidArgument, "initial radius must be positive");

  std::vector<std::size_t> anchors;
  const std::size_t n = space.size();
  const std::size_t m = std::min(n, std::max<std::size_t>(max_anchors, 1));
  for (std::size_t k = 0; k < m; ++k) anchors.push_back(k * n / m);

  auto population = [&](double r) {
    RadiusIndex index(space, r);
    double sum = 0.0;
    for (std::size_t a : anchors) sum += static_cast<double>(index.ball_size(a));
    return anchors.empty() ? 0.0 : sum / static_cast<double>(anchors.size());
  };

  const double band_lo = target_count / 2.0;
  const double band_hi = target_count * 2.0;
  auto in_band = [&](double p) { return p >= band_lo && p <= band_hi; };
  auto miss = [&](double p) { return std::fabs(std::log((p + 0.5) / (target_count + 0.5))); };

  RadiusResult result;
  if (all_rows_identical(space)) {
    result.r = r0;
    result.mean_population = population(r0);
    result.in_band = in_band(result.mean_population);
    result.degenerate = true;
    result.iterations = 1;
    return result;
  }

  double r = r0;
  double under = 0.0;   // largest radius known to be too small
  double over = kInf;   // smallest radius known to be too large
  double best_miss = kInf;
  for (int it = 0; it < 30; ++it) {
    const double p = population(r);
    result.iterations = it + 1;
    if (miss(p) < best_miss) {
      best_miss = miss(p);
      result.r = r;
      result.mean_population = p;
    }
    if (in_band(p)) {
      result.r = r;
      result.mean_population = p;
      result.in_band = true;
      return result;
    }
    if (p < band_lo) {
      under = r;
      // Normalized coordinates never differ by more than 1.
      if (under > 2.0) break;
      r = std::isinf(over) ? r * 2.0 : std::sqrt(under * over);
    } else {
      over = r;
      if (over < 1e-12) break;
      r = under > 0.0 ? std::sqrt(under * over) : r / 2.0;
    }
  }
  return result;
}

}  // namespace kgprof
