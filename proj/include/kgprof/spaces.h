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

// Per-type point spaces used to pick walk successors by attribute or
// structural resemblance, plus an L-infinity radius index over them.

#ifndef KGPROF_SPACES_H_
#define KGPROF_SPACES_H_

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "kgprof/common.h"
#include "kgprof/graph.h"

namespace kgprof {

// Row-major points. Numeric coordinates lie in [0, 1] (NaN = missing).
// Categorical coordinates are category codes (-1 = missing) whose
// per-dimension distance is 0 when equal and 1 otherwise.
struct PointSpace {
  std::vector<EntityId> rows;
  std::size_t numeric_dims = 0;
  std::size_t categorical_dims = 0;
  std::vector<double> numeric;
  std::vector<std::int32_t> categorical;

  std::size_t size() const { return rows.size(); }
  double coord(std::size_t row, std::size_t dim) const { return numeric[row * numeric_dims + dim]; }
  std::int32_t category(std::size_t row, std::size_t dim) const {
    return categorical[row * categorical_dims + dim];
  }
  std::optional<std::size_t> row_of(EntityId e) const;
  void build_row_index();

  // Is `other` inside the L-infinity ball of radius r around `center`? A
  // dimension the center lacks imposes no constraint; a dimension the center
  // has but `other` lacks excludes `other`.
  bool within(std::size_t center, std::size_t other, double r) const;
  // L-infinity distance under the same missing-value rule (infinity when
  // `other` is excluded).
  double distance(std::size_t center, std::size_t other) const;

  std::unordered_map<EntityId, std::uint32_t> row_index;
};

struct AttributiveSpace {
  TypeId type;
  std::vector<PropertyId> numeric_columns;
  std::vector<PropertyId> categorical_columns;
  // Per numeric column, the raw range used for min-max normalization.
  std::vector<double> column_min, column_max;
  PointSpace points;
};

struct StructuralSpace {
  TypeId type;
  std::vector<TypeId> columns;        // every type of the graph
  std::vector<std::uint32_t> counts;  // raw neighbor counts, rows x columns
  PointSpace points;                  // min-max normalized counts

  std::uint32_t raw(std::size_t row, std::size_t col) const { return counts[row * columns.size() + col]; }
};

struct SpaceOptions {
  // Attributes present on fewer than this share of E_t are dropped.
  double min_coverage = 0.5;
};

// Throws kInvalidArgument when |E_t| < 2 and kNoUsableDimensions when every
// attribute column is dropped.
AttributiveSpace build_attr_space(const KnowledgeGraph& g, TypeId t, const SpaceOptions& options = {});
StructuralSpace build_struct_space(const KnowledgeGraph& g, TypeId t);

// Uniform grid over up to three fully populated numeric dimensions with cell
// size r; candidate cells are verified with the exact ball test.
class RadiusIndex {
 public:
  RadiusIndex(const PointSpace& space, double r);

  double radius() const { return r_; }
  // Rows within radius of `row`, excluding `row` itself, in ascending order.
  void ball(std::size_t row, std::vector<std::uint32_t>& out) const;
  std::size_t ball_size(std::size_t row) const;

 private:
  struct CellKey {
    std::int64_t c[3];
    bool operator==(const CellKey&) const = default;
  };
  struct CellHash {
    std::size_t operator()(const CellKey& k) const noexcept;
  };

  CellKey cell_of(std::size_t row) const;
  template <typename Fn>
  void visit_candidates(std::size_t row, Fn&& fn) const;

  const PointSpace* space_;
  double r_;
  std::vector<std::size_t> grid_dims_;
  std::unordered_map<CellKey, std::vector<std::uint32_t>, CellHash> cells_;
};

// Mean per-dimension gap between adjacent distinct values, over numeric
// dimensions; a fallback of 0.01 when there is none.
double initial_radius(const PointSpace& space);

struct RadiusResult {
  double r = 0.0;
  double mean_population = 0.0;
  bool in_band = false;    // mean population within [target/2, 2*target]
  bool degenerate = false; // population does not depend on r
  int iterations = 0;
};

// Geometric search (doubling/halving, then bisection; at most 30 probes) for
// a radius whose mean ball population, over up to `max_anchors` evenly
// spaced rows, approaches target_count.
RadiusResult adapt_radius(const PointSpace& space, double target_count, double r0,
                          std::size_t max_anchors = 1000);

}  // namespace kgprof

#endif  // KGPROF_SPACES_H_
