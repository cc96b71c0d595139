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

#ifndef KGPROF_DISCRETIZE_H_
#define KGPROF_DISCRETIZE_H_

#include <cstddef>
#include <span>
#include <vector>

namespace kgprof {

// [lo, hi), or [lo, hi] when closed_hi. Only the greatest interval of a
// partition is closed. A point interval [v, v] is produced for constant data.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool closed_hi = false;

  bool contains(double x) const { return x >= lo && (x < hi || (closed_hi && x == hi)); }
  bool operator==(const Interval&) const = default;
};

struct DiscretizePolicy {
  enum class Mode { kDensity, kYear };

  Mode mode = Mode::kDensity;
  // Density mode only.
  std::size_t min_samples = 20;
  double min_fraction = 0.05;
  // Gaussian kernel bandwidth; <= 0 selects Silverman's rule of thumb.
  double bandwidth = 0.0;
  std::size_t grid_points = 512;
  // Year mode bucket width.
  int year_span = 5;
};

// Bandwidth from Silverman's rule: 0.9 * min(sd, IQR / 1.34) * n^(-1/5).
double silverman_bandwidth(std::span<const double> sorted_values);

// Partitions the value range. Year mode: calendar buckets aligned to
// multiples of year_span. Density mode: Gaussian KDE on an even grid, cut at
// the lowest grid point between adjacent density peaks, then merge intervals
// holding fewer than min_fraction of the values into their denser neighbor.
// Interior cut points are rounded to 6 significant digits; the outer bounds
// are rounded outward.
//
// Throws kTooFewSamples (density mode, fewer than min_samples values) and
// kInvalidArgument on non-finite input.
std::vector<Interval> discretize(std::span<const double> values, const DiscretizePolicy& policy);

}  // namespace kgprof

#endif  // KGPROF_DISCRETIZE_H_
