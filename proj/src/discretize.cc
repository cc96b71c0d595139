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

#include "kgprof/discretize.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "kgprof/common.h"

namespace kgprof {

namespace {

double quantile(std::span<const double> sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::vector<Interval> year_buckets(std::span<const double> sorted, int span) {
  const auto floor_to = [span](double y) {
    return static_cast<long>(std::floor(y / span)) * span;
  };
  const long first = floor_to(sorted.front());
  const long last = floor_to(sorted.back());
  std::vector<Interval> out;
  for (long lo = first; lo <= last; lo += span) {
    out.push_back(Interval{static_cast<double>(lo), static_cast<double>(lo + span), false});
  }
  out.back().closed_hi = true;
  return out;
}

// Unnormalized Gaussian KDE evaluated on `grid`.
std::vector<double> kde(std::span<const double> sorted, std::span<const double> grid, double h) {
  std::vector<double> density(grid.size(), 0.0);
  const double reach = 8.0 * h;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    auto first = std::lower_bound(sorted.begin(), sorted.end(), x - reach);
    auto last = std::upper_bound(first, sorted.end(), x + reach);
    double sum = 0.0;
    for (auto it = first; it != last; ++it) {
      const double z = (x - *it) / h;
      sum += std::exp(-0.5 * z * z);
    }
    density[i] = sum;
  }
  return density;
}

// Indices of local maxima; a plateau counts once, at its first index.
std::vector<std::size_t> find_peaks(std::span<const double> d) {
  std::vector<std::size_t> peaks;
  const std::size_t n = d.size();
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && d[j + 1] == d[i]) ++j;
    const bool rises = i == 0 || d[i - 1] < d[i];
    const bool falls = j + 1 == n || d[j + 1] < d[i];
    if (rises && falls) peaks.push_back(i);
    i = j + 1;
  }
  return peaks;
}

}  // namespace

double silverman_bandwidth(std::span<const double> sorted) {
  const double n = static_cast<double>(sorted.size());
  double mean = 0.0;
  for (double v : sorted) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : sorted) var += (v - mean) * (v - mean);
  const double sd = n > 1 ? std::sqrt(var / (n - 1)) : 0.0;
  const double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
  double spread = sd;
  if (iqr > 0.0) spread = std::min(sd, iqr / 1.34);
  return 0.9 * spread * std::pow(n, -0.2);
}

std::vector<Interval> discretize(std::span<const double> values, const DiscretizePolicy& policy) {
  if (values.empty()) throw Error(ErrorCode::kTooFewSamples, "no values to discretize");
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "non-finite value");
  }
  std::sort(sorted.begin(), sorted.end());

  if (policy.mode == DiscretizePolicy::Mode::kYear) {
    return year_buckets(sorted, policy.year_span);
  }
  if (sorted.size() < policy.min_samples) {
    throw Error(ErrorCode::kTooFewSamples,
                fmt::format("{} values, need {}", sorted.size(), policy.min_samples));
  }
  const double lo = sorted.front();
  const double hi = sorted.back();
  if (lo == hi) return {Interval{floor_sig6(lo), ceil_sig6(hi), true}};

  const double h = policy.bandwidth > 0.0 ? policy.bandwidth : silverman_bandwidth(sorted);
  const std::size_t g = std::max<std::size_t>(policy.grid_points, 3);
  std::vector<double> grid(g);
  for (std::size_t i = 0; i < g; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(g - 1);
  }
  const std::vector<double> density = kde(sorted, grid, h);
  const std::vector<std::size_t> peaks = find_peaks(density);

  std::vector<double> bounds{floor_sig6(lo)};
  for (std::size_t k = 0; k + 1 < peaks.size(); ++k) {
    auto first = density.begin() + static_cast<std::ptrdiff_t>(peaks[k]);
    auto last = density.begin() + static_cast<std::ptrdiff_t>(peaks[k + 1]) + 1;
    const auto valley = static_cast<std::size_t>(std::min_element(first, last) - density.begin());
    const double cut = round_sig6(grid[valley]);
    if (cut > bounds.back() && cut < hi) bounds.push_back(cut);
  }
  bounds.push_back(ceil_sig6(hi));

  // counts[i] is the population of [bounds[i], bounds[i+1]).
  auto count_all = [&] {
    std::vector<std::size_t> counts(bounds.size() - 1, 0);
    std::size_t idx = 0;
    for (double v : sorted) {
      while (idx + 2 < bounds.size() && v >= bounds[idx + 1]) ++idx;
      ++counts[idx];
    }
    return counts;
  };

  const double min_count = policy.min_fraction * static_cast<double>(sorted.size());
  for (;;) {
    const std::vector<std::size_t> counts = count_all();
    if (counts.size() <= 1) break;
    const auto weakest = static_cast<std::size_t>(
        std::min_element(counts.begin(), counts.end()) - counts.begin());
    if (static_cast<double>(counts[weakest]) >= min_count) break;
    bool merge_left;
    if (weakest == 0) {
      merge_left = false;
    } else if (weakest + 1 == counts.size()) {
      merge_left = true;
    } else {
      merge_left = counts[weakest - 1] >= counts[weakest + 1];
    }
    // Dropping the shared bound merges the two intervals.
    bounds.erase(bounds.begin() + static_cast<std::ptrdiff_t>(merge_left ? weakest : weakest + 1));
  }

  std::vector<Interval> out;
  for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
    out.push_back(Interval{bounds[i], bounds[i + 1], i + 2 == bounds.size()});
  }
  return out;
}

}  // namespace kgprof
