// Copyright 2026 The sotlab Authors
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

#include <cmath>

#include "sotlab/error.hpp"
#include "sotlab/transport.hpp"

namespace sotlab {

namespace {

double distance(const Point& a, const Point& b) {
  double sq = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) sq += (a[d] - b[d]) * (a[d] - b[d]);
  return std::sqrt(sq);
}

void check_samples(std::span<const Point> a, std::span<const Point> b) {
  require(!a.empty() && !b.empty(), "energy_distance: sample sets must be nonempty");
  const std::size_t dim = a.front().size();
  for (const Point& p : a) require(p.size() == dim, "energy_distance: dimension mismatch");
  for (const Point& p : b) require(p.size() == dim, "energy_distance: dimension mismatch");
}

double mean_pairwise(std::span<const Point> a, std::span<const Point> b) {
  double sum = 0.0;
  for (const Point& p : a)
    for (const Point& q : b) sum += distance(p, q);
  return sum / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

/// Accumulates scale * sum_j unit(a_i - b_j) into grad[i].
void accumulate_units(std::span<const Point> a, std::span<const Point> b, double scale,
                      std::vector<Point>& grad) {
  const std::size_t dim = a.front().size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (const Point& q : b) {
      const double dist = distance(a[i], q);
      if (dist == 0.0) continue;
      const double k = scale / dist;
      for (std::size_t d = 0; d < dim; ++d) grad[i][d] += k * (a[i][d] - q[d]);
    }
  }
}

}  // namespace

double energy_distance(std::span<const Point> a, std::span<const Point> b) {
  check_samples(a, b);
  const double value = 2.0 * mean_pairwise(a, b) - mean_pairwise(a, a) - mean_pairwise(b, b);
  // The V-statistic is a squared MMD with a conditionally negative definite
  // kernel, so only rounding can push it below zero.
  return value < 0.0 ? 0.0 : value;
}

double energy_distance_grad(std::span<const Point> a, std::span<const Point> b,
                            std::vector<Point>& grad_a) {
  check_samples(a, b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  grad_a.assign(a.size(), Point(a.front().size(), 0.0));
  accumulate_units(a, b, 2.0 / (na * nb), grad_a);
  accumulate_units(a, a, -2.0 / (na * na), grad_a);
  return 2.0 * mean_pairwise(a, b) - mean_pairwise(a, a) - mean_pairwise(b, b);
}

}  // namespace sotlab
