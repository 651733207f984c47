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

#include <algorithm>
#include <cmath>
#include <limits>

#include "sotlab/error.hpp"
#include "sotlab/transport.hpp"
#include "transport_internal.hpp"

namespace sotlab {

namespace {

constexpr int kStageSweeps = 20;

double log_sum_exp(const std::vector<double>& terms) {
  double peak = -std::numeric_limits<double>::infinity();
  for (double t : terms) peak = std::max(peak, t);
  if (!std::isfinite(peak)) return peak;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - peak);
  return peak + std::log(sum);
}

}  // namespace

SinkhornResult sinkhorn(std::span<const double> supply, std::span<const double> demand,
                        const Matrix& cost, const SinkhornOptions& options) {
  internal::check_transport_problem(supply, demand, cost);
  require(std::isfinite(options.epsilon) && options.epsilon > 0.0, "sinkhorn: epsilon must be > 0");
  require(options.max_iterations > 0, "sinkhorn: max_iterations must be positive");
  require(options.tolerance > 0.0, "sinkhorn: tolerance must be > 0");
  for (double w : supply) require(w > 0.0, "sinkhorn: zero-weight source atoms must be dropped");
  for (double w : demand) require(w > 0.0, "sinkhorn: zero-weight target atoms must be dropped");

  const std::size_t n = supply.size();
  const std::size_t m = demand.size();
  const double eps = options.epsilon;
  std::vector<double> f(n, 0.0);
  std::vector<double> g(m, 0.0);
  std::vector<double> log_a(n);
  std::vector<double> log_b(m);
  for (std::size_t i = 0; i < n; ++i) log_a[i] = std::log(supply[i]);
  for (std::size_t j = 0; j < m; ++j) log_b[j] = std::log(demand[j]);

  SinkhornResult result;
  std::vector<double> row_terms(m);
  std::vector<double> col_terms(n);
  auto sweep = [&](double e) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) row_terms[j] = (g[j] - cost(i, j)) / e;
      f[i] = e * (log_a[i] - log_sum_exp(row_terms));
    }
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t i = 0; i < n; ++i) col_terms[i] = (f[i] - cost(i, j)) / e;
      g[j] = e * (log_b[j] - log_sum_exp(col_terms));
    }
  };

  // Warm start: anneal from the cost range down to eps, halving each stage.
  double spread = 0.0;
  for (double c : cost.values) spread = std::max(spread, std::abs(c));
  int iteration = 0;
  for (double stage = spread; stage > 2.0 * eps && iteration < options.max_iterations;
       stage *= 0.5) {
    for (int k = 0; k < kStageSweeps && iteration < options.max_iterations; ++k, ++iteration)
      sweep(stage);
  }

  double violation = std::numeric_limits<double>::infinity();
  while (iteration < options.max_iterations) {
    ++iteration;
    sweep(eps);
    // Columns are exact after the g-update; measure the row side.
    violation = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < m; ++j) row += std::exp((f[i] + g[j] - cost(i, j)) / eps);
      violation += std::abs(row - supply[i]);
    }
    if (!std::isfinite(violation)) break;
    if (violation < options.tolerance) {
      result.converged = true;
      break;
    }
  }

  Matrix pi(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) pi(i, j) = std::exp((f[i] + g[j] - cost(i, j)) / eps);
  result.plan = internal::make_plan(std::move(pi), supply, demand, cost);
  result.iterations = iteration;
  result.marginal_violation = violation;
  return result;
}

SinkhornResult sinkhorn(const DiscreteMeasure& source, const DiscreteMeasure& target,
                        const Matrix& cost, const SinkhornOptions& options) {
  SinkhornResult result = sinkhorn(source.weights(), target.weights(), cost, options);
  internal::attach_atoms(result.plan, source, target);
  return result;
}

}  // namespace sotlab
