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

#ifndef SOTLAB_TRANSPORT_HPP_
#define SOTLAB_TRANSPORT_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sotlab/costs.hpp"
#include "sotlab/measure.hpp"

namespace sotlab {

/// Dense row-major matrix; rows index source atoms, columns target atoms.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), values(r * c, fill) {}
  Matrix(std::size_t r, std::size_t c, std::vector<double> v);

  double& operator()(std::size_t i, std::size_t j) { return values[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

Matrix cost_matrix(const DiscreteMeasure& source, const DiscreteMeasure& target,
                   const CostSpec& cost);

/// Coupling between a source and a target measure.
///
/// Row sums equal the source weights and column sums the target weights.
/// Atoms are carried along when the plan came from measures, so maps can be
/// read back in terms of points.
struct TransportPlan {
  Matrix pi;
  double total_cost = 0.0;
  std::vector<double> source_weights;
  std::vector<double> target_weights;
  std::vector<Point> source_atoms;
  std::vector<Point> target_atoms;

  std::size_t rows() const noexcept { return pi.rows; }
  std::size_t cols() const noexcept { return pi.cols; }

  /// Largest absolute deviation of any row or column sum from its marginal.
  double marginal_violation() const;

  /// Target index for each source row when every row has exactly one entry
  /// above `tolerance`; std::nullopt for a split (non-Monge) plan.
  std::optional<std::vector<std::size_t>> induced_map(double tolerance = 1e-12) const;
};

/// Exact Kantorovich solution by the transportation (network) simplex with
/// Bland's rule, followed by a lexicographic pass that returns the
/// lexicographically smallest optimal vertex (row-major order). Rejects
/// supply/demand totals that differ by more than 1e-9.
TransportPlan solve_exact(std::span<const double> supply, std::span<const double> demand,
                          const Matrix& cost);
TransportPlan solve_exact(const DiscreteMeasure& source, const DiscreteMeasure& target,
                          const Matrix& cost);
TransportPlan solve_exact(const DiscreteMeasure& source, const DiscreteMeasure& target,
                          const CostSpec& cost);

/// Brute-force oracle: enumerates every spanning-tree basis of the
/// transportation polytope, keeps feasible ones and reduces by
/// (cost, lexicographic plan). Limited to rows + cols <= 10.
TransportPlan enumerate_oracle(std::span<const double> supply, std::span<const double> demand,
                               const Matrix& cost);
TransportPlan enumerate_oracle(const DiscreteMeasure& source, const DiscreteMeasure& target,
                               const Matrix& cost);
TransportPlan enumerate_oracle(const DiscreteMeasure& source, const DiscreteMeasure& target,
                               const CostSpec& cost);

inline constexpr std::size_t kOracleMaxAtoms = 10;

struct SinkhornOptions {
  double epsilon = 0.1;
  int max_iterations = 100000;
  double tolerance = 1e-9;  ///< l1 row-marginal violation at which to stop
};

struct SinkhornResult {
  TransportPlan plan;
  bool converged = false;
  int iterations = 0;
  double marginal_violation = 0.0;  ///< l1 over rows after the last update
};

/// Entropic OT in the log domain. On non-convergence the partial plan is
/// returned with `converged == false`; the caller decides whether to fail.
SinkhornResult sinkhorn(const DiscreteMeasure& source, const DiscreteMeasure& target,
                        const Matrix& cost, const SinkhornOptions& options);
SinkhornResult sinkhorn(std::span<const double> supply, std::span<const double> demand,
                        const Matrix& cost, const SinkhornOptions& options);

/// V-statistic energy distance 2E|u-v| - E|u-u'| - E|v-v'| between two
/// empirical samples of equal dimension.
double energy_distance(std::span<const Point> a, std::span<const Point> b);

/// Energy distance and its gradient with respect to each point of `a`.
/// Coincident pairs contribute a zero subgradient.
double energy_distance_grad(std::span<const Point> a, std::span<const Point> b,
                            std::vector<Point>& grad_a);

}  // namespace sotlab

#endif  // SOTLAB_TRANSPORT_HPP_
