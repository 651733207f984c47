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

#ifndef SOTLAB_EXAMPLE1_HPP_
#define SOTLAB_EXAMPLE1_HPP_

#include <array>
#include <string>
#include <vector>

#include "sotlab/measure.hpp"
#include "sotlab/transport.hpp"

namespace sotlab {

/// Which sign convention to use for the second source atom.
enum class Example1Variant {
  kCorrected,  ///< x2 = [a, -b, ..., -b]; consistent with the listed y atoms
  kLiteral,    ///< x2 = [-a, -b, ..., -b]; y atoms recomputed as x_i + n_j
};

/// Whether a^q < m b^q holds for one exponent q.
struct SparsityCondition {
  double q = 0.0;
  bool holds = false;
};

/// Two-point clean source, two-point sparse degradation and the induced
/// four-point degraded measure in R^(m+1).
struct Example1Instance {
  double a = 1.0;
  double b = 0.1;
  int m = 11;
  double p1 = 0.5;
  double ptilde1 = 0.5;
  Example1Variant variant = Example1Variant::kCorrected;

  std::array<Point, 2> x;      ///< clean atoms x1, x2
  std::array<Point, 2> n;      ///< degradation atoms n1 = -2a e0, n2 = 2a e0
  std::array<Point, 4> y;      ///< y1 = x1+n1, y2 = x1+n2, y3 = x2+n1, y4 = x2+n2
  std::array<std::array<double, 2>, 2> joint{};  ///< P(X = x_i, N = n_j)

  bool l2_condition = false;  ///< a^2 > m b^2
  std::vector<SparsityCondition> lq_conditions;

  double p(int i) const { return i == 0 ? p1 : 1.0 - p1; }
  double ptilde(int j) const { return j == 0 ? ptilde1 : 1.0 - ptilde1; }

  DiscreteMeasure measure_x() const;
  DiscreteMeasure measure_n() const;
  /// Pushforward of the joint; zero-probability y atoms are dropped.
  DiscreteMeasure measure_y() const;

  /// Human-readable list of violated conditions; empty when all hold.
  std::vector<std::string> warnings() const;
};

/// Builds the instance and evaluates the two conditions for each q in
/// `q_values`. Violations become warnings, not errors.
Example1Instance build_example1(double a, double b, int m, double p1, double ptilde1,
                                const std::vector<double>& q_values = {0.0, 0.5, 1.0},
                                Example1Variant variant = Example1Variant::kCorrected);

/// E||f(Y) - X||_2^2 under the instance's true joint, where f(y) follows the
/// plan's conditional law on each source row. Plan rows must carry atoms that
/// match the instance's y support, and columns its x support.
double map_distortion(const TransportPlan& plan, const Example1Instance& instance);

}  // namespace sotlab

#endif  // SOTLAB_EXAMPLE1_HPP_
