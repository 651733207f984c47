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

#ifndef SOTLAB_MEASURE_HPP_
#define SOTLAB_MEASURE_HPP_

#include <cstddef>
#include <vector>

namespace sotlab {

using Point = std::vector<double>;

/// Finite-support probability measure on R^d.
///
/// Construction drops zero-weight atoms, merges exactly equal atoms (keeping
/// the first occurrence's position) and rescales weights to sum to one.
/// Weights whose total is more than 1e-9 away from one are rejected.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  DiscreteMeasure(std::vector<Point> atoms, std::vector<double> weights);

  /// Weight 1/n per listed atom; repeated atoms accumulate weight.
  static DiscreteMeasure uniform(std::vector<Point> atoms);

  std::size_t size() const noexcept { return atoms_.size(); }
  std::size_t dimension() const noexcept { return atoms_.empty() ? 0 : atoms_.front().size(); }
  const std::vector<Point>& atoms() const noexcept { return atoms_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const Point& atom(std::size_t i) const { return atoms_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }

  /// Index of the atom within `tolerance` (max-abs) of `p`, or -1.
  long find(const Point& p, double tolerance = 1e-12) const;

 private:
  std::vector<Point> atoms_;
  std::vector<double> weights_;
};

}  // namespace sotlab

#endif  // SOTLAB_MEASURE_HPP_
