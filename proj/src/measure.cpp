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

#include "sotlab/measure.hpp"

#include <cmath>
#include <numeric>

#include "sotlab/error.hpp"

namespace sotlab {

DiscreteMeasure::DiscreteMeasure(std::vector<Point> atoms, std::vector<double> weights) {
  require(!atoms.empty(), "measure needs at least one atom");
  require(atoms.size() == weights.size(), "measure atoms and weights differ in length");
  const std::size_t dim = atoms.front().size();
  double total = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    require(atoms[i].size() == dim, "measure atoms must share one dimension");
    for (double x : atoms[i]) require(std::isfinite(x), "measure atom coordinates must be finite");
    require(std::isfinite(weights[i]) && weights[i] >= 0.0, "measure weights must be finite and >= 0");
    total += weights[i];
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw ValidationError("measure weights sum to " + std::to_string(total) + ", expected 1");

  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (weights[i] == 0.0) continue;
    bool merged = false;
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
      if (atoms_[k] == atoms[i]) {
        weights_[k] += weights[i];
        merged = true;
        break;
      }
    }
    if (!merged) {
      atoms_.push_back(std::move(atoms[i]));
      weights_.push_back(weights[i]);
    }
  }
  const double kept = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  for (double& w : weights_) w /= kept;
}

DiscreteMeasure DiscreteMeasure::uniform(std::vector<Point> atoms) {
  require(!atoms.empty(), "measure needs at least one atom");
  std::vector<double> weights(atoms.size(), 1.0 / static_cast<double>(atoms.size()));
  return DiscreteMeasure(std::move(atoms), std::move(weights));
}

long DiscreteMeasure::find(const Point& p, double tolerance) const {
  for (std::size_t k = 0; k < atoms_.size(); ++k) {
    if (atoms_[k].size() != p.size()) continue;
    bool match = true;
    for (std::size_t d = 0; d < p.size() && match; ++d)
      match = std::abs(atoms_[k][d] - p[d]) <= tolerance;
    if (match) return static_cast<long>(k);
  }
  return -1;
}

}  // namespace sotlab
