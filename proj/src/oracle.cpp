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
#include <vector>

#include "sotlab/error.hpp"
#include "sotlab/transport.hpp"
#include "transport_internal.hpp"

namespace sotlab {

namespace {

constexpr double kFeasibility = 1e-12;

/// Enumerates spanning trees of the complete bipartite graph rows x cols,
/// cell by cell in row-major order, with a rollback union-find.
class BasisEnumerator {
 public:
  BasisEnumerator(std::span<const double> supply, std::span<const double> demand,
                  const Matrix& cost)
      : n_(supply.size()),
        m_(demand.size()),
        supply_(supply.begin(), supply.end()),
        demand_(demand.begin(), demand.end()),
        cost_(cost),
        parent_(n_ + m_),
        rank_(n_ + m_, 0) {
    for (std::size_t k = 0; k < parent_.size(); ++k) parent_[k] = k;
    double scale = 1.0;
    for (double c : cost.values) scale = std::max(scale, std::abs(c));
    cost_tolerance_ = 1e-12 * scale;
  }

  Matrix run() {
    recurse(0);
    if (!have_best_) throw NumericalError("oracle found no feasible basis");
    return best_;
  }

 private:
  std::size_t find(std::size_t x) const {
    while (parent_[x] != x) x = parent_[x];
    return x;
  }

  void recurse(std::size_t cell) {
    const std::size_t needed = n_ + m_ - 1;
    if (chosen_.size() == needed) {
      evaluate();
      return;
    }
    if (cell == n_ * m_ || chosen_.size() + (n_ * m_ - cell) < needed) return;
    const std::size_t a = find(cell / m_);
    const std::size_t b = find(n_ + cell % m_);
    if (a != b) {
      // Union by rank without path compression so the merge can be undone.
      std::size_t root = a;
      std::size_t child = b;
      if (rank_[root] < rank_[child]) std::swap(root, child);
      const bool bumped = rank_[root] == rank_[child];
      parent_[child] = root;
      if (bumped) ++rank_[root];
      chosen_.push_back(cell);
      recurse(cell + 1);
      chosen_.pop_back();
      parent_[child] = child;
      if (bumped) --rank_[root];
    }
    recurse(cell + 1);
  }

  void evaluate() {
    const std::size_t nodes = n_ + m_;
    std::vector<std::vector<std::size_t>> incident(nodes);
    for (std::size_t e = 0; e < chosen_.size(); ++e) {
      incident[chosen_[e] / m_].push_back(e);
      incident[n_ + chosen_[e] % m_].push_back(e);
    }
    std::vector<std::size_t> degree(nodes);
    for (std::size_t v = 0; v < nodes; ++v) degree[v] = incident[v].size();
    std::vector<bool> used(chosen_.size(), false);
    std::vector<double> residual(nodes);
    for (std::size_t i = 0; i < n_; ++i) residual[i] = supply_[i];
    for (std::size_t j = 0; j < m_; ++j) residual[n_ + j] = demand_[j];
    std::vector<std::size_t> leaves;
    for (std::size_t v = 0; v < nodes; ++v)
      if (degree[v] == 1) leaves.push_back(v);
    Matrix pi(n_, m_);
    while (!leaves.empty()) {
      const std::size_t v = leaves.back();
      leaves.pop_back();
      if (degree[v] != 1) continue;
      std::size_t edge = 0;
      for (std::size_t e : incident[v])
        if (!used[e]) edge = e;
      const std::size_t cell = chosen_[edge];
      const std::size_t row = cell / m_;
      const std::size_t col = n_ + cell % m_;
      const std::size_t other = v == row ? col : row;
      const double x = residual[v];
      if (x < -kFeasibility) return;
      pi.values[cell] = std::max(0.0, x);
      residual[v] -= x;
      residual[other] -= x;
      used[edge] = true;
      --degree[v];
      --degree[other];
      if (degree[other] == 1) leaves.push_back(other);
    }
    for (double r : residual)
      if (std::abs(r) > 1e-9) return;
    double total = 0.0;
    for (std::size_t k = 0; k < pi.values.size(); ++k) total += pi.values[k] * cost_.values[k];
    if (!have_best_ || total < best_cost_ - cost_tolerance_ ||
        (total <= best_cost_ + cost_tolerance_ &&
         internal::lexicographic_compare(pi, best_, kFeasibility) < 0)) {
      have_best_ = true;
      best_cost_ = total;
      best_ = std::move(pi);
    }
  }

  std::size_t n_;
  std::size_t m_;
  std::vector<double> supply_;
  std::vector<double> demand_;
  const Matrix& cost_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> rank_;
  std::vector<std::size_t> chosen_;
  double cost_tolerance_ = 0.0;
  bool have_best_ = false;
  double best_cost_ = 0.0;
  Matrix best_;
};

}  // namespace

TransportPlan enumerate_oracle(std::span<const double> supply, std::span<const double> demand,
                               const Matrix& cost) {
  internal::check_transport_problem(supply, demand, cost);
  if (supply.size() + demand.size() > kOracleMaxAtoms) {
    throw ValidationError("enumerate_oracle: instance has " +
                          std::to_string(supply.size() + demand.size()) +
                          " atoms, the limit is " + std::to_string(kOracleMaxAtoms));
  }
  Matrix pi = BasisEnumerator(supply, demand, cost).run();
  return internal::make_plan(std::move(pi), supply, demand, cost);
}

TransportPlan enumerate_oracle(const DiscreteMeasure& source, const DiscreteMeasure& target,
                               const Matrix& cost) {
  TransportPlan plan = enumerate_oracle(source.weights(), target.weights(), cost);
  internal::attach_atoms(plan, source, target);
  return plan;
}

TransportPlan enumerate_oracle(const DiscreteMeasure& source, const DiscreteMeasure& target,
                               const CostSpec& cost) {
  return enumerate_oracle(source, target, cost_matrix(source, target, cost));
}

}  // namespace sotlab
