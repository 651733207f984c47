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
#include <numeric>
#include <queue>

#include "sotlab/error.hpp"
#include "sotlab/transport.hpp"
#include "transport_internal.hpp"

namespace sotlab {

Matrix::Matrix(std::size_t r, std::size_t c, std::vector<double> v)
    : rows(r), cols(c), values(std::move(v)) {
  require(values.size() == rows * cols, "matrix data length must equal rows*cols");
}

Matrix cost_matrix(const DiscreteMeasure& source, const DiscreteMeasure& target,
                   const CostSpec& cost) {
  cost.validate();
  require(source.dimension() == target.dimension(), "cost_matrix: measures differ in dimension");
  Matrix c(source.size(), target.size());
  for (std::size_t i = 0; i < source.size(); ++i)
    for (std::size_t j = 0; j < target.size(); ++j)
      c(i, j) = point_cost(cost, source.atom(i), target.atom(j));
  return c;
}

double TransportPlan::marginal_violation() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < pi.rows; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < pi.cols; ++j) row += pi(i, j);
    worst = std::max(worst, std::abs(row - source_weights[i]));
  }
  for (std::size_t j = 0; j < pi.cols; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < pi.rows; ++i) col += pi(i, j);
    worst = std::max(worst, std::abs(col - target_weights[j]));
  }
  return worst;
}

std::optional<std::vector<std::size_t>> TransportPlan::induced_map(double tolerance) const {
  std::vector<std::size_t> map(pi.rows);
  for (std::size_t i = 0; i < pi.rows; ++i) {
    std::size_t hits = 0;
    for (std::size_t j = 0; j < pi.cols; ++j) {
      if (pi(i, j) > tolerance) {
        map[i] = j;
        ++hits;
      }
    }
    if (hits != 1) return std::nullopt;
  }
  return map;
}

namespace internal {

void check_transport_problem(std::span<const double> supply, std::span<const double> demand,
                             const Matrix& cost) {
  require(!supply.empty() && !demand.empty(), "transport problem needs nonempty marginals");
  require(cost.rows == supply.size() && cost.cols == demand.size(),
          "cost matrix shape does not match the marginals");
  double s = 0.0;
  double d = 0.0;
  for (double w : supply) {
    require(std::isfinite(w) && w >= 0.0, "supply weights must be finite and >= 0");
    s += w;
  }
  for (double w : demand) {
    require(std::isfinite(w) && w >= 0.0, "demand weights must be finite and >= 0");
    d += w;
  }
  if (std::abs(s - d) > 1e-9)
    throw ValidationError("infeasible transport: supply totals " + std::to_string(s) +
                          " but demand totals " + std::to_string(d));
  for (double c : cost.values) require(std::isfinite(c), "cost matrix entries must be finite");
}

TransportPlan make_plan(Matrix pi, std::span<const double> supply,
                        std::span<const double> demand, const Matrix& cost) {
  TransportPlan plan;
  double total = 0.0;
  for (std::size_t k = 0; k < pi.values.size(); ++k) total += pi.values[k] * cost.values[k];
  plan.pi = std::move(pi);
  plan.total_cost = total;
  plan.source_weights.assign(supply.begin(), supply.end());
  plan.target_weights.assign(demand.begin(), demand.end());
  return plan;
}

void attach_atoms(TransportPlan& plan, const DiscreteMeasure& source,
                  const DiscreteMeasure& target) {
  plan.source_atoms = source.atoms();
  plan.target_atoms = target.atoms();
}

int lexicographic_compare(const Matrix& a, const Matrix& b, double tolerance) {
  for (std::size_t k = 0; k < a.values.size(); ++k) {
    const double diff = a.values[k] - b.values[k];
    if (diff < -tolerance) return -1;
    if (diff > tolerance) return 1;
  }
  return 0;
}

}  // namespace internal

namespace {

constexpr double kFlowSnap = 1e-14;

/// Bipartite spanning-tree basis of the transportation simplex.
class NetworkSimplex {
 public:
  NetworkSimplex(std::span<const double> supply, std::span<const double> demand,
                 const Matrix& cost)
      : n_(supply.size()),
        m_(demand.size()),
        cost_(cost),
        flow_(n_, m_),
        basic_(n_ * m_, false),
        u_(n_),
        v_(m_) {
    double scale = 1.0;
    for (double c : cost.values) scale = std::max(scale, std::abs(c));
    tolerance_ = 1e-12 * scale;
    northwest_corner(supply, demand);
  }

  void solve() {
    const std::size_t max_pivots = 50 * (n_ + m_) * n_ * m_ + 1000;
    for (std::size_t pivot = 0;; ++pivot) {
      if (pivot > max_pivots) throw NumericalError("network simplex exceeded its pivot budget");
      compute_potentials();
      const std::size_t entering = find_entering();
      if (entering == kNone) return;
      pivot_on(entering);
    }
  }

  const Matrix& flow() const { return flow_; }
  double reduced_cost(std::size_t i, std::size_t j) const { return cost_(i, j) - u_[i] - v_[j]; }
  double scale_tolerance() const { return tolerance_; }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  void northwest_corner(std::span<const double> supply, std::span<const double> demand) {
    std::vector<double> s(supply.begin(), supply.end());
    std::vector<double> d(demand.begin(), demand.end());
    std::size_t i = 0;
    std::size_t j = 0;
    while (true) {
      const double x = std::min(s[i], d[j]);
      flow_(i, j) = x;
      basic_[i * m_ + j] = true;
      s[i] -= x;
      d[j] -= x;
      if (i == n_ - 1 && j == m_ - 1) break;
      if (i == n_ - 1) {
        ++j;
      } else if (j == m_ - 1) {
        ++i;
      } else if (s[i] <= d[j]) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  std::vector<std::vector<std::size_t>> tree_adjacency() const {
    std::vector<std::vector<std::size_t>> adj(n_ + m_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < m_; ++j)
        if (basic_[i * m_ + j]) {
          adj[i].push_back(n_ + j);
          adj[n_ + j].push_back(i);
        }
    return adj;
  }

  void compute_potentials() {
    const auto adj = tree_adjacency();
    std::vector<bool> seen(n_ + m_, false);
    std::queue<std::size_t> frontier;
    u_[0] = 0.0;
    seen[0] = true;
    frontier.push(0);
    while (!frontier.empty()) {
      const std::size_t node = frontier.front();
      frontier.pop();
      for (std::size_t next : adj[node]) {
        if (seen[next]) continue;
        seen[next] = true;
        if (node < n_) {
          v_[next - n_] = cost_(node, next - n_) - u_[node];
        } else {
          u_[next] = cost_(next, node - n_) - v_[node - n_];
        }
        frontier.push(next);
      }
    }
  }

  std::size_t find_entering() const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < m_; ++j)
        if (!basic_[i * m_ + j] && reduced_cost(i, j) < -tolerance_) return i * m_ + j;
    return kNone;
  }

  void pivot_on(std::size_t entering) {
    const std::size_t ei = entering / m_;
    const std::size_t ej = entering % m_;
    // Tree path from column node ej back to row node ei.
    const auto adj = tree_adjacency();
    std::vector<std::size_t> parent(n_ + m_, kNone);
    std::queue<std::size_t> frontier;
    parent[ei] = ei;
    frontier.push(ei);
    while (!frontier.empty()) {
      const std::size_t node = frontier.front();
      frontier.pop();
      for (std::size_t next : adj[node]) {
        if (parent[next] != kNone) continue;
        parent[next] = node;
        frontier.push(next);
      }
    }
    std::vector<std::size_t> cycle;  // cells after the entering one, alternating -,+,-,...
    for (std::size_t node = n_ + ej; node != ei; node = parent[node]) {
      const std::size_t up = parent[node];
      const std::size_t row = node < n_ ? node : up;
      const std::size_t col = node < n_ ? up - n_ : node - n_;
      cycle.push_back(row * m_ + col);
    }
    double theta = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < cycle.size(); k += 2) theta = std::min(theta, flow_.values[cycle[k]]);
    std::size_t leaving = kNone;
    for (std::size_t k = 0; k < cycle.size(); k += 2) {
      if (flow_.values[cycle[k]] <= theta + kFlowSnap && cycle[k] < leaving) leaving = cycle[k];
    }
    flow_.values[entering] += theta;
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      double& x = flow_.values[cycle[k]];
      x += (k % 2 == 0) ? -theta : theta;
      if (x < kFlowSnap) x = 0.0;
    }
    flow_.values[leaving] = 0.0;
    basic_[leaving] = false;
    basic_[entering] = true;
  }

  std::size_t n_;
  std::size_t m_;
  const Matrix& cost_;
  Matrix flow_;
  std::vector<bool> basic_;
  std::vector<double> u_;
  std::vector<double> v_;
  double tolerance_ = 0.0;
};

/// Edmonds-Karp max flow from rows (capacity `supply`) to columns (capacity
/// `demand`) through the allowed cells.
double bipartite_max_flow(const std::vector<double>& supply, const std::vector<double>& demand,
                          const std::vector<std::pair<std::size_t, std::size_t>>& cells) {
  const std::size_t n = supply.size();
  const std::size_t m = demand.size();
  const std::size_t nodes = n + m + 2;
  const std::size_t src = n + m;
  const std::size_t sink = n + m + 1;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> cap(nodes * nodes, 0.0);
  for (std::size_t i = 0; i < n; ++i) cap[src * nodes + i] = supply[i];
  for (std::size_t j = 0; j < m; ++j) cap[(n + j) * nodes + sink] = demand[j];
  for (const auto& [i, j] : cells) cap[i * nodes + n + j] = inf;
  double total = 0.0;
  while (true) {
    std::vector<std::size_t> parent(nodes, nodes);
    parent[src] = src;
    std::queue<std::size_t> frontier;
    frontier.push(src);
    while (!frontier.empty() && parent[sink] == nodes) {
      const std::size_t a = frontier.front();
      frontier.pop();
      for (std::size_t b = 0; b < nodes; ++b) {
        if (parent[b] == nodes && cap[a * nodes + b] > kFlowSnap) {
          parent[b] = a;
          frontier.push(b);
        }
      }
    }
    if (parent[sink] == nodes) break;
    double push = inf;
    for (std::size_t b = sink; b != src; b = parent[b]) push = std::min(push, cap[parent[b] * nodes + b]);
    for (std::size_t b = sink; b != src; b = parent[b]) {
      cap[parent[b] * nodes + b] -= push;
      cap[b * nodes + parent[b]] += push;
    }
    total += push;
  }
  return total;
}

/// Lexicographically smallest plan among those supported on `tight` cells.
Matrix lexicographic_minimum(std::span<const double> supply, std::span<const double> demand,
                             const std::vector<bool>& tight, std::size_t n, std::size_t m) {
  std::vector<double> s(supply.begin(), supply.end());
  std::vector<double> d(demand.begin(), demand.end());
  Matrix pi(n, m);
  for (std::size_t cell = 0; cell < n * m; ++cell) {
    if (!tight[cell]) continue;
    const std::size_t i = cell / m;
    const std::size_t j = cell % m;
    const double cap = std::min(s[i], d[j]);
    if (cap <= kFlowSnap) continue;
    std::vector<std::pair<std::size_t, std::size_t>> later;
    for (std::size_t other = cell + 1; other < n * m; ++other)
      if (tight[other]) later.emplace_back(other / m, other % m);
    const double remaining = std::accumulate(s.begin(), s.end(), 0.0);
    double x = remaining - bipartite_max_flow(s, d, later);
    x = std::clamp(x, 0.0, cap);
    if (x <= kFlowSnap) continue;
    pi(i, j) = x;
    s[i] = std::max(0.0, s[i] - x);
    d[j] = std::max(0.0, d[j] - x);
  }
  return pi;
}

}  // namespace

TransportPlan solve_exact(std::span<const double> supply, std::span<const double> demand,
                          const Matrix& cost) {
  internal::check_transport_problem(supply, demand, cost);
  NetworkSimplex simplex(supply, demand, cost);
  simplex.solve();
  const std::size_t n = supply.size();
  const std::size_t m = demand.size();
  // Complementary slackness: every optimal plan lives on zero-reduced-cost
  // cells of the final potentials, so the lexicographic search stays optimal.
  std::vector<bool> tight(n * m);
  const double tight_tolerance = 1e2 * simplex.scale_tolerance();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      tight[i * m + j] = simplex.reduced_cost(i, j) <= tight_tolerance;
  Matrix pi = lexicographic_minimum(supply, demand, tight, n, m);
  return internal::make_plan(std::move(pi), supply, demand, cost);
}

TransportPlan solve_exact(const DiscreteMeasure& source, const DiscreteMeasure& target,
                          const Matrix& cost) {
  TransportPlan plan = solve_exact(source.weights(), target.weights(), cost);
  internal::attach_atoms(plan, source, target);
  return plan;
}

TransportPlan solve_exact(const DiscreteMeasure& source, const DiscreteMeasure& target,
                          const CostSpec& cost) {
  return solve_exact(source, target, cost_matrix(source, target, cost));
}

}  // namespace sotlab
