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

#include "sotlab/example1.hpp"

#include <cmath>
#include <cstdio>

#include "sotlab/error.hpp"

namespace sotlab {

namespace {

Point add(const Point& u, const Point& v) {
  Point out(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = u[k] + v[k];
  return out;
}

double squared_distance(const Point& u, const Point& v) {
  double sq = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) sq += (u[k] - v[k]) * (u[k] - v[k]);
  return sq;
}

long find_atom(const std::vector<Point>& atoms, const Point& p) {
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    if (atoms[k].size() != p.size()) continue;
    bool match = true;
    for (std::size_t d = 0; d < p.size() && match; ++d) match = std::abs(atoms[k][d] - p[d]) <= 1e-12;
    if (match) return static_cast<long>(k);
  }
  return -1;
}

}  // namespace

DiscreteMeasure Example1Instance::measure_x() const {
  return DiscreteMeasure({x[0], x[1]}, {p(0), p(1)});
}

DiscreteMeasure Example1Instance::measure_n() const {
  return DiscreteMeasure({n[0], n[1]}, {ptilde(0), ptilde(1)});
}

DiscreteMeasure Example1Instance::measure_y() const {
  return DiscreteMeasure({y[0], y[1], y[2], y[3]},
                         {joint[0][0], joint[0][1], joint[1][0], joint[1][1]});
}

std::vector<std::string> Example1Instance::warnings() const {
  std::vector<std::string> out;
  char buf[160];
  if (!l2_condition) {
    std::snprintf(buf, sizeof buf, "a^2 > m b^2 violated: a^2 = %g, m b^2 = %g", a * a,
                  m * b * b);
    out.emplace_back(buf);
  }
  for (const auto& c : lq_conditions) {
    if (!c.holds) {
      std::snprintf(buf, sizeof buf, "a^q < m b^q violated for q = %g: a^q = %g, m b^q = %g",
                    c.q, std::pow(a, c.q), m * std::pow(b, c.q));
      out.emplace_back(buf);
    }
  }
  return out;
}

Example1Instance build_example1(double a, double b, int m, double p1, double ptilde1,
                                const std::vector<double>& q_values, Example1Variant variant) {
  require(std::isfinite(a) && a > 0.0, "example1: a must be > 0");
  require(std::isfinite(b) && b > 0.0, "example1: b must be > 0");
  require(m >= 1, "example1: m must be a positive integer");
  require(p1 >= 0.0 && p1 <= 1.0, "example1: p1 must lie in [0, 1]");
  require(ptilde1 >= 0.0 && ptilde1 <= 1.0, "example1: ptilde1 must lie in [0, 1]");

  Example1Instance inst;
  inst.a = a;
  inst.b = b;
  inst.m = m;
  inst.p1 = p1;
  inst.ptilde1 = ptilde1;
  inst.variant = variant;

  const std::size_t dim = static_cast<std::size_t>(m) + 1;
  inst.x[0] = Point(dim, b);
  inst.x[0][0] = -a;
  inst.x[1] = Point(dim, -b);
  inst.x[1][0] = variant == Example1Variant::kCorrected ? a : -a;
  inst.n[0] = Point(dim, 0.0);
  inst.n[0][0] = -2.0 * a;
  inst.n[1] = Point(dim, 0.0);
  inst.n[1][0] = 2.0 * a;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      inst.y[2 * i + j] = add(inst.x[i], inst.n[j]);
      inst.joint[i][j] = inst.p(i) * inst.ptilde(j);
    }
  }

  inst.l2_condition = a * a > m * b * b;
  for (double q : q_values) {
    require(q >= 0.0 && q <= 1.0, "example1: lq condition exponents must lie in [0, 1]");
    inst.lq_conditions.push_back({q, std::pow(a, q) < m * std::pow(b, q)});
  }
  return inst;
}

double map_distortion(const TransportPlan& plan, const Example1Instance& instance) {
  require(plan.source_atoms.size() == plan.rows() && plan.target_atoms.size() == plan.cols(),
          "map_distortion: plan does not carry its atoms");
  for (int i = 0; i < 2; ++i) {
    if (instance.p(i) > 0.0 && find_atom(plan.target_atoms, instance.x[i]) < 0)
      throw ValidationError("map_distortion: x" + std::to_string(i + 1) +
                            " is not a target atom of the plan");
  }
  double distortion = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double prob = instance.joint[i][j];
      if (prob == 0.0) continue;
      const long row = find_atom(plan.source_atoms, instance.y[2 * i + j]);
      if (row < 0)
        throw ValidationError("map_distortion: y" + std::to_string(2 * i + j + 1) +
                              " is not a source atom of the plan");
      const auto r = static_cast<std::size_t>(row);
      const double mass = plan.source_weights[r];
      require(mass > 0.0, "map_distortion: plan row has zero mass");
      double expected = 0.0;
      for (std::size_t col = 0; col < plan.cols(); ++col) {
        const double conditional = plan.pi(r, col) / mass;
        if (conditional == 0.0) continue;
        expected += conditional * squared_distance(plan.target_atoms[col], instance.x[i]);
      }
      distortion += prob * expected;
    }
  }
  return distortion;
}

}  // namespace sotlab
