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
#include <random>

#include "doctest.h"
#include "sotlab/error.hpp"
#include "sotlab/example1.hpp"

using namespace sotlab;

namespace {

using Map = std::array<int, 4>;

constexpr Map kL2Plan{0, 1, 0, 1};
constexpr Map kSparsePlan{0, 0, 1, 1};

double sq(const Point& u, const Point& v) {
  double s = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) s += (u[k] - v[k]) * (u[k] - v[k]);
  return s;
}

// Expectation over the four (x_i, n_j) outcomes of ||x_{f(y)} - x_i||^2.
double expected_distortion(const Example1Instance& inst, const Map& f) {
  double total = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) total += inst.joint[i][j] * sq(inst.x[f[2 * i + j]], inst.x[i]);
  return total;
}

Map plan_map(const TransportPlan& plan, const Example1Instance& inst) {
  const auto map = plan.induced_map();
  REQUIRE(map.has_value());
  Map out{};
  for (int k = 0; k < 4; ++k) {
    const long row = inst.measure_y().find(inst.y[k]);
    REQUIRE(row >= 0);
    const long col = inst.measure_x().find(plan.target_atoms[(*map)[static_cast<std::size_t>(row)]]);
    out[k] = static_cast<int>(col);
  }
  return out;
}

TransportPlan solve(const Example1Instance& inst, const CostSpec& cost) {
  return solve_exact(inst.measure_y(), inst.measure_x(), cost);
}

}  // namespace

TEST_CASE("build_example1 atoms") {
  const auto inst = build_example1(1.0, 0.1, 11, 0.5, 0.5);
  REQUIRE(inst.x[0].size() == 12);
  const auto filled = [](double head, double tail) {
    Point p(12, tail);
    p[0] = head;
    return p;
  };
  CHECK(inst.x[0] == filled(-1.0, 0.1));
  CHECK(inst.x[1] == filled(1.0, -0.1));
  CHECK(inst.n[0] == filled(-2.0, 0.0));
  CHECK(inst.n[1] == filled(2.0, 0.0));
  CHECK(inst.y[0] == filled(-3.0, 0.1));
  CHECK(inst.y[1] == filled(1.0, 0.1));
  CHECK(inst.y[2] == filled(-1.0, -0.1));
  CHECK(inst.y[3] == filled(3.0, -0.1));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(inst.joint[i][j] == 0.25);
}

TEST_CASE("build_example1 conditions") {
  const auto eleven = build_example1(1.0, 0.1, 11, 0.5, 0.5);
  CHECK(eleven.l2_condition);
  for (const auto& c : eleven.lq_conditions) CHECK(c.holds);
  CHECK(eleven.warnings().empty());

  const auto five = build_example1(1.0, 0.1, 5, 0.5, 0.5, {0.0});
  CHECK(five.l2_condition);
  REQUIRE(five.lq_conditions.size() == 1);
  CHECK(five.lq_conditions[0].holds);

  const auto five_all = build_example1(1.0, 0.1, 5, 0.5, 0.5);
  CHECK(five_all.lq_conditions[1].holds);
  CHECK_FALSE(five_all.lq_conditions[2].holds);
  CHECK(five_all.warnings().size() == 1);

  const auto one = build_example1(1.0, 0.1, 1, 0.5, 0.5, {0.0});
  CHECK_FALSE(one.lq_conditions[0].holds);
  CHECK(one.warnings().size() == 1);

  CHECK_THROWS_AS(build_example1(0.0, 0.1, 11, 0.5, 0.5), ValidationError);
  CHECK_THROWS_AS(build_example1(1.0, 0.1, 0, 0.5, 0.5), ValidationError);
  CHECK_THROWS_AS(build_example1(1.0, 0.1, 11, 1.5, 0.5), ValidationError);
  CHECK_THROWS_AS(build_example1(1.0, 0.1, 11, 0.5, 0.5, {1.5}), ValidationError);
}

TEST_CASE("p_Y is the pushforward of the joint") {
  const auto inst = build_example1(1.0, 0.1, 3, 0.3, 0.8);
  const auto y = inst.measure_y();
  REQUIRE(y.size() == 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(y.weight(static_cast<std::size_t>(y.find(inst.y[2 * i + j]))) ==
            doctest::Approx(inst.p(i) * inst.ptilde(j)).epsilon(1e-15));
}

TEST_CASE("golden plans for a=1, b=0.1, m=11") {
  const auto inst = build_example1(1.0, 0.1, 11, 0.5, 0.5);

  const TransportPlan l2 = solve(inst, CostSpec::spatial(2.0));
  CHECK(plan_map(l2, inst) == kL2Plan);
  CHECK(std::abs(l2.total_cost - 2.22) <= 1e-9);
  CHECK(std::abs(map_distortion(l2, inst) - 2.22) <= 1e-9);
  CHECK(std::abs(expected_distortion(inst, kL2Plan) - 2.22) <= 1e-9);
  CHECK(std::abs(enumerate_oracle(inst.measure_y(), inst.measure_x(), CostSpec::spatial(2.0)).total_cost -
                 2.22) <= 1e-9);

  for (double q : {0.0, 0.5, 1.0}) {
    CAPTURE(q);
    const TransportPlan lq = solve(inst, CostSpec::frequency(q));
    CHECK(plan_map(lq, inst) == kSparsePlan);
    CHECK(std::abs(map_distortion(lq, inst)) <= 1e-12);
    CHECK(std::abs(lq.total_cost - std::pow(2.0, q)) <= 1e-9);
    const TransportPlan brute = enumerate_oracle(inst.measure_y(), inst.measure_x(), CostSpec::frequency(q));
    CHECK(std::abs(brute.total_cost - lq.total_cost) <= 1e-9);
  }
}

TEST_CASE("map_distortion of hand-built plans") {
  const auto inst = build_example1(1.0, 0.1, 11, 0.5, 0.5);
  const auto y = inst.measure_y();
  const auto x = inst.measure_x();
  auto plan_from = [&](const Map& f) {
    Matrix pi(4, 2);
    for (int k = 0; k < 4; ++k)
      pi(static_cast<std::size_t>(y.find(inst.y[k])), static_cast<std::size_t>(x.find(inst.x[f[k]]))) =
          0.25;
    TransportPlan plan = solve_exact(y, x, CostSpec::spatial(2.0));
    plan.pi = pi;
    return plan;
  };
  for (int code = 0; code < 16; ++code) {
    const Map f{code & 1, (code >> 1) & 1, (code >> 2) & 1, (code >> 3) & 1};
    CHECK(map_distortion(plan_from(f), inst) == doctest::Approx(expected_distortion(inst, f)).epsilon(1e-14));
  }
  CHECK(map_distortion(plan_from(kSparsePlan), inst) == 0.0);

  const auto other = build_example1(2.0, 0.1, 11, 0.5, 0.5);
  CHECK_THROWS_AS(map_distortion(plan_from(kL2Plan), other), ValidationError);
}

TEST_CASE("deterministic degradation restricts the distortion to y1 and y3") {
  const auto inst = build_example1(1.0, 0.1, 11, 0.5, 1.0);
  CHECK(inst.measure_y().size() == 2);
  const TransportPlan plan = solve(inst, CostSpec::spatial(2.0));
  CHECK(plan.rows() == 2);
  // y1 -> x1 and y3 -> x2 are forced by the marginals.
  CHECK(map_distortion(plan, inst) == 0.0);
}

TEST_CASE("literal variant removes the dichotomy") {
  const auto inst = build_example1(1.0, 0.1, 11, 0.5, 0.5, {0.0, 0.5, 1.0}, Example1Variant::kLiteral);
  CHECK(inst.x[1][0] == -1.0);
  CHECK(inst.y[2][0] == -3.0);
  CHECK(map_distortion(solve(inst, CostSpec::spatial(2.0)), inst) == 0.0);
  CHECK(map_distortion(solve(inst, CostSpec::frequency(1.0)), inst) == 0.0);
}

TEST_CASE("dichotomy holds across the admissible region") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> a_dist(0.5, 3.0);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  std::uniform_int_distribution<int> m_dist(2, 60);
  std::uniform_real_distribution<double> p_dist(0.1, 0.9);
  int tested = 0;
  while (tested < 300) {
    const double a = a_dist(gen);
    const int m = m_dist(gen);
    // b between a/m (l1 condition) and a/sqrt(m) (l2 condition).
    const double b = a / m + frac(gen) * (a / std::sqrt(m) - a / m);
    const double p = tested % 2 == 0 ? 0.5 : p_dist(gen);
    const auto inst = build_example1(a, b, m, p, p);
    if (!inst.l2_condition || !inst.warnings().empty()) continue;
    ++tested;
    CAPTURE(a);
    CAPTURE(b);
    CAPTURE(m);
    CAPTURE(p);

    const TransportPlan l2 = solve(inst, CostSpec::spatial(2.0));
    CHECK(plan_map(l2, inst) == kL2Plan);
    const double gap = sq(inst.x[0], inst.x[1]);
    CHECK(map_distortion(l2, inst) == doctest::Approx(2.0 * p * (1.0 - p) * gap).epsilon(1e-12));
    if (p == 0.5) CHECK(map_distortion(l2, inst) == doctest::Approx(2 * a * a + 2 * m * b * b).epsilon(1e-12));

    for (double q : {0.0, 0.5, 1.0}) {
      const TransportPlan lq = solve(inst, CostSpec::frequency(q));
      CHECK(plan_map(lq, inst) == kSparsePlan);
      CHECK(map_distortion(lq, inst) <= 1e-12);
    }
  }
}
