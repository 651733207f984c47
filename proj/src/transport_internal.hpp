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

#ifndef SOTLAB_SRC_TRANSPORT_INTERNAL_HPP_
#define SOTLAB_SRC_TRANSPORT_INTERNAL_HPP_

#include <span>

#include "sotlab/transport.hpp"

namespace sotlab::internal {

/// Shape, sign and balance checks shared by every solver entry point.
void check_transport_problem(std::span<const double> supply, std::span<const double> demand,
                             const Matrix& cost);

/// Wraps a flow matrix into a plan, computing the total cost.
TransportPlan make_plan(Matrix pi, std::span<const double> supply,
                        std::span<const double> demand, const Matrix& cost);

void attach_atoms(TransportPlan& plan, const DiscreteMeasure& source,
                  const DiscreteMeasure& target);

/// -1, 0, 1 comparing plans entry by entry in row-major order; entries
/// within `tolerance` count as equal.
int lexicographic_compare(const Matrix& a, const Matrix& b, double tolerance);

}  // namespace sotlab::internal

#endif  // SOTLAB_SRC_TRANSPORT_INTERNAL_HPP_
