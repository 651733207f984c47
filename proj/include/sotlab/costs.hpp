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

#ifndef SOTLAB_COSTS_HPP_
#define SOTLAB_COSTS_HPP_

#include <span>
#include <string>

#include "sotlab/dft.hpp"
#include "sotlab/image.hpp"

namespace sotlab {

enum class CostKind {
  kSpatialLBeta,  ///< ||r||_2^beta, beta >= 1
  kFrequencyLq,   ///< sum (|r_i|^2 + eps^2)^(q/2), q in [0, 1] or q == 2
};

/// Magnitudes at or below this count as zero for the q = 0 count.
inline constexpr double kZeroMagnitude = 1e-12;

struct CostSpec {
  CostKind kind = CostKind::kSpatialLBeta;
  double exponent = 2.0;
  double smoothing = 0.0;

  static CostSpec spatial(double beta) { return {CostKind::kSpatialLBeta, beta, 0.0}; }
  static CostSpec frequency(double q, double eps = 0.0) {
    return {CostKind::kFrequencyLq, q, eps};
  }

  /// Throws ValidationError when the exponent is outside its kind's range.
  void validate() const;
  std::string describe() const;
};

/// True for q in [0, 1] or q == 2.
bool valid_lq_exponent(double q) noexcept;

/// (sum r_i^2)^(beta/2) over every value of the residual.
double spatial_cost(const Image& residual, double beta);

/// Smoothed complex lq: sum (Re^2 + Im^2 + eps^2)^(q/2). With q = 0 and
/// eps = 0 this is the number of coefficients above kZeroMagnitude.
double complex_lq(std::span<const Complex> coefficients, double q, double eps);
inline double complex_lq(const Spectrum& spectrum, double q, double eps) {
  return complex_lq(spectrum.coefficients, q, eps);
}

/// Per-coefficient gradient packed as (d/dRe) + i (d/dIm).
/// Requires eps > 0 unless q == 2; q == 0 has no gradient and is rejected.
Spectrum complex_lq_grad(const Spectrum& spectrum, double q, double eps);
void complex_lq_grad(std::span<const Complex> coefficients, double q, double eps,
                     std::span<Complex> gradient);

/// Cost between two points of R^d. Spatial kind gives ||a-b||_2^beta; the
/// lq kind applies the lq sum coordinatewise to a - b.
double point_cost(const CostSpec& spec, std::span<const double> a, std::span<const double> b);

}  // namespace sotlab

#endif  // SOTLAB_COSTS_HPP_
