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

#include "sotlab/costs.hpp"

#include <cmath>
#include <cstdio>

#include "sotlab/error.hpp"

namespace sotlab {

namespace {

double lq_term(double squared_magnitude, double q, double eps) {
  if (q == 0.0 && eps == 0.0) return squared_magnitude > kZeroMagnitude * kZeroMagnitude ? 1.0 : 0.0;
  const double s = squared_magnitude + eps * eps;
  if (q == 2.0) return s;
  if (q == 1.0) return std::sqrt(s);
  if (s == 0.0) return q == 0.0 ? 1.0 : 0.0;
  return std::pow(s, 0.5 * q);
}

void check_lq(double q, double eps) {
  if (!valid_lq_exponent(q))
    throw ValidationError("lq exponent must lie in [0, 1] or equal 2, got " + std::to_string(q));
  require(std::isfinite(eps) && eps >= 0.0, "lq smoothing must be finite and >= 0");
}

}  // namespace

bool valid_lq_exponent(double q) noexcept { return (q >= 0.0 && q <= 1.0) || q == 2.0; }

void CostSpec::validate() const {
  switch (kind) {
    case CostKind::kSpatialLBeta:
      require(std::isfinite(exponent) && exponent >= 1.0, "spatial cost exponent beta must be >= 1");
      break;
    case CostKind::kFrequencyLq:
      check_lq(exponent, smoothing);
      break;
  }
  require(smoothing >= 0.0, "smoothing must be >= 0");
}

std::string CostSpec::describe() const {
  char buf[64];
  if (kind == CostKind::kSpatialLBeta) {
    std::snprintf(buf, sizeof buf, "l2^%g", exponent);
  } else {
    std::snprintf(buf, sizeof buf, "lq(q=%g)", exponent);
  }
  return buf;
}

double spatial_cost(const Image& residual, double beta) {
  require(beta >= 1.0, "spatial cost requires beta >= 1");
  residual.require_finite("spatial_cost residual");
  const double sq = squared_norm(residual);
  if (beta == 2.0) return sq;
  return std::pow(sq, 0.5 * beta);
}

double complex_lq(std::span<const Complex> coefficients, double q, double eps) {
  check_lq(q, eps);
  double total = 0.0;
  for (const Complex& c : coefficients) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw ValidationError("complex_lq: non-finite coefficient");
    total += lq_term(std::norm(c), q, eps);
  }
  return total;
}

void complex_lq_grad(std::span<const Complex> coefficients, double q, double eps,
                     std::span<Complex> gradient) {
  check_lq(q, eps);
  require(q != 0.0, "complex_lq_grad: q = 0 has no gradient");
  require(q == 2.0 || eps > 0.0, "complex_lq_grad: eps must be > 0 when q < 2");
  require(gradient.size() == coefficients.size(), "complex_lq_grad: output size mismatch");
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    const Complex c = coefficients[i];
    double factor;
    if (q == 2.0) {
      factor = 2.0;
    } else {
      const double s = std::norm(c) + eps * eps;
      factor = q == 1.0 ? 1.0 / std::sqrt(s) : q * std::pow(s, 0.5 * q - 1.0);
    }
    gradient[i] = factor * c;
  }
}

Spectrum complex_lq_grad(const Spectrum& spectrum, double q, double eps) {
  Spectrum gradient(spectrum.height, spectrum.width);
  complex_lq_grad(spectrum.coefficients, q, eps, gradient.coefficients);
  return gradient;
}

double point_cost(const CostSpec& spec, std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "point_cost: dimension mismatch");
  if (spec.kind == CostKind::kSpatialLBeta) {
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sq += (a[i] - b[i]) * (a[i] - b[i]);
    return spec.exponent == 2.0 ? sq : std::pow(sq, 0.5 * spec.exponent);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    total += lq_term(d * d, spec.exponent, spec.smoothing);
  }
  return total;
}

}  // namespace sotlab
