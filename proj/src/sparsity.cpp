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

#include "sotlab/sparsity.hpp"

#include <algorithm>
#include <cmath>

#include "sotlab/dft.hpp"
#include "sotlab/error.hpp"

namespace sotlab {

namespace {

void check_pairs(std::span<const ImagePair> pairs) {
  require(!pairs.empty(), "sparsity analysis needs at least one pair");
  const Image& first = pairs.front().clean;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& pair = pairs[k];
    if (!pair.degraded.same_shape(pair.clean))
      throw ValidationError("pair " + std::to_string(k) + ": degraded and clean shapes differ");
    if (!pair.clean.same_shape(first))
      throw ValidationError("pair " + std::to_string(k) + ": shape differs from pair 0");
  }
}

/// Calls visit(coefficient) for every residual coefficient in fixed order.
template <typename Visit>
void for_each_residual_coefficient(std::span<const ImagePair> pairs, bool include_dc,
                                   Visit&& visit) {
  for (const auto& pair : pairs) {
    const Image residual = pair.degraded - pair.clean;
    for (int ch = 0; ch < residual.channels(); ++ch) {
      const Spectrum spectrum = dft2(residual.channel(ch));
      for (std::size_t k = include_dc ? 0 : 1; k < spectrum.size(); ++k)
        visit(spectrum.coefficients[k]);
    }
  }
}

GGFit fit_from_moments(double mean_abs, double mean_square, double samples) {
  require(samples >= 100.0, "generalized Gaussian fit needs at least 100 samples");
  require(mean_square > 0.0, "generalized Gaussian fit: all samples are zero");
  GGFit fit;
  fit.mean_abs = mean_abs;
  fit.mean_square = mean_square;
  fit.effective_samples = samples;
  fit.ratio = mean_abs / std::sqrt(mean_square);
  double lo = kGammaMin;
  double hi = kGammaMax;
  if (fit.ratio <= gg_moment_ratio(lo)) {
    fit.gamma = lo;
    fit.clamped = true;
  } else if (fit.ratio >= gg_moment_ratio(hi)) {
    fit.gamma = hi;
    fit.clamped = true;
  } else {
    while (hi - lo > 1e-6) {
      const double mid = 0.5 * (lo + hi);
      if (gg_moment_ratio(mid) < fit.ratio) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    fit.gamma = 0.5 * (lo + hi);
  }
  // E x^2 = alpha^2 Gamma(3/g) / Gamma(1/g).
  fit.alpha = std::sqrt(mean_square *
                        std::exp(std::lgamma(1.0 / fit.gamma) - std::lgamma(3.0 / fit.gamma)));
  return fit;
}

}  // namespace

double Histogram::total_count() const {
  double total = 0.0;
  for (double c : counts) total += c;
  return total;
}

Histogram residual_spectrum_histogram(std::span<const ImagePair> pairs,
                                      const HistogramOptions& options) {
  check_pairs(pairs);
  require(options.nbins >= 1, "histogram needs at least one bin");
  std::vector<double> magnitudes;
  for_each_residual_coefficient(pairs, options.include_dc,
                                [&](const Complex& c) { magnitudes.push_back(std::abs(c)); });

  double top = options.max_magnitude;
  if (top <= 0.0) {
    top = 0.0;
    for (double v : magnitudes) top = std::max(top, v);
    if (top == 0.0) top = 1.0;
  }
  Histogram h;
  h.layout = options.layout;
  h.include_dc = options.include_dc;
  h.pair_count = pairs.size();
  h.coefficients_per_pair = magnitudes.size() / pairs.size();
  h.edges.resize(options.nbins + 1);
  h.counts.assign(options.nbins, 0.0);
  if (options.layout == BinLayout::kLinear) {
    for (int k = 0; k <= options.nbins; ++k) h.edges[k] = top * k / options.nbins;
  } else {
    require(options.log_floor > 0.0 && options.log_floor < top,
            "log bins need 0 < log_floor < max magnitude");
    require(options.nbins >= 2, "log layout needs at least two bins");
    h.edges[0] = 0.0;
    const double steps = options.nbins - 1;
    for (int k = 1; k <= options.nbins; ++k)
      h.edges[k] = options.log_floor * std::pow(top / options.log_floor, (k - 1) / steps);
    h.edges[options.nbins] = top;
  }

  double overflow = 0.0;
  for (double v : magnitudes) {
    if (v > top) {
      overflow += 1.0;
      continue;
    }
    const auto upper = std::upper_bound(h.edges.begin(), h.edges.end(), v);
    std::size_t bin = static_cast<std::size_t>(upper - h.edges.begin());
    bin = bin == 0 ? 0 : bin - 1;
    if (bin >= h.counts.size()) bin = h.counts.size() - 1;
    h.counts[bin] += 1.0;
  }
  const double scale = 1.0 / static_cast<double>(pairs.size());
  for (double& c : h.counts) c *= scale;
  h.overflow = overflow * scale;
  return h;
}

std::vector<double> residual_spectrum_components(std::span<const ImagePair> pairs,
                                                 bool include_dc) {
  check_pairs(pairs);
  std::vector<double> samples;
  for_each_residual_coefficient(pairs, include_dc, [&](const Complex& c) {
    samples.push_back(c.real());
    samples.push_back(c.imag());
  });
  return samples;
}

double gg_moment_ratio(double gamma) {
  require(gamma > 0.0, "gg_moment_ratio: gamma must be > 0");
  const double log_ratio = std::lgamma(2.0 / gamma) -
                           0.5 * (std::lgamma(1.0 / gamma) + std::lgamma(3.0 / gamma));
  return std::exp(log_ratio);
}

GGFit fit_generalized_gaussian(std::span<const double> samples) {
  double sum_abs = 0.0;
  double sum_sq = 0.0;
  for (double v : samples) {
    require(std::isfinite(v), "generalized Gaussian fit: non-finite sample");
    sum_abs += std::abs(v);
    sum_sq += v * v;
  }
  const double n = static_cast<double>(samples.size());
  require(n >= 100.0, "generalized Gaussian fit needs at least 100 samples");
  return fit_from_moments(sum_abs / n, sum_sq / n, n);
}

GGFit fit_generalized_gaussian(const Histogram& histogram) {
  require(histogram.counts.size() + 1 == histogram.edges.size(), "malformed histogram");
  double weight = 0.0;
  double sum_abs = 0.0;
  double sum_sq = 0.0;
  for (std::size_t k = 0; k < histogram.counts.size(); ++k) {
    const double centre = 0.5 * (histogram.edges[k] + histogram.edges[k + 1]);
    const double w = histogram.counts[k] * static_cast<double>(histogram.pair_count);
    weight += w;
    sum_abs += w * centre;
    sum_sq += w * centre * centre;
  }
  require(weight >= 100.0, "generalized Gaussian fit needs at least 100 samples");
  return fit_from_moments(sum_abs / weight, sum_sq / weight, weight);
}

}  // namespace sotlab
