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

#ifndef SOTLAB_SPARSITY_HPP_
#define SOTLAB_SPARSITY_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sotlab/image.hpp"

namespace sotlab {

struct ImagePair {
  Image degraded;
  Image clean;
};

enum class BinLayout { kLinear, kLog };

struct HistogramOptions {
  int nbins = 200;
  /// Upper edge of the last bin; <= 0 means "largest observed magnitude".
  double max_magnitude = 0.0;
  BinLayout layout = BinLayout::kLinear;
  /// Upper edge of the first bin in log layout; the first bin is [0, log_floor).
  double log_floor = 1e-6;
  bool include_dc = true;
};

/// Magnitude histogram of residual spectra |dft2(y - x)|, averaged over pairs.
struct Histogram {
  std::vector<double> edges;   ///< nbins + 1 ascending edges
  std::vector<double> counts;  ///< per-bin counts divided by pair_count
  double overflow = 0.0;       ///< magnitudes above the last edge, divided by pair_count
  std::size_t pair_count = 0;
  std::size_t coefficients_per_pair = 0;
  bool include_dc = true;
  BinLayout layout = BinLayout::kLinear;
  std::string normalization = "unitary";

  double total_count() const;
};

Histogram residual_spectrum_histogram(std::span<const ImagePair> pairs,
                                      const HistogramOptions& options = {});

/// Real and imaginary parts of every residual spectrum coefficient, over all
/// pairs and channels in pair order. These are the samples the shape fit uses.
std::vector<double> residual_spectrum_components(std::span<const ImagePair> pairs,
                                                 bool include_dc = true);

/// Generalized Gaussian p(x) ~ exp(-|x/alpha|^gamma) fitted by moment ratio.
struct GGFit {
  double alpha = 0.0;
  double gamma = 0.0;
  double mean_abs = 0.0;     ///< E|x|
  double mean_square = 0.0;  ///< E x^2
  double ratio = 0.0;        ///< E|x| / sqrt(E x^2)
  double effective_samples = 0.0;
  bool clamped = false;      ///< ratio fell outside the searchable gamma range
};

/// E|x| / sqrt(E x^2) for a generalized Gaussian of shape gamma:
/// Gamma(2/g) / sqrt(Gamma(1/g) Gamma(3/g)).
double gg_moment_ratio(double gamma);

inline constexpr double kGammaMin = 0.05;
inline constexpr double kGammaMax = 10.0;

/// Moment-ratio fit; shape by bisection on [0.05, 10] to 1e-6, scale from
/// the second moment. Needs at least 100 samples, not all zero.
GGFit fit_generalized_gaussian(std::span<const double> samples);

/// Same fit from a magnitude histogram, treating bin centres as |x| values
/// weighted by count * pair_count.
GGFit fit_generalized_gaussian(const Histogram& histogram);

}  // namespace sotlab

#endif  // SOTLAB_SPARSITY_HPP_
