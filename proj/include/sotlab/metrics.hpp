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

#ifndef SOTLAB_METRICS_HPP_
#define SOTLAB_METRICS_HPP_

#include <limits>
#include <string>
#include <vector>

#include "sotlab/image.hpp"

namespace sotlab {

/// Returned by psnr() for identical images.
inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

double mse(const Image& x, const Image& ref);

/// 10 log10(peak^2 / MSE); +infinity when MSE is zero.
double psnr(const Image& x, const Image& ref, double peak = 1.0);

/// Mean local SSIM: 11x11 Gaussian window with sigma 1.5, C1 = (0.01 peak)^2,
/// C2 = (0.03 peak)^2, half-sample symmetric boundary. Colour images average
/// the per-channel values.
double ssim(const Image& x, const Image& ref, double peak = 1.0);

struct ImageMetrics {
  std::string name;
  double psnr_db = 0.0;
  double ssim = 0.0;
};

struct MetricReport {
  std::vector<ImageMetrics> images;
  double mean_psnr_db = 0.0;  ///< +infinity if any image is a perfect match
  double mean_ssim = 0.0;
  bool perceptual_metrics_available = false;  ///< LPIPS / PI are not computed

  void add(ImageMetrics m);
  void finalize();
};

}  // namespace sotlab

#endif  // SOTLAB_METRICS_HPP_
