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

#ifndef SOTLAB_DEGRADE_HPP_
#define SOTLAB_DEGRADE_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sotlab/image.hpp"

namespace sotlab {

enum class SceneModel { kPiecewiseConstant, kSmoothGradient };

struct SceneOptions {
  /// Bound on |d/dx| and |d/dy| per pixel for smooth-gradient scenes.
  double max_slope = 1.0 / 64.0;
};

/// Synthetic clean scene, a pure function of its arguments.
///
/// Piecewise-constant scenes are a background plus 3 to 8 axis-aligned
/// rectangles, every region with a distinct intensity on the 8-bit grid.
/// Smooth-gradient scenes are planes with slopes bounded by `max_slope`.
Image gen_clean(int height, int width, int channels, SceneModel model, std::uint64_t seed,
                const SceneOptions& options = {});

/// Output of every generator: degraded == clean + residual holds exactly in
/// floating point because the residual is taken as (degraded - clean).
struct Degradation {
  Image degraded;
  Image residual;
};

/// DFT index (u, v); stands for the conjugate pair {(u, v), (-u, -v)}.
struct Frequency {
  int u = 0;
  int v = 0;
  friend bool operator==(const Frequency&, const Frequency&) = default;
};

/// Number of non-DC conjugate classes of an H x W grid.
std::size_t frequency_class_count(int height, int width);

/// K distinct conjugate classes, DC excluded, drawn uniformly.
std::vector<Frequency> draw_frequency_support(int height, int width, int spikes,
                                              std::uint64_t seed);

/// Adds a real residual whose spectrum is nonzero exactly on the given
/// conjugate pairs, each coefficient of magnitude `amplitude` with a seeded
/// random phase (a random sign for self-conjugate frequencies). Each channel
/// gets its own phases.
Degradation apply_freq_sparse_noise(const Image& image, std::span<const Frequency> support,
                                    double amplitude, std::uint64_t seed);

/// As above with the support itself drawn from `seed`. K must not exceed
/// H*W/2 or the number of available classes.
Degradation apply_freq_sparse_noise(const Image& image, int spikes, double amplitude,
                                    std::uint64_t seed);

struct RainOptions {
  int count = 6;
  double angle_deg = 80.0;  ///< from the horizontal axis, counter-clockwise
  double length = 12.0;     ///< pixels
  double intensity = 0.4;   ///< per-pixel ceiling of the streak layer
};

/// Additive anti-aliased line segments (bilinear splats every half pixel),
/// the layer clipped to `intensity` so the degraded image stays in
/// [0, 1 + intensity]. Identical streaks on every channel.
Degradation apply_rain_streaks(const Image& image, const RainOptions& options,
                               std::uint64_t seed);

/// Atmospheric scattering: degraded = t * image + (1 - t) * airlight.
Degradation apply_haze(const Image& image, double transmission, double airlight);

/// Bicubic resampling (Keys kernel, a = -0.5) with half-sample symmetric
/// boundary extension. Downscaling widens the kernel (antialiasing).
/// factor must be one of 1/4, 1/2, 1, 2, 4.
Image bicubic_resize(const Image& image, double factor);

/// Super-resolution style degradation: bicubic down by `factor`, then up.
Degradation apply_sr_bicubic(const Image& image, int factor);

enum class DegradationKind { kFreqSparse, kRainStreaks, kHaze, kSrBicubic };

std::string to_string(DegradationKind kind);
DegradationKind degradation_kind_from_string(const std::string& name);

/// Everything a dataset generator needs to reproduce one degradation family.
struct DegradationSpec {
  DegradationKind kind = DegradationKind::kFreqSparse;
  int spikes = 8;
  double amplitude = 0.5;
  /// Freq-sparse only: when true the spike frequencies are drawn once from
  /// `seed` and shared by every image; phases still vary per image.
  bool shared_support = true;
  RainOptions rain;
  double transmission = 0.6;
  double airlight = 0.9;
  int sr_factor = 4;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Applies `spec` to one image; `image_seed` drives the per-image randomness.
Degradation apply_degradation(const Image& clean, const DegradationSpec& spec,
                              std::uint64_t image_seed);

}  // namespace sotlab

#endif  // SOTLAB_DEGRADE_HPP_
