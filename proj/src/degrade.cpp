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

#include "sotlab/degrade.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sotlab/dft.hpp"
#include "sotlab/error.hpp"
#include "sotlab/rng.hpp"

namespace sotlab {

namespace {

Degradation finish(const Image& clean, const Image& layer) {
  Degradation out;
  out.degraded = clean + layer;
  out.residual = out.degraded - clean;
  return out;
}

double random_level(Rng& rng) { return static_cast<double>(rng.uniform_int(256)) / 255.0; }

Image piecewise_constant(int height, int width, int channels, Rng& rng) {
  std::vector<std::vector<double>> colors;
  auto fresh_color = [&] {
    while (true) {
      std::vector<double> color(channels);
      for (double& v : color) v = random_level(rng);
      if (std::find(colors.begin(), colors.end(), color) == colors.end()) {
        colors.push_back(color);
        return color;
      }
    }
  };
  const auto background = fresh_color();
  Image image(height, width, channels);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c)
      for (int ch = 0; ch < channels; ++ch) image.at(r, c, ch) = background[ch];
  const int rectangles = 3 + static_cast<int>(rng.uniform_int(6));
  for (int k = 0; k < rectangles; ++k) {
    const int r0 = static_cast<int>(rng.uniform_int(height));
    const int c0 = static_cast<int>(rng.uniform_int(width));
    const int h = 1 + static_cast<int>(rng.uniform_int(height - r0));
    const int w = 1 + static_cast<int>(rng.uniform_int(width - c0));
    const auto color = fresh_color();
    for (int r = r0; r < r0 + h; ++r)
      for (int c = c0; c < c0 + w; ++c)
        for (int ch = 0; ch < channels; ++ch) image.at(r, c, ch) = color[ch];
  }
  return image;
}

Image smooth_gradient(int height, int width, int channels, Rng& rng, double max_slope) {
  require(max_slope >= 0.0, "max_slope must be >= 0");
  Image image(height, width, channels);
  for (int ch = 0; ch < channels; ++ch) {
    const double gx = rng.uniform(-max_slope, max_slope);
    const double gy = rng.uniform(-max_slope, max_slope);
    const double span = std::abs(gx) * (width - 1) + std::abs(gy) * (height - 1);
    const double floor = rng.uniform(0.0, std::max(0.0, 1.0 - span));
    const double x0 = gx >= 0.0 ? 0.0 : width - 1.0;
    const double y0 = gy >= 0.0 ? 0.0 : height - 1.0;
    for (int r = 0; r < height; ++r)
      for (int c = 0; c < width; ++c) image.at(r, c, ch) = floor + gx * (c - x0) + gy * (r - y0);
  }
  return image;
}

Frequency mirror(const Frequency& f, int height, int width) {
  return {(height - f.u) % height, (width - f.v) % width};
}

std::vector<Frequency> class_representatives(int height, int width) {
  std::vector<Frequency> reps;
  for (int u = 0; u < height; ++u) {
    for (int v = 0; v < width; ++v) {
      if (u == 0 && v == 0) continue;
      const Frequency f{u, v};
      const Frequency g = mirror(f, height, width);
      if (f.u * width + f.v <= g.u * width + g.v) reps.push_back(f);
    }
  }
  return reps;
}

Image spiked_plane(int height, int width, std::span<const Frequency> support, double amplitude,
                   Rng& rng) {
  Spectrum spectrum(height, width);
  for (const Frequency& f : support) {
    const Frequency g = mirror(f, height, width);
    if (f == g) {
      spectrum.at(f.u, f.v) = rng.uniform() < 0.5 ? -amplitude : amplitude;
    } else {
      const double phase = 2.0 * std::numbers::pi * rng.uniform();
      const Complex c = std::polar(amplitude, phase);
      spectrum.at(f.u, f.v) = c;
      spectrum.at(g.u, g.v) = std::conj(c);
    }
  }
  return idft2(spectrum);
}

double keys_cubic(double x) {
  constexpr double a = -0.5;
  const double t = std::abs(x);
  if (t <= 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
  if (t < 2.0) return ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a;
  return 0.0;
}

int symmetric_index(int i, int n) {
  const int period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - 1 - i;
}

struct Taps {
  std::vector<int> index;
  std::vector<double> weight;
};

std::vector<Taps> resize_taps(int in, int out, double scale) {
  const double stretch = scale < 1.0 ? scale : 1.0;
  const double radius = 2.0 / stretch;
  std::vector<Taps> taps(out);
  for (int o = 0; o < out; ++o) {
    const double centre = (o + 0.5) / scale - 0.5;
    const int first = static_cast<int>(std::floor(centre - radius)) + 1;
    const int last = static_cast<int>(std::floor(centre + radius));
    double total = 0.0;
    for (int k = first; k <= last; ++k) {
      const double w = stretch * keys_cubic(stretch * (centre - k));
      if (w == 0.0) continue;
      taps[o].index.push_back(symmetric_index(k, in));
      taps[o].weight.push_back(w);
      total += w;
    }
    for (double& w : taps[o].weight) w /= total;
  }
  return taps;
}

}  // namespace

Image gen_clean(int height, int width, int channels, SceneModel model, std::uint64_t seed,
                const SceneOptions& options) {
  Image probe(height, width, channels);  // validates the shape
  Rng rng(seed);
  return model == SceneModel::kPiecewiseConstant
             ? piecewise_constant(height, width, channels, rng)
             : smooth_gradient(height, width, channels, rng, options.max_slope);
}

std::size_t frequency_class_count(int height, int width) {
  return class_representatives(height, width).size();
}

std::vector<Frequency> draw_frequency_support(int height, int width, int spikes,
                                              std::uint64_t seed) {
  require(height >= 1 && width >= 1, "frequency support needs a positive grid");
  require(spikes >= 0, "spike count must be >= 0");
  require(static_cast<long>(spikes) * 2 <= static_cast<long>(height) * width,
          "spike count K must not exceed H*W/2");
  auto reps = class_representatives(height, width);
  require(static_cast<std::size_t>(spikes) <= reps.size(),
          "spike count exceeds the number of non-DC frequency classes");
  Rng rng(seed);
  // Partial Fisher-Yates: the first K entries are the sample.
  for (int k = 0; k < spikes; ++k) {
    const auto pick = k + static_cast<std::size_t>(rng.uniform_int(reps.size() - k));
    std::swap(reps[k], reps[pick]);
  }
  reps.resize(spikes);
  return reps;
}

Degradation apply_freq_sparse_noise(const Image& image, std::span<const Frequency> support,
                                    double amplitude, std::uint64_t seed) {
  require(std::isfinite(amplitude) && amplitude >= 0.0, "spike amplitude must be >= 0");
  for (const Frequency& f : support)
    require(f.u >= 0 && f.u < image.height() && f.v >= 0 && f.v < image.width(),
            "spike frequency outside the image grid");
  Image layer(image.height(), image.width(), image.channels());
  for (int ch = 0; ch < image.channels(); ++ch) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(ch)));
    layer.set_channel(ch, spiked_plane(image.height(), image.width(), support, amplitude, rng));
  }
  return finish(image, layer);
}

Degradation apply_freq_sparse_noise(const Image& image, int spikes, double amplitude,
                                    std::uint64_t seed) {
  const auto support =
      draw_frequency_support(image.height(), image.width(), spikes, derive_seed(seed, 1000));
  return apply_freq_sparse_noise(image, support, amplitude, seed);
}

Degradation apply_rain_streaks(const Image& image, const RainOptions& options,
                               std::uint64_t seed) {
  require(options.count >= 0, "streak count must be >= 0");
  require(std::isfinite(options.length) && options.length > 0.0, "streak length must be > 0");
  require(options.intensity >= 0.0, "streak intensity must be >= 0");
  const int height = image.height();
  const int width = image.width();
  std::vector<double> plane(static_cast<std::size_t>(height) * width, 0.0);
  const double angle = options.angle_deg * std::numbers::pi / 180.0;
  const double dx = std::cos(angle);
  const double dy = -std::sin(angle);
  Rng rng(seed);
  auto splat = [&](double x, double y, double w) {
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const double fx = x - x0;
    const double fy = y - y0;
    const double weights[2][2] = {{(1 - fy) * (1 - fx), (1 - fy) * fx}, {fy * (1 - fx), fy * fx}};
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const int r = y0 + a;
        const int c = x0 + b;
        if (r < 0 || r >= height || c < 0 || c >= width || weights[a][b] == 0.0) continue;
        plane[static_cast<std::size_t>(r) * width + c] += w * weights[a][b];
      }
    }
  };
  const int steps = std::max(1, static_cast<int>(std::ceil(options.length / 0.5)));
  for (int s = 0; s < options.count; ++s) {
    const double cx = rng.uniform(0.0, width - 1.0);
    const double cy = rng.uniform(0.0, height - 1.0);
    for (int k = 0; k <= steps; ++k) {
      const double t = -0.5 * options.length + options.length * k / steps;
      splat(cx + t * dx, cy + t * dy, options.intensity * 0.5);
    }
  }
  Image layer(height, width, image.channels());
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      const double v = std::min(plane[static_cast<std::size_t>(r) * width + c], options.intensity);
      for (int ch = 0; ch < image.channels(); ++ch) layer.at(r, c, ch) = v;
    }
  return finish(image, layer);
}

Degradation apply_haze(const Image& image, double transmission, double airlight) {
  require(transmission >= 0.0 && transmission <= 1.0, "transmission must lie in [0, 1]");
  require(airlight >= 0.0 && airlight <= 1.0, "airlight must lie in [0, 1]");
  Image layer = image;
  for (double& v : layer.data()) v = (1.0 - transmission) * (airlight - v);
  return finish(image, layer);
}

Image bicubic_resize(const Image& image, double factor) {
  const bool supported = factor == 0.25 || factor == 0.5 || factor == 1.0 || factor == 2.0 ||
                         factor == 4.0;
  require(supported, "bicubic factor must be one of 1/4, 1/2, 1, 2, 4");
  if (factor == 1.0) return image;
  if (factor < 1.0) {
    const int divisor = static_cast<int>(std::lround(1.0 / factor));
    if (image.height() % divisor != 0 || image.width() % divisor != 0)
      throw ValidationError("bicubic downscale by " + std::to_string(divisor) +
                            " needs dimensions divisible by it, got " +
                            std::to_string(image.height()) + "x" + std::to_string(image.width()));
  }
  const int out_h = static_cast<int>(std::lround(image.height() * factor));
  const int out_w = static_cast<int>(std::lround(image.width() * factor));
  const int channels = image.channels();
  const auto row_taps = resize_taps(image.width(), out_w, factor);
  const auto col_taps = resize_taps(image.height(), out_h, factor);
  Image wide(image.height(), out_w, channels);
  for (int r = 0; r < image.height(); ++r)
    for (int c = 0; c < out_w; ++c)
      for (int ch = 0; ch < channels; ++ch) {
        double sum = 0.0;
        for (std::size_t k = 0; k < row_taps[c].index.size(); ++k)
          sum += row_taps[c].weight[k] * image.at(r, row_taps[c].index[k], ch);
        wide.at(r, c, ch) = sum;
      }
  Image out(out_h, out_w, channels);
  for (int r = 0; r < out_h; ++r)
    for (int c = 0; c < out_w; ++c)
      for (int ch = 0; ch < channels; ++ch) {
        double sum = 0.0;
        for (std::size_t k = 0; k < col_taps[r].index.size(); ++k)
          sum += col_taps[r].weight[k] * wide.at(col_taps[r].index[k], c, ch);
        out.at(r, c, ch) = sum;
      }
  return out;
}

Degradation apply_sr_bicubic(const Image& image, int factor) {
  require(factor == 2 || factor == 4, "super-resolution factor must be 2 or 4");
  const Image low = bicubic_resize(image, 1.0 / factor);
  const Image up = bicubic_resize(low, static_cast<double>(factor));
  return finish(image, up - image);
}

std::string to_string(DegradationKind kind) {
  switch (kind) {
    case DegradationKind::kFreqSparse: return "freq-sparse";
    case DegradationKind::kRainStreaks: return "rain-streaks";
    case DegradationKind::kHaze: return "haze";
    case DegradationKind::kSrBicubic: return "sr-bicubic";
  }
  return "unknown";
}

DegradationKind degradation_kind_from_string(const std::string& name) {
  if (name == "freq-sparse") return DegradationKind::kFreqSparse;
  if (name == "rain-streaks") return DegradationKind::kRainStreaks;
  if (name == "haze") return DegradationKind::kHaze;
  if (name == "sr-bicubic") return DegradationKind::kSrBicubic;
  throw ValidationError("unknown degradation kind '" + name + "'");
}

void DegradationSpec::validate() const {
  switch (kind) {
    case DegradationKind::kFreqSparse:
      require(spikes >= 0, "freq-sparse: spikes must be >= 0");
      require(amplitude >= 0.0 && std::isfinite(amplitude), "freq-sparse: amplitude must be >= 0");
      break;
    case DegradationKind::kRainStreaks:
      require(rain.count >= 0, "rain-streaks: count must be >= 0");
      require(rain.length > 0.0, "rain-streaks: length must be > 0");
      require(rain.intensity >= 0.0, "rain-streaks: intensity must be >= 0");
      break;
    case DegradationKind::kHaze:
      require(transmission > 0.0 && transmission <= 1.0, "haze: transmission must lie in (0, 1]");
      require(airlight >= 0.0 && airlight <= 1.0, "haze: airlight must lie in [0, 1]");
      break;
    case DegradationKind::kSrBicubic:
      require(sr_factor == 2 || sr_factor == 4, "sr-bicubic: factor must be 2 or 4");
      break;
  }
}

Degradation apply_degradation(const Image& clean, const DegradationSpec& spec,
                              std::uint64_t image_seed) {
  spec.validate();
  switch (spec.kind) {
    case DegradationKind::kFreqSparse: {
      if (!spec.shared_support) return apply_freq_sparse_noise(clean, spec.spikes, spec.amplitude, image_seed);
      const auto support =
          draw_frequency_support(clean.height(), clean.width(), spec.spikes, spec.seed);
      return apply_freq_sparse_noise(clean, support, spec.amplitude, image_seed);
    }
    case DegradationKind::kRainStreaks:
      return apply_rain_streaks(clean, spec.rain, image_seed);
    case DegradationKind::kHaze:
      return apply_haze(clean, spec.transmission, spec.airlight);
    case DegradationKind::kSrBicubic:
      return apply_sr_bicubic(clean, spec.sr_factor);
  }
  throw ValidationError("unhandled degradation kind");
}

}  // namespace sotlab
