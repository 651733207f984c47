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

#include "sotlab/metrics.hpp"

#include <array>
#include <cmath>

#include "sotlab/error.hpp"

namespace sotlab {

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;

std::array<double, kWindow> gaussian_taps() {
  std::array<double, kWindow> taps{};
  double total = 0.0;
  for (int k = 0; k < kWindow; ++k) {
    const double d = k - kWindow / 2;
    taps[k] = std::exp(-d * d / (2.0 * kSigma * kSigma));
    total += taps[k];
  }
  for (double& t : taps) t /= total;
  return taps;
}

int symmetric_index(int i, int n) {
  const int period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - 1 - i;
}

/// Separable Gaussian filter of a single plane.
std::vector<double> blur(const std::vector<double>& plane, int height, int width) {
  static const auto taps = gaussian_taps();
  std::vector<double> tmp(plane.size());
  std::vector<double> out(plane.size());
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      double sum = 0.0;
      for (int k = 0; k < kWindow; ++k)
        sum += taps[k] * plane[static_cast<std::size_t>(r) * width + symmetric_index(c + k - kWindow / 2, width)];
      tmp[static_cast<std::size_t>(r) * width + c] = sum;
    }
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      double sum = 0.0;
      for (int k = 0; k < kWindow; ++k)
        sum += taps[k] * tmp[static_cast<std::size_t>(symmetric_index(r + k - kWindow / 2, height)) * width + c];
      out[static_cast<std::size_t>(r) * width + c] = sum;
    }
  return out;
}

double ssim_plane(const Image& x, const Image& y, double peak) {
  const int h = x.height();
  const int w = x.width();
  const auto px = x.data();
  const auto py = y.data();
  const std::size_t n = px.size();
  std::vector<double> a(px.begin(), px.end());
  std::vector<double> b(py.begin(), py.end());
  // Moments of values shifted by the first pixel; flat planes then give
  // exactly zero variance and exactly their own mean.
  const double shift_a = a[0];
  const double shift_b = b[0];
  std::vector<double> ca(n), cb(n), aa(n), bb(n), ab(n);
  for (std::size_t i = 0; i < n; ++i) {
    ca[i] = a[i] - shift_a;
    cb[i] = b[i] - shift_b;
    aa[i] = ca[i] * ca[i];
    bb[i] = cb[i] * cb[i];
    ab[i] = ca[i] * cb[i];
  }
  const auto mu_ca = blur(ca, h, w);
  const auto mu_cb = blur(cb, h, w);
  const auto m_aa = blur(aa, h, w);
  const auto m_bb = blur(bb, h, w);
  const auto m_ab = blur(ab, h, w);
  const double c1 = (0.01 * peak) * (0.01 * peak);
  const double c2 = (0.03 * peak) * (0.03 * peak);
  double total = 0.0;
  double carry = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double var_a = m_aa[i] - mu_ca[i] * mu_ca[i];
    const double var_b = m_bb[i] - mu_cb[i] * mu_cb[i];
    const double cov = m_ab[i] - mu_ca[i] * mu_cb[i];
    const double mu_a = shift_a + mu_ca[i];
    const double mu_b = shift_b + mu_cb[i];
    const double luminance = (2.0 * mu_a * mu_b + c1) / (mu_a * mu_a + mu_b * mu_b + c1);
    // Neumaier summation keeps the mean of equal terms exact.
    const double term = luminance * ((2.0 * cov + c2) / (var_a + var_b + c2));
    const double t = total + term;
    carry += std::abs(total) >= std::abs(term) ? (total - t) + term : (term - t) + total;
    total = t;
  }
  return (total + carry) / static_cast<double>(n);
}

void check_pair(const Image& x, const Image& ref) {
  if (!x.same_shape(ref))
    throw ValidationError("metric inputs differ in shape: " + std::to_string(x.height()) + "x" +
                          std::to_string(x.width()) + "x" + std::to_string(x.channels()) +
                          " vs " + std::to_string(ref.height()) + "x" +
                          std::to_string(ref.width()) + "x" + std::to_string(ref.channels()));
  require(!x.empty(), "metric inputs must be nonempty");
}

}  // namespace

double mse(const Image& x, const Image& ref) {
  check_pair(x, ref);
  double sum = 0.0;
  const auto a = x.data();
  const auto b = ref.data();
  for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
  return sum / static_cast<double>(a.size());
}

double psnr(const Image& x, const Image& ref, double peak) {
  require(peak > 0.0, "psnr peak must be > 0");
  const double error = mse(x, ref);
  if (error == 0.0) return kInfinitePsnr;
  return 10.0 * std::log10(peak * peak / error);
}

double ssim(const Image& x, const Image& ref, double peak) {
  check_pair(x, ref);
  require(peak > 0.0, "ssim peak must be > 0");
  if (x.height() < kWindow || x.width() < kWindow)
    throw ValidationError("ssim needs images of at least 11x11 pixels");
  double total = 0.0;
  for (int ch = 0; ch < x.channels(); ++ch) total += ssim_plane(x.channel(ch), ref.channel(ch), peak);
  return total / x.channels();
}

void MetricReport::add(ImageMetrics m) { images.push_back(std::move(m)); }

void MetricReport::finalize() {
  double psnr_sum = 0.0;
  double ssim_sum = 0.0;
  for (const auto& m : images) {
    psnr_sum += m.psnr_db;
    ssim_sum += m.ssim;
  }
  const double n = images.empty() ? 1.0 : static_cast<double>(images.size());
  mean_psnr_db = psnr_sum / n;
  mean_ssim = ssim_sum / n;
}

}  // namespace sotlab
