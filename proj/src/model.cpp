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

#include "sotlab/model.hpp"

#include <algorithm>
#include <cmath>

#include "sotlab/error.hpp"
#include "sotlab/rng.hpp"

namespace sotlab {

RestorationModel::RestorationModel(int size, int kernel_size)
    : size_(size), kernel_size_(kernel_size) {
  require(size >= 2 && size <= 256, "model size must lie in [2, 256]");
  require(kernel_size == 0 || kernel_size == 3 || kernel_size == 5,
          "kernel size must be 0, 3 or 5");
  require(kernel_size == 0 || size >= kernel_size, "model size must be at least the kernel size");
  gains_.assign(static_cast<std::size_t>(size) * size, Complex(1.0, 0.0));
  if (kernel_size > 0) {
    kernel_.assign(static_cast<std::size_t>(kernel_size) * kernel_size, 0.0);
    kernel_[kernel_.size() / 2] = 1.0;
  }
}

RestorationModel RestorationModel::perturbed(int size, int kernel_size, double sigma,
                                             std::uint64_t seed) {
  require(sigma >= 0.0, "perturbation sigma must be >= 0");
  RestorationModel model(size, kernel_size);
  Rng rng(seed);
  for (Complex& g : model.gains_) {
    const double re = rng.normal();
    const double im = rng.normal();
    g += sigma * Complex(re, im);
  }
  model.project_hermitian();
  return model;
}

void RestorationModel::project_hermitian() {
  const int n = size_;
  std::vector<Complex> sym(gains_.size());
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      const Complex mirror = gain((n - u) % n, (n - v) % n);
      sym[static_cast<std::size_t>(u) * n + v] = 0.5 * (gain(u, v) + std::conj(mirror));
    }
  gains_ = std::move(sym);
}

double RestorationModel::hermitian_defect() const {
  const int n = size_;
  double defect = 0.0;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      defect = std::max(defect, std::abs(gain(u, v) - std::conj(gain((n - u) % n, (n - v) % n))));
  return defect;
}

double RestorationModel::max_gain_deviation() const {
  double worst = 0.0;
  for (const Complex& g : gains_) worst = std::max(worst, std::abs(g - 1.0));
  return worst;
}

bool RestorationModel::all_finite() const noexcept {
  for (const Complex& g : gains_)
    if (!std::isfinite(g.real()) || !std::isfinite(g.imag())) return false;
  for (double k : kernel_)
    if (!std::isfinite(k)) return false;
  return true;
}

int mirror_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * n - 2;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

Image correlate(const Image& plane, const std::vector<double>& kernel, int k) {
  const int h = plane.height();
  const int w = plane.width();
  const int c = k / 2;
  Image out(h, w, 1);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) {
      double sum = 0.0;
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
          sum += kernel[static_cast<std::size_t>(a) * k + b] *
                 plane.at(mirror_index(i + a - c, h), mirror_index(j + b - c, w));
      out.at(i, j) = sum;
    }
  return out;
}

Image correlate_adjoint(const Image& grad_out, const std::vector<double>& kernel, int k) {
  const int h = grad_out.height();
  const int w = grad_out.width();
  const int c = k / 2;
  Image grad_in(h, w, 1);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) {
      const double g = grad_out.at(i, j);
      if (g == 0.0) continue;
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
          grad_in.at(mirror_index(i + a - c, h), mirror_index(j + b - c, w)) +=
              kernel[static_cast<std::size_t>(a) * k + b] * g;
    }
  return grad_in;
}

ForwardTrace forward(const RestorationModel& model, const Image& y) {
  const int n = model.size();
  if (y.height() != n || y.width() != n)
    throw ValidationError("model expects " + std::to_string(n) + "x" + std::to_string(n) +
                          " input, got " + std::to_string(y.height()) + "x" +
                          std::to_string(y.width()));
  ForwardTrace trace;
  trace.output = Image(n, n, y.channels());
  for (int ch = 0; ch < y.channels(); ++ch) {
    Spectrum spectrum = dft2(y.channel(ch));
    Spectrum filtered = spectrum;
    for (std::size_t k = 0; k < filtered.size(); ++k) filtered.coefficients[k] *= model.gains()[k];
    Image plane = idft2_real(filtered);
    trace.output.set_channel(ch, model.has_kernel()
                                     ? correlate(plane, model.kernel(), model.kernel_size())
                                     : plane);
    trace.input_spectra.push_back(std::move(spectrum));
    trace.filtered.push_back(std::move(plane));
  }
  return trace;
}

Image apply_model(const RestorationModel& model, const Image& y) {
  return forward(model, y).output;
}

Image restore(const RestorationModel& model, const Image& image) {
  const int n = model.size();
  if (image.height() % n != 0 || image.width() % n != 0) {
    const int pad_h = (n - image.height() % n) % n;
    const int pad_w = (n - image.width() % n) % n;
    throw ValidationError("restore: image " + std::to_string(image.height()) + "x" +
                          std::to_string(image.width()) + " is not divisible into " +
                          std::to_string(n) + "x" + std::to_string(n) + " tiles; pad by " +
                          std::to_string(pad_h) + " rows and " + std::to_string(pad_w) +
                          " columns");
  }
  Image out(image.height(), image.width(), image.channels());
  for (int r0 = 0; r0 < image.height(); r0 += n)
    for (int c0 = 0; c0 < image.width(); c0 += n) {
      const Image tile = apply_model(model, crop(image, r0, c0, n, n));
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
          for (int ch = 0; ch < image.channels(); ++ch) out.at(r0 + r, c0 + c, ch) = tile.at(r, c, ch);
    }
  return out;
}

}  // namespace sotlab
