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

#include "sotlab/dft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sotlab/error.hpp"

namespace sotlab {

namespace detail {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// exp(sign * 2 pi i k / n) for k < n, each from its exact angle.
std::vector<Complex> twiddle_table(std::size_t n, bool inverse) {
  const double sign = inverse ? 1.0 : -1.0;
  std::vector<Complex> table(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double angle =
        sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    table[k] = Complex(std::cos(angle), std::sin(angle));
  }
  return table;
}

// Plain product; std::complex operator* adds inf/nan recovery we do not need.
inline Complex multiply(Complex a, Complex b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

void fft_radix2(std::span<Complex> a, const std::vector<Complex>& twiddle) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const Complex even = a[start + k];
        const Complex odd = multiply(a[start + k + half], twiddle[k * stride]);
        a[start + k] = even + odd;
        a[start + k + half] = even - odd;
      }
    }
  }
}

void dft_direct(std::span<Complex> a, const std::vector<Complex>& twiddle) {
  const std::size_t n = a.size();
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += multiply(a[j], twiddle[(k * j) % n]);
    out[k] = sum;
  }
  std::copy(out.begin(), out.end(), a.begin());
}

void transform(std::span<Complex> data, const std::vector<Complex>& twiddle) {
  if (is_power_of_two(data.size())) {
    fft_radix2(data, twiddle);
  } else {
    dft_direct(data, twiddle);
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(data.size()));
  for (Complex& c : data) c *= scale;
}

}  // namespace

void dft1(std::span<Complex> data, bool inverse) {
  if (data.empty()) return;
  transform(data, twiddle_table(data.size(), inverse));
}

void dft2_inplace(std::span<Complex> data, int height, int width, bool inverse) {
  const auto row_twiddle = twiddle_table(static_cast<std::size_t>(width), inverse);
  for (int r = 0; r < height; ++r)
    transform(data.subspan(static_cast<std::size_t>(r) * width, width), row_twiddle);
  const auto column_twiddle = twiddle_table(static_cast<std::size_t>(height), inverse);
  std::vector<Complex> column(height);
  for (int c = 0; c < width; ++c) {
    for (int r = 0; r < height; ++r) column[r] = data[static_cast<std::size_t>(r) * width + c];
    transform(column, column_twiddle);
    for (int r = 0; r < height; ++r) data[static_cast<std::size_t>(r) * width + c] = column[r];
  }
}

}  // namespace detail

double Spectrum::hermitian_defect() const {
  double defect = 0.0;
  for (int u = 0; u < height; ++u) {
    for (int v = 0; v < width; ++v) {
      const Complex mirror = at((height - u) % height, (width - v) % width);
      defect = std::max(defect, std::abs(at(u, v) - std::conj(mirror)));
    }
  }
  return defect;
}

Spectrum dft2(const Image& image) {
  require(image.channels() == 1, "dft2 expects a single-channel image");
  image.require_finite("dft2 input");
  Spectrum spectrum(image.height(), image.width());
  const auto pixels = image.data();
  for (std::size_t i = 0; i < pixels.size(); ++i) spectrum.coefficients[i] = pixels[i];
  detail::dft2_inplace(spectrum.coefficients, spectrum.height, spectrum.width, false);
  return spectrum;
}

Image idft2_real(const Spectrum& spectrum) {
  require(spectrum.height >= 1 && spectrum.width >= 1, "spectrum dimensions must be positive");
  std::vector<Complex> work = spectrum.coefficients;
  detail::dft2_inplace(work, spectrum.height, spectrum.width, true);
  Image image(spectrum.height, spectrum.width, 1);
  auto pixels = image.data();
  for (std::size_t i = 0; i < work.size(); ++i) pixels[i] = work[i].real();
  return image;
}

Image idft2(const Spectrum& spectrum) {
  require(spectrum.height >= 1 && spectrum.width >= 1, "spectrum dimensions must be positive");
  double peak = 1.0;
  for (const Complex& c : spectrum.coefficients) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw ValidationError("idft2: non-finite spectrum coefficient");
    peak = std::max(peak, std::abs(c));
  }
  const double defect = spectrum.hermitian_defect();
  if (defect > 1e-6 * peak) {
    throw ValidationError("idft2: spectrum is not Hermitian-symmetric (defect " +
                          std::to_string(defect) + ")");
  }
  return idft2_real(spectrum);
}

}  // namespace sotlab
