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

#ifndef SOTLAB_DFT_HPP_
#define SOTLAB_DFT_HPP_

#include <complex>
#include <span>
#include <vector>

#include "sotlab/image.hpp"

namespace sotlab {

using Complex = std::complex<double>;

/// Complex H x W array holding the unitary 2-D DFT of a single-channel image.
///
/// Both directions are scaled by 1/sqrt(H*W), so Parseval holds with no
/// extra factor: sum |X(u,v)|^2 == sum x(r,c)^2.
struct Spectrum {
  int height = 0;
  int width = 0;
  std::vector<Complex> coefficients;

  static constexpr const char* kNormalization = "unitary";

  Spectrum() = default;
  Spectrum(int h, int w) : height(h), width(w), coefficients(static_cast<std::size_t>(h) * w) {}

  Complex& at(int u, int v) { return coefficients[static_cast<std::size_t>(u) * width + v]; }
  Complex at(int u, int v) const { return coefficients[static_cast<std::size_t>(u) * width + v]; }
  std::size_t size() const noexcept { return coefficients.size(); }

  /// Largest |X(u,v) - conj(X(-u,-v))|.
  double hermitian_defect() const;
};

/// Forward unitary DFT of a single-channel image.
Spectrum dft2(const Image& image);

/// Inverse unitary DFT. Rejects spectra that are not Hermitian-symmetric
/// (defect above 1e-6 relative to the largest magnitude, floor 1).
Image idft2(const Spectrum& spectrum);

/// Inverse DFT keeping only the real part; no symmetry check.
Image idft2_real(const Spectrum& spectrum);

namespace detail {

/// In-place unitary 1-D DFT. Radix-2 for powers of two, direct otherwise.
void dft1(std::span<Complex> data, bool inverse);

/// In-place unitary 2-D DFT of a row-major H x W array.
void dft2_inplace(std::span<Complex> data, int height, int width, bool inverse);

}  // namespace detail

}  // namespace sotlab

#endif  // SOTLAB_DFT_HPP_
