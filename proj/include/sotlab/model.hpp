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

#ifndef SOTLAB_MODEL_HPP_
#define SOTLAB_MODEL_HPP_

#include <cstdint>
#include <vector>

#include "sotlab/dft.hpp"
#include "sotlab/image.hpp"

namespace sotlab {

/// Frequency-diagonal restoration map for size x size patches.
///
/// apply: x_hat = K * idft2(G . dft2(y)), per channel, where G holds one
/// complex gain per DFT coefficient (kept Hermitian so the output is real)
/// and K is an optional k x k correlation kernel (k in {3, 5}; 0 disables it)
/// applied with mirror padding that does not repeat the edge sample.
class RestorationModel {
 public:
  RestorationModel() = default;
  /// Identity model: unit gains, delta kernel when enabled.
  RestorationModel(int size, int kernel_size = 0);

  /// Identity plus a seeded complex Gaussian perturbation of the gains with
  /// per-component standard deviation `sigma`, projected to Hermitian form.
  static RestorationModel perturbed(int size, int kernel_size, double sigma, std::uint64_t seed);

  int size() const noexcept { return size_; }
  int kernel_size() const noexcept { return kernel_size_; }
  bool has_kernel() const noexcept { return kernel_size_ > 0; }

  std::vector<Complex>& gains() noexcept { return gains_; }
  const std::vector<Complex>& gains() const noexcept { return gains_; }
  Complex& gain(int u, int v) { return gains_[static_cast<std::size_t>(u) * size_ + v]; }
  Complex gain(int u, int v) const { return gains_[static_cast<std::size_t>(u) * size_ + v]; }
  std::vector<double>& kernel() noexcept { return kernel_; }
  const std::vector<double>& kernel() const noexcept { return kernel_; }

  /// Replaces G(u) and G(-u) by their Hermitian average.
  void project_hermitian();
  double hermitian_defect() const;
  /// max |G(u) - 1|.
  double max_gain_deviation() const;
  bool all_finite() const noexcept;

  friend bool operator==(const RestorationModel&, const RestorationModel&) = default;

 private:
  int size_ = 0;
  int kernel_size_ = 0;
  std::vector<Complex> gains_;
  std::vector<double> kernel_;
};

/// Intermediate values of one forward pass, kept for the backward pass.
struct ForwardTrace {
  std::vector<Spectrum> input_spectra;  ///< dft2(y) per channel
  std::vector<Image> filtered;          ///< idft2(G . Y) per channel, before the kernel
  Image output;
};

ForwardTrace forward(const RestorationModel& model, const Image& y);

/// x_hat = f(y). The image must be model.size() square.
Image apply_model(const RestorationModel& model, const Image& y);

/// Tiled inference: splits the image into non-overlapping model-size tiles,
/// applies the model to each and reassembles them.
Image restore(const RestorationModel& model, const Image& image);

/// Mirror index without edge repetition: -1 -> 1, n -> n - 2.
int mirror_index(int i, int n);

/// k x k correlation with mirror padding; kernel row-major.
Image correlate(const Image& plane, const std::vector<double>& kernel, int k);

/// Adjoint of correlate() with respect to its input plane.
Image correlate_adjoint(const Image& grad_out, const std::vector<double>& kernel, int k);

}  // namespace sotlab

#endif  // SOTLAB_MODEL_HPP_
