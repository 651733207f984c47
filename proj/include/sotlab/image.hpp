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

#ifndef SOTLAB_IMAGE_HPP_
#define SOTLAB_IMAGE_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace sotlab {

/// Real-valued raster, row-major with interleaved channels.
///
/// Values are nominally in [0, 1]; intermediate results (residuals, model
/// outputs) may leave that range. Every value must be finite.
class Image {
 public:
  Image() = default;
  Image(int height, int width, int channels = 1, double fill = 0.0);
  Image(int height, int width, int channels, std::vector<double> data);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  int channels() const noexcept { return channels_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(height_) * width_;
  }
  bool empty() const noexcept { return data_.empty(); }

  double& at(int row, int col, int channel = 0) {
    return data_[(static_cast<std::size_t>(row) * width_ + col) * channels_ + channel];
  }
  double at(int row, int col, int channel = 0) const {
    return data_[(static_cast<std::size_t>(row) * width_ + col) * channels_ + channel];
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  /// Copies one channel out as a single-channel image.
  Image channel(int index) const;
  void set_channel(int index, const Image& plane);

  bool same_shape(const Image& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_ &&
           channels_ == other.channels_;
  }
  bool all_finite() const noexcept;

  /// Throws ValidationError naming `what` when any value is NaN or infinite.
  void require_finite(const char* what) const;

  Image& operator+=(const Image& other);
  Image& operator-=(const Image& other);
  Image& operator*=(double scale);

  friend Image operator+(Image lhs, const Image& rhs) { return lhs += rhs; }
  friend Image operator-(Image lhs, const Image& rhs) { return lhs -= rhs; }
  friend Image operator*(Image lhs, double scale) { return lhs *= scale; }
  friend Image operator*(double scale, Image rhs) { return rhs *= scale; }
  friend bool operator==(const Image&, const Image&) = default;

 private:
  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

/// Sum of squared values over all channels.
double squared_norm(const Image& image);

/// Crops the rectangle starting at (row, col).
Image crop(const Image& image, int row, int col, int height, int width);

/// Patches enumerated row-major and anchored at the top-left corner.
std::vector<Image> extract_patches(const Image& image, int patch, int stride);

}  // namespace sotlab

#endif  // SOTLAB_IMAGE_HPP_
