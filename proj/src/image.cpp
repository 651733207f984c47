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

#include "sotlab/image.hpp"

#include <cmath>
#include <string>

#include "sotlab/error.hpp"

namespace sotlab {

namespace {

void check_shape(int height, int width, int channels) {
  require(height >= 1 && width >= 1, "image dimensions must be positive");
  require(channels == 1 || channels == 3, "image must have 1 or 3 channels");
}

}  // namespace

Image::Image(int height, int width, int channels, double fill)
    : height_(height), width_(width), channels_(channels) {
  check_shape(height, width, channels);
  data_.assign(static_cast<std::size_t>(height) * width * channels, fill);
}

Image::Image(int height, int width, int channels, std::vector<double> data)
    : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
  check_shape(height, width, channels);
  require(data_.size() == static_cast<std::size_t>(height) * width * channels,
          "image data length must equal height*width*channels");
}

Image Image::channel(int index) const {
  require(index >= 0 && index < channels_, "channel index out of range");
  Image plane(height_, width_, 1);
  const std::size_t n = pixel_count();
  for (std::size_t p = 0; p < n; ++p) plane.data_[p] = data_[p * channels_ + index];
  return plane;
}

void Image::set_channel(int index, const Image& plane) {
  require(index >= 0 && index < channels_, "channel index out of range");
  require(plane.channels_ == 1 && plane.height_ == height_ && plane.width_ == width_,
          "channel plane shape mismatch");
  const std::size_t n = pixel_count();
  for (std::size_t p = 0; p < n; ++p) data_[p * channels_ + index] = plane.data_[p];
}

bool Image::all_finite() const noexcept {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void Image::require_finite(const char* what) const {
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw ValidationError(std::string(what) + ": non-finite value at index " +
                            std::to_string(i));
    }
  }
}

Image& Image::operator+=(const Image& other) {
  require(same_shape(other), "image shape mismatch in addition");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Image& Image::operator-=(const Image& other) {
  require(same_shape(other), "image shape mismatch in subtraction");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Image& Image::operator*=(double scale) {
  for (double& v : data_) v *= scale;
  return *this;
}

double squared_norm(const Image& image) {
  double sum = 0.0;
  for (double v : image.data()) sum += v * v;
  return sum;
}

Image crop(const Image& image, int row, int col, int height, int width) {
  require(row >= 0 && col >= 0 && row + height <= image.height() &&
              col + width <= image.width(),
          "crop rectangle outside image");
  Image out(height, width, image.channels());
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c)
      for (int ch = 0; ch < image.channels(); ++ch)
        out.at(r, c, ch) = image.at(row + r, col + c, ch);
  return out;
}

std::vector<Image> extract_patches(const Image& image, int patch, int stride) {
  require(patch >= 1 && stride >= 1, "patch and stride must be positive");
  if (patch > image.height() || patch > image.width()) {
    throw ValidationError("patch size " + std::to_string(patch) +
                          " exceeds image dimensions " + std::to_string(image.height()) +
                          "x" + std::to_string(image.width()));
  }
  const int rows = (image.height() - patch) / stride + 1;
  const int cols = (image.width() - patch) / stride + 1;
  std::vector<Image> patches;
  patches.reserve(static_cast<std::size_t>(rows) * cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      patches.push_back(crop(image, i * stride, j * stride, patch, patch));
  return patches;
}

}  // namespace sotlab
