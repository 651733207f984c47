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

#ifndef SOTLAB_NETPBM_HPP_
#define SOTLAB_NETPBM_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sotlab/image.hpp"

namespace sotlab {

/// Binary PGM (P5, one channel) or PPM (P6, three channels), maxval 255.
/// Bytes map linearly: 0..255 <-> 0.0..1.0.
Image decode_netpbm(const std::vector<std::uint8_t>& bytes);

/// Values are clipped to [0, 1] and rounded to the nearest 8-bit level.
std::vector<std::uint8_t> encode_netpbm(const Image& image);

Image read_image(const std::filesystem::path& path);
void write_image(const Image& image, const std::filesystem::path& path);

/// Rounds every value to the nearest k/255 after clipping to [0, 1], which is
/// exactly what a write/read round trip yields.
Image quantize8(const Image& image);

}  // namespace sotlab

#endif  // SOTLAB_NETPBM_HPP_
