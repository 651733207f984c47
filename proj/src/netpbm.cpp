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

#include "sotlab/netpbm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>

#include "sotlab/error.hpp"

namespace sotlab {

namespace {

class HeaderReader {
 public:
  HeaderReader(const std::vector<std::uint8_t>& bytes, std::size_t start)
      : bytes_(bytes), pos_(start) {}

  std::size_t position() const noexcept { return pos_; }

  void skip_whitespace_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto ch = bytes_[pos_];
      if (ch == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(ch)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long read_integer(const char* field) {
    skip_whitespace_and_comments();
    const std::size_t start = pos_;
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000) fail(std::string(field) + " too large", start);
      ++pos_;
    }
    if (pos_ == start) fail(std::string("expected integer for ") + field, start);
    return value;
  }

  [[noreturn]] void fail(const std::string& what, std::size_t at) const {
    throw ValidationError("netpbm: " + what + " at byte " + std::to_string(at));
  }

  void expect_single_whitespace() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_]))
      fail("expected whitespace after maxval", pos_);
    ++pos_;
  }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_;
};

std::uint8_t to_byte(double value) {
  const double clipped = std::clamp(value, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::lround(clipped * 255.0));
}

}  // namespace

Image decode_netpbm(const std::vector<std::uint8_t>& bytes) {
  HeaderReader header(bytes, 2);
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6'))
    header.fail("magic number must be P5 or P6", 0);
  const int channels = bytes[1] == '5' ? 1 : 3;
  const long width = header.read_integer("width");
  const long height = header.read_integer("height");
  const long maxval = header.read_integer("maxval");
  if (width < 1 || height < 1) header.fail("dimensions must be positive", header.position());
  if (maxval != 255)
    header.fail("maxval must be 255, got " + std::to_string(maxval), header.position());
  header.expect_single_whitespace();
  const std::size_t payload_start = header.position();
  const std::size_t expected = static_cast<std::size_t>(width) * height * channels;
  const std::size_t available = bytes.size() - payload_start;
  if (available < expected) {
    throw ValidationError("netpbm: truncated payload, expected " + std::to_string(expected) +
                          " bytes but found " + std::to_string(available) +
                          " starting at byte " + std::to_string(payload_start));
  }
  std::vector<double> data(expected);
  for (std::size_t i = 0; i < expected; ++i) data[i] = bytes[payload_start + i] / 255.0;
  return Image(static_cast<int>(height), static_cast<int>(width), channels, std::move(data));
}

std::vector<std::uint8_t> encode_netpbm(const Image& image) {
  require(!image.empty(), "cannot encode an empty image");
  const std::string header = std::string(image.channels() == 1 ? "P5" : "P6") + "\n" +
                             std::to_string(image.width()) + " " +
                             std::to_string(image.height()) + "\n255\n";
  std::vector<std::uint8_t> bytes(header.begin(), header.end());
  bytes.reserve(bytes.size() + image.size());
  for (double v : image.data()) bytes.push_back(to_byte(v));
  return bytes;
}

Image read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open image " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return decode_netpbm(bytes);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_image(const Image& image, const std::filesystem::path& path) {
  const auto bytes = encode_netpbm(image);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write image " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ValidationError("short write to " + path.string());
}

Image quantize8(const Image& image) {
  Image out = image;
  for (double& v : out.data()) v = to_byte(v) / 255.0;
  return out;
}

}  // namespace sotlab
