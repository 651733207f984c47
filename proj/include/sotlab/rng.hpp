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

#ifndef SOTLAB_RNG_HPP_
#define SOTLAB_RNG_HPP_

#include <cstdint>
#include <random>

namespace sotlab {

/// Platform-independent random source.
///
/// Raw bits come from std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. The conversions below are written out by hand because the
/// standard distributions are implementation-defined:
///   uniform()      -> (bits >> 11) * 2^-53, in [0, 1)
///   uniform_int(n) -> rejection sampling on the top bits, unbiased
///   normal()       -> Box-Muller, cosine branch only, one draw pair per call
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n); n must be positive.
  std::uint64_t uniform_int(std::uint64_t n);
  double normal();

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer over (seed, stream); used to derive independent
/// per-image and per-iteration seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace sotlab

#endif  // SOTLAB_RNG_HPP_
