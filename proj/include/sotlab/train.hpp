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

#ifndef SOTLAB_TRAIN_HPP_
#define SOTLAB_TRAIN_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sotlab/image.hpp"
#include "sotlab/model.hpp"
#include "sotlab/transport.hpp"

namespace sotlab {

/// How restored and clean images are embedded for the divergence term.
enum class FeatureKind {
  kPixels,    ///< one vector per image (all pixels and channels)
  kPatches8,  ///< non-overlapping 8x8 patches, one vector each
};

std::string to_string(FeatureKind kind);
FeatureKind feature_kind_from_string(const std::string& name);

enum class LearningRateSchedule {
  kConstant,
  kLinearDecay,  ///< lr * (1 - t / iterations)
};

std::string to_string(LearningRateSchedule schedule);
LearningRateSchedule schedule_from_string(const std::string& name);

/// Hyper-parameters of the fidelity + lambda * divergence objective.
///
/// q = 2 turns the frequency fidelity into the plain squared l2 distance to
/// the input, i.e. the ordinary OT baseline.
struct TrainConfig {
  double q = 1.0;
  double eps = 1e-4;
  double lambda = 1.0;
  double learning_rate = 1e-3;
  LearningRateSchedule schedule = LearningRateSchedule::kConstant;
  int batch_size = 8;
  int iterations = 200;
  std::uint64_t seed = 0;
  FeatureKind feature = FeatureKind::kPixels;
  int model_size = 32;
  int kernel_size = 0;
  double init_sigma = 0.01;

  void validate() const;
  bool ot_baseline() const noexcept { return q == 2.0; }
  std::string label() const;
};

struct Objective {
  double total = 0.0;
  double fidelity = 0.0;    ///< batch mean of complex_lq(dft2(f(y) - y), q, eps)
  double divergence = 0.0;  ///< energy distance between restored and clean features
};

/// Gradient in the embedding of the gains as independent complex numbers:
/// entry k packs dL/dRe G_k + i dL/dIm G_k. It is itself Hermitian, so a
/// descent step keeps the gains Hermitian.
struct ModelGradient {
  std::vector<Complex> gains;
  std::vector<double> kernel;
};

struct ObjectiveGradient {
  Objective value;
  ModelGradient gradient;
};

std::vector<Point> features(std::span<const Image> images, FeatureKind kind);

Objective sot_objective(const RestorationModel& model, std::span<const Image> batch_y,
                        std::span<const Image> batch_x, const TrainConfig& cfg);

/// Analytic gradient of sot_objective. Rejects q = 0 and eps = 0 with q < 2.
ObjectiveGradient sot_gradient(const RestorationModel& model, std::span<const Image> batch_y,
                               std::span<const Image> batch_x, const TrainConfig& cfg);

struct LogRow {
  int iteration = 0;
  double fidelity = 0.0;
  double divergence = 0.0;
  double total = 0.0;
};

enum class TrainStatus { kCompleted, kDiverged };

struct TrainResult {
  RestorationModel model;
  std::vector<LogRow> log;
  TrainStatus status = TrainStatus::kCompleted;
  int iterations_completed = 0;  ///< steps applied to `model`, counting from zero
  std::string message;
};

/// Splits every pool image into non-overlapping model-size tiles.
std::vector<Image> tile_pool(std::span<const Image> pool, int size);

/// Minibatch gradient descent on the objective.
///
/// Iteration t draws its minibatches (with replacement, independently from
/// each pool) from an Rng seeded by derive_seed(cfg.seed, t), evaluates the
/// objective and gradient, logs the values and takes one step. Resuming from
/// (start, start_iteration) therefore continues an unbroken run exactly.
/// A non-finite objective aborts with the last model whose objective was
/// finite.
TrainResult train(const TrainConfig& cfg, std::span<const Image> degraded_pool,
                  std::span<const Image> clean_pool,
                  std::optional<RestorationModel> start = std::nullopt, int start_iteration = 0);

}  // namespace sotlab

#endif  // SOTLAB_TRAIN_HPP_
