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

#include "sotlab/train.hpp"

#include <cmath>
#include <cstdio>

#include "sotlab/costs.hpp"
#include "sotlab/error.hpp"
#include "sotlab/rng.hpp"

namespace sotlab {

namespace {

constexpr int kFeaturePatch = 8;

void check_batches(const RestorationModel& model, std::span<const Image> batch_y,
                   std::span<const Image> batch_x) {
  require(!batch_y.empty(), "objective needs a nonempty degraded batch");
  require(!batch_x.empty(), "objective needs a nonempty clean batch");
  const Image& ref = batch_y.front();
  for (const Image& y : batch_y)
    require(y.same_shape(ref) && y.height() == model.size() && y.width() == model.size(),
            "degraded batch images must match the model size");
  for (const Image& x : batch_x)
    require(x.same_shape(ref), "clean batch images must match the degraded batch shape");
}

/// Scatters per-feature gradients back onto image-shaped gradients.
std::vector<Image> unfeature(const std::vector<Point>& grads, const std::vector<Image>& like,
                             FeatureKind kind) {
  std::vector<Image> out;
  out.reserve(like.size());
  std::size_t next = 0;
  for (const Image& img : like) {
    Image g(img.height(), img.width(), img.channels());
    if (kind == FeatureKind::kPixels) {
      std::copy(grads[next].begin(), grads[next].end(), g.data().begin());
      ++next;
    } else {
      for (int r0 = 0; r0 + kFeaturePatch <= img.height(); r0 += kFeaturePatch)
        for (int c0 = 0; c0 + kFeaturePatch <= img.width(); c0 += kFeaturePatch) {
          const Point& p = grads[next++];
          std::size_t k = 0;
          for (int r = 0; r < kFeaturePatch; ++r)
            for (int c = 0; c < kFeaturePatch; ++c)
              for (int ch = 0; ch < img.channels(); ++ch) g.at(r0 + r, c0 + c, ch) = p[k++];
        }
    }
    out.push_back(std::move(g));
  }
  return out;
}

double fidelity_of(const Image& out, const Image& y, const TrainConfig& cfg) {
  const Image residual = out - y;
  double total = 0.0;
  for (int ch = 0; ch < residual.channels(); ++ch)
    total += complex_lq(dft2(residual.channel(ch)), cfg.q, cfg.eps);
  return total;
}

double current_learning_rate(const TrainConfig& cfg, int iteration) {
  if (cfg.schedule == LearningRateSchedule::kLinearDecay)
    return cfg.learning_rate * (1.0 - static_cast<double>(iteration) / cfg.iterations);
  return cfg.learning_rate;
}

}  // namespace

std::string to_string(FeatureKind kind) {
  return kind == FeatureKind::kPixels ? "pixels" : "patches-of-8";
}

FeatureKind feature_kind_from_string(const std::string& name) {
  if (name == "pixels") return FeatureKind::kPixels;
  if (name == "patches-of-8") return FeatureKind::kPatches8;
  throw ValidationError("unknown feature kind '" + name + "'");
}

std::string to_string(LearningRateSchedule schedule) {
  return schedule == LearningRateSchedule::kConstant ? "constant" : "linear-decay";
}

LearningRateSchedule schedule_from_string(const std::string& name) {
  if (name == "constant") return LearningRateSchedule::kConstant;
  if (name == "linear-decay") return LearningRateSchedule::kLinearDecay;
  throw ValidationError("unknown learning-rate schedule '" + name + "'");
}

void TrainConfig::validate() const {
  require(q == 0.5 || q == 1.0 || q == 2.0, "train: q must be one of 0.5, 1, 2");
  require(std::isfinite(eps) && eps >= 0.0, "train: eps must be >= 0");
  require(q == 2.0 || eps > 0.0, "train: eps must be > 0 when q < 2");
  require(std::isfinite(lambda) && lambda >= 0.0, "train: lambda must be >= 0");
  require(std::isfinite(learning_rate) && learning_rate > 0.0, "train: learning rate must be > 0");
  require(batch_size >= 1, "train: batch size must be positive");
  require(iterations >= 0, "train: iterations must be >= 0");
  require(model_size >= 2 && model_size <= 256, "train: model size must lie in [2, 256]");
  require(kernel_size == 0 || kernel_size == 3 || kernel_size == 5,
          "train: kernel size must be 0, 3 or 5");
  require(init_sigma >= 0.0, "train: init sigma must be >= 0");
  require(feature == FeatureKind::kPixels || model_size % kFeaturePatch == 0,
          "train: patches-of-8 features need a model size divisible by 8");
}

std::string TrainConfig::label() const {
  char buf[128];
  if (ot_baseline()) {
    std::snprintf(buf, sizeof buf, "OT baseline (q=2, lambda=%g)", lambda);
  } else {
    std::snprintf(buf, sizeof buf, "SOT (q=%g, eps=%g, lambda=%g)", q, eps, lambda);
  }
  return buf;
}

std::vector<Point> features(std::span<const Image> images, FeatureKind kind) {
  std::vector<Point> out;
  for (const Image& img : images) {
    if (kind == FeatureKind::kPixels) {
      out.emplace_back(img.data().begin(), img.data().end());
      continue;
    }
    require(img.height() % kFeaturePatch == 0 && img.width() % kFeaturePatch == 0,
            "patches-of-8 features need dimensions divisible by 8");
    for (const Image& patch : extract_patches(img, kFeaturePatch, kFeaturePatch))
      out.emplace_back(patch.data().begin(), patch.data().end());
  }
  return out;
}

Objective sot_objective(const RestorationModel& model, std::span<const Image> batch_y,
                        std::span<const Image> batch_x, const TrainConfig& cfg) {
  check_batches(model, batch_y, batch_x);
  require(valid_lq_exponent(cfg.q) && cfg.eps >= 0.0, "objective: invalid q or eps");
  Objective obj;
  std::vector<Image> outputs;
  outputs.reserve(batch_y.size());
  for (const Image& y : batch_y) {
    outputs.push_back(apply_model(model, y));
    obj.fidelity += fidelity_of(outputs.back(), y, cfg);
  }
  obj.fidelity /= static_cast<double>(batch_y.size());
  obj.divergence = energy_distance(features(outputs, cfg.feature), features(batch_x, cfg.feature));
  obj.total = obj.fidelity + cfg.lambda * obj.divergence;
  return obj;
}

ObjectiveGradient sot_gradient(const RestorationModel& model, std::span<const Image> batch_y,
                               std::span<const Image> batch_x, const TrainConfig& cfg) {
  check_batches(model, batch_y, batch_x);
  require(cfg.q != 0.0, "sot_gradient: q = 0 has no gradient");
  require(valid_lq_exponent(cfg.q), "sot_gradient: invalid q");
  require(cfg.q == 2.0 || cfg.eps > 0.0, "sot_gradient: eps must be > 0 when q < 2");

  const std::size_t batch = batch_y.size();
  const double inv_batch = 1.0 / static_cast<double>(batch);
  std::vector<ForwardTrace> traces;
  std::vector<Image> outputs;
  traces.reserve(batch);
  outputs.reserve(batch);
  for (const Image& y : batch_y) {
    traces.push_back(forward(model, y));
    outputs.push_back(traces.back().output);
  }

  ObjectiveGradient result;
  std::vector<Image> divergence_grads;
  if (cfg.lambda > 0.0) {
    std::vector<Point> grad_features;
    result.value.divergence = energy_distance_grad(features(outputs, cfg.feature),
                                                   features(batch_x, cfg.feature), grad_features);
    divergence_grads = unfeature(grad_features, outputs, cfg.feature);
  } else {
    result.value.divergence =
        energy_distance(features(outputs, cfg.feature), features(batch_x, cfg.feature));
  }

  const int n = model.size();
  const int k = model.kernel_size();
  result.gradient.gains.assign(model.gains().size(), Complex(0.0, 0.0));
  result.gradient.kernel.assign(model.kernel().size(), 0.0);
  for (std::size_t b = 0; b < batch; ++b) {
    const Image residual = outputs[b] - batch_y[b];
    for (int ch = 0; ch < residual.channels(); ++ch) {
      const Spectrum r_spec = dft2(residual.channel(ch));
      result.value.fidelity += complex_lq(r_spec, cfg.q, cfg.eps);
      // dL/d(output) for this channel: fidelity part through the unitary DFT
      // (its adjoint is the inverse DFT) plus the divergence part.
      Image grad_out = idft2_real(complex_lq_grad(r_spec, cfg.q, cfg.eps));
      grad_out *= inv_batch;
      if (!divergence_grads.empty()) {
        const Image div = divergence_grads[b].channel(ch);
        for (std::size_t p = 0; p < grad_out.size(); ++p)
          grad_out.data()[p] += cfg.lambda * div.data()[p];
      }
      Image grad_filtered = grad_out;
      if (model.has_kernel()) {
        const Image& z = traces[b].filtered[ch];
        const int c = k / 2;
        for (int a = 0; a < k; ++a)
          for (int bb = 0; bb < k; ++bb) {
            double sum = 0.0;
            for (int i = 0; i < n; ++i)
              for (int j = 0; j < n; ++j)
                sum += grad_out.at(i, j) * z.at(mirror_index(i + a - c, n), mirror_index(j + bb - c, n));
            result.gradient.kernel[static_cast<std::size_t>(a) * k + bb] += sum;
          }
        grad_filtered = correlate_adjoint(grad_out, model.kernel(), k);
      }
      const Spectrum g_spec = dft2(grad_filtered);
      const Spectrum& y_spec = traces[b].input_spectra[ch];
      for (std::size_t idx = 0; idx < g_spec.size(); ++idx)
        result.gradient.gains[idx] += std::conj(y_spec.coefficients[idx]) * g_spec.coefficients[idx];
    }
  }
  result.value.fidelity *= inv_batch;
  result.value.total = result.value.fidelity + cfg.lambda * result.value.divergence;
  return result;
}

std::vector<Image> tile_pool(std::span<const Image> pool, int size) {
  std::vector<Image> tiles;
  for (const Image& img : pool) {
    require(img.height() >= size && img.width() >= size,
            "pool image smaller than the model size");
    for (Image& tile : extract_patches(img, size, size)) tiles.push_back(std::move(tile));
  }
  return tiles;
}

TrainResult train(const TrainConfig& cfg, std::span<const Image> degraded_pool,
                  std::span<const Image> clean_pool, std::optional<RestorationModel> start,
                  int start_iteration) {
  cfg.validate();
  require(!degraded_pool.empty(), "train: degraded pool is empty");
  require(!clean_pool.empty(), "train: clean pool is empty");
  require(start_iteration >= 0 && start_iteration <= cfg.iterations,
          "train: start iteration outside the schedule");
  const std::vector<Image> ys = tile_pool(degraded_pool, cfg.model_size);
  const std::vector<Image> xs = tile_pool(clean_pool, cfg.model_size);

  TrainResult result;
  result.model = start ? *start
                       : RestorationModel::perturbed(cfg.model_size, cfg.kernel_size,
                                                     cfg.init_sigma, derive_seed(cfg.seed, ~0ull));
  require(result.model.size() == cfg.model_size && result.model.kernel_size() == cfg.kernel_size,
          "train: starting model does not match the configuration");
  result.iterations_completed = start_iteration;

  std::vector<Image> batch_y(cfg.batch_size);
  std::vector<Image> batch_x(cfg.batch_size);
  // Model whose objective last evaluated finite, and the step count it had.
  std::optional<RestorationModel> last_good;
  for (int t = start_iteration; t < cfg.iterations; ++t) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(t)));
    for (auto& y : batch_y) y = ys[rng.uniform_int(ys.size())];
    for (auto& x : batch_x) x = xs[rng.uniform_int(xs.size())];

    const ObjectiveGradient og = sot_gradient(result.model, batch_y, batch_x, cfg);
    const Objective& v = og.value;
    bool finite = std::isfinite(v.total) && std::isfinite(v.fidelity) && std::isfinite(v.divergence);
    for (const Complex& g : og.gradient.gains)
      finite = finite && std::isfinite(g.real()) && std::isfinite(g.imag());
    if (!finite) {
      result.status = TrainStatus::kDiverged;
      result.message = "non-finite objective at iteration " + std::to_string(t);
      if (last_good) {
        result.model = *last_good;
        result.iterations_completed = t - 1;
      }
      return result;
    }
    last_good = result.model;
    result.log.push_back({t, v.fidelity, v.divergence, v.total});

    RestorationModel next = result.model;
    const double lr = current_learning_rate(cfg, t);
    for (std::size_t i = 0; i < next.gains().size(); ++i) next.gains()[i] -= lr * og.gradient.gains[i];
    for (std::size_t i = 0; i < next.kernel().size(); ++i) next.kernel()[i] -= lr * og.gradient.kernel[i];
    next.project_hermitian();
    if (!next.all_finite()) {
      result.status = TrainStatus::kDiverged;
      result.message = "non-finite parameters after iteration " + std::to_string(t);
      result.iterations_completed = t;
      return result;
    }
    result.model = std::move(next);
    result.iterations_completed = t + 1;
  }
  return result;
}

}  // namespace sotlab
