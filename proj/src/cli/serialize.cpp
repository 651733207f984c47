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

#include "cli/serialize.hpp"

#include <cmath>
#include <cstdio>

#include "sotlab/error.hpp"

namespace sotlab::cli {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

Json json_number(double value) {
  if (std::isfinite(value)) return value;
  return format_double(value);
}

double number_from_json(const Json& value) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    const std::string s = value.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
  }
  throw ValidationError("expected a number, got " + value.dump());
}

Json to_json(const TrainConfig& cfg) {
  return Json{{"q", cfg.q},
              {"eps", cfg.eps},
              {"lambda", cfg.lambda},
              {"learning_rate", cfg.learning_rate},
              {"schedule", to_string(cfg.schedule)},
              {"batch_size", cfg.batch_size},
              {"iterations", cfg.iterations},
              {"seed", cfg.seed},
              {"feature", to_string(cfg.feature)},
              {"model_size", cfg.model_size},
              {"kernel_size", cfg.kernel_size},
              {"init_sigma", cfg.init_sigma}};
}

TrainConfig train_config_from_json(const Json& doc) {
  TrainConfig cfg;
  try {
    cfg.q = doc.at("q").get<double>();
    cfg.eps = doc.at("eps").get<double>();
    cfg.lambda = doc.at("lambda").get<double>();
    cfg.learning_rate = doc.at("learning_rate").get<double>();
    cfg.schedule = schedule_from_string(doc.at("schedule").get<std::string>());
    cfg.batch_size = doc.at("batch_size").get<int>();
    cfg.iterations = doc.at("iterations").get<int>();
    cfg.seed = doc.at("seed").get<std::uint64_t>();
    cfg.feature = feature_kind_from_string(doc.at("feature").get<std::string>());
    cfg.model_size = doc.at("model_size").get<int>();
    cfg.kernel_size = doc.at("kernel_size").get<int>();
    cfg.init_sigma = doc.at("init_sigma").get<double>();
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed training config: ") + e.what());
  }
  return cfg;
}

Json to_json(const RestorationModel& model) {
  Json gains = Json::array();
  for (const Complex& g : model.gains()) {
    gains.push_back(g.real());
    gains.push_back(g.imag());
  }
  return Json{{"size", model.size()},
              {"kernel_size", model.kernel_size()},
              {"gains", gains},
              {"kernel", model.kernel()}};
}

RestorationModel model_from_json(const Json& doc) {
  try {
    const int size = doc.at("size").get<int>();
    const int kernel_size = doc.at("kernel_size").get<int>();
    require(size > 0, "model size must be positive");
    require(kernel_size >= 0, "model kernel size must be non-negative");
    RestorationModel model(size, kernel_size);
    const auto gains = doc.at("gains").get<std::vector<double>>();
    require(gains.size() == 2 * model.gains().size(),
            "model gains: expected " + std::to_string(2 * model.gains().size()) + " values, got " +
                std::to_string(gains.size()));
    for (std::size_t k = 0; k < model.gains().size(); ++k)
      model.gains()[k] = Complex(gains[2 * k], gains[2 * k + 1]);
    const auto kernel = doc.at("kernel").get<std::vector<double>>();
    require(kernel.size() == model.kernel().size(),
            "model kernel: expected " + std::to_string(model.kernel().size()) + " values, got " +
                std::to_string(kernel.size()));
    model.kernel() = kernel;
    return model;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed model: ") + e.what());
  }
}

Json to_json(const TransportPlan& plan) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < plan.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < plan.cols(); ++j) row.push_back(plan.pi(i, j));
    rows.push_back(row);
  }
  return Json{{"source_atoms", plan.source_atoms},
              {"source_weights", plan.source_weights},
              {"target_atoms", plan.target_atoms},
              {"target_weights", plan.target_weights},
              {"plan", rows},
              {"total_cost", plan.total_cost}};
}

Json to_json(const GGFit& fit) {
  return Json{{"alpha", fit.alpha},
              {"gamma", fit.gamma},
              {"mean_abs", fit.mean_abs},
              {"mean_square", fit.mean_square},
              {"moment_ratio", fit.ratio},
              {"effective_samples", fit.effective_samples},
              {"clamped", fit.clamped}};
}

Json to_json(const MetricReport& report) {
  Json images = Json::array();
  for (const ImageMetrics& m : report.images)
    images.push_back({{"name", m.name}, {"psnr_db", json_number(m.psnr_db)}, {"ssim", m.ssim}});
  return Json{{"images", images},
              {"mean", {{"psnr_db", json_number(report.mean_psnr_db)}, {"ssim", report.mean_ssim}}},
              {"perceptual_metrics_available", report.perceptual_metrics_available},
              {"perceptual_metrics_note", "LPIPS and PI are not computed"}};
}

Json to_json(const DegradationSpec& spec) {
  Json out{{"kind", to_string(spec.kind)}, {"seed", spec.seed}};
  switch (spec.kind) {
    case DegradationKind::kFreqSparse:
      out["spikes"] = spec.spikes;
      out["amplitude"] = spec.amplitude;
      out["shared_support"] = spec.shared_support;
      break;
    case DegradationKind::kRainStreaks:
      out["rain"] = {{"count", spec.rain.count},
                     {"angle_deg", spec.rain.angle_deg},
                     {"length", spec.rain.length},
                     {"intensity", spec.rain.intensity}};
      break;
    case DegradationKind::kHaze:
      out["transmission"] = spec.transmission;
      out["airlight"] = spec.airlight;
      break;
    case DegradationKind::kSrBicubic:
      out["sr_factor"] = spec.sr_factor;
      break;
  }
  return out;
}

std::string histogram_csv(const Histogram& histogram) {
  std::string out = "bin_lo,bin_hi,count\n";
  for (std::size_t k = 0; k < histogram.counts.size(); ++k) {
    out += format_double(histogram.edges[k]) + "," + format_double(histogram.edges[k + 1]) + "," +
           format_double(histogram.counts[k]) + "\n";
  }
  return out;
}

std::string train_log_csv(const TrainConfig& cfg, const std::vector<LogRow>& rows) {
  std::string out = "# " + cfg.label() + "\n";
  out += "# divergence: energy distance between restored and clean " + to_string(cfg.feature) +
         " features, in place of an adversarial critic\n";
  out += "iter,fidelity,divergence,total\n";
  for (const LogRow& r : rows) {
    out += std::to_string(r.iteration) + "," + format_double(r.fidelity) + "," +
           format_double(r.divergence) + "," + format_double(r.total) + "\n";
  }
  return out;
}

}  // namespace sotlab::cli
