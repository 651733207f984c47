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

#include "cli/commands.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>

#include "cli/config.hpp"
#include "cli/serialize.hpp"
#include "sotlab/error.hpp"
#include "sotlab/example1.hpp"
#include "sotlab/netpbm.hpp"
#include "sotlab/rng.hpp"

namespace sotlab::cli {

namespace fs = std::filesystem;

namespace {

std::string shape_string(const Image& img) {
  return std::to_string(img.height()) + "x" + std::to_string(img.width()) + "x" +
         std::to_string(img.channels());
}

std::string show(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += "\n  " + l;
  return out;
}

void save_image(const Image& image, const fs::path& path) {
  fs::create_directories(path.parent_path());
  write_image(image, path);
}

// ---------------------------------------------------------------- example1

struct Example1Args {
  double a = 1.0;
  double b = 0.1;
  int m = 11;
  double p1 = 0.5;
  double ptilde1 = 0.5;
  std::vector<std::string> costs{"l2", "0", "0.5", "1"};
  bool oracle = false;
  bool literal_atoms = false;
  bool sweep = false;
  std::vector<double> sweep_a{1.0};
  std::vector<double> sweep_b{0.02, 0.05, 0.1, 0.2, 0.3, 0.5};
  std::vector<int> sweep_m{1, 2, 5, 11, 50, 99};
  std::string out = "example1_out";
};

struct NamedCost {
  std::string name;
  CostSpec spec;
  std::optional<double> q;  // set for lq costs
};

NamedCost parse_cost(const std::string& text) {
  if (text == "l2") return {"l2", CostSpec::spatial(2.0), std::nullopt};
  double q = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), q);
  if (ec != std::errc() || ptr != text.data() + text.size() || !(q >= 0.0 && q <= 1.0))
    throw ValidationError("example1: cost '" + text + "' is neither l2 nor a q in [0, 1]");
  char name[32];
  std::snprintf(name, sizeof name, "lq(q=%g)", q);
  return {name, CostSpec::frequency(q), q};
}

std::vector<double> lq_exponents(const std::vector<NamedCost>& costs) {
  std::vector<double> qs;
  for (const auto& c : costs)
    if (c.q) qs.push_back(*c.q);
  return qs;
}

bool condition_holds(const Example1Instance& inst, const NamedCost& cost) {
  if (!cost.q) return inst.l2_condition;
  for (const auto& c : inst.lq_conditions)
    if (c.q == *cost.q) return c.holds;
  return false;
}

// x index hit by each y atom under a deterministic plan; -1 for a zero-mass y.
std::optional<std::array<int, 4>> plan_map(const Example1Instance& inst, const TransportPlan& plan) {
  const auto map = plan.induced_map();
  if (!map) return std::nullopt;
  std::array<int, 4> out{-1, -1, -1, -1};
  for (int k = 0; k < 4; ++k) {
    long row = -1;
    for (std::size_t r = 0; r < plan.source_atoms.size(); ++r)
      if (plan.source_atoms[r] == inst.y[k]) row = static_cast<long>(r);
    if (row < 0) continue;
    const Point& target = plan.target_atoms[(*map)[static_cast<std::size_t>(row)]];
    for (int i = 0; i < 2; ++i)
      if (target == inst.x[i]) out[k] = i;
  }
  return out;
}

bool plans_agree(const TransportPlan& a, const TransportPlan& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if (std::abs(a.total_cost - b.total_cost) > 1e-9 * std::max(1.0, std::abs(a.total_cost)))
    return false;
  for (std::size_t k = 0; k < a.pi.values.size(); ++k)
    if (std::abs(a.pi.values[k] - b.pi.values[k]) > 1e-12) return false;
  return true;
}

int run_example1(const Example1Args& args, const Json& resolved, std::ostream& out,
                 std::ostream& err) {
  std::vector<NamedCost> costs;
  for (const auto& c : args.costs) costs.push_back(parse_cost(c));
  require(!costs.empty(), "example1: no costs given");
  const Example1Variant variant =
      args.literal_atoms ? Example1Variant::kLiteral : Example1Variant::kCorrected;
  const Example1Instance inst =
      build_example1(args.a, args.b, args.m, args.p1, args.ptilde1, lq_exponents(costs), variant);

  Json conditions{{"l2", {{"statement", "a^2 > m b^2"}, {"holds", inst.l2_condition}}}};
  Json lq = Json::array();
  for (const auto& c : inst.lq_conditions) lq.push_back({{"q", c.q}, {"holds", c.holds}});
  conditions["lq"] = lq;

  Json report{{"a", args.a},
              {"b", args.b},
              {"m", args.m},
              {"p1", args.p1},
              {"ptilde1", args.ptilde1},
              {"variant", args.literal_atoms ? "literal" : "corrected"},
              {"conditions", conditions},
              {"warnings", inst.warnings()}};
  for (const auto& w : inst.warnings()) err << "warning: " << w << "\n";

  out << "example1: a=" << show(args.a) << " b=" << show(args.b)
      << " m=" << args.m << " p1=" << show(args.p1)
      << " ptilde1=" << show(args.ptilde1) << "\n";
  Json results = Json::array();
  std::vector<std::string> mismatches;
  for (const auto& cost : costs) {
    const TransportPlan plan = solve_exact(inst.measure_y(), inst.measure_x(), cost.spec);
    const double distortion = map_distortion(plan, inst);
    const auto map = plan_map(inst, plan);
    Json entry{{"cost", cost.name}, {"transport", to_json(plan)},
               {"transport_cost", plan.total_cost}, {"map_distortion", distortion}};
    std::string map_text;
    if (map) {
      Json mj = Json::object();
      for (int k = 0; k < 4; ++k) {
        if ((*map)[k] < 0) continue;
        const std::string y = "y" + std::to_string(k + 1);
        const std::string x = "x" + std::to_string((*map)[k] + 1);
        mj[y] = x;
        map_text += (map_text.empty() ? "" : ", ") + y + "->" + x;
      }
      entry["map"] = mj;
      map_text = "{" + map_text + "}";
    } else {
      entry["map"] = "non-deterministic plan";
      map_text = "non-deterministic plan";
    }
    if (args.oracle) {
      const TransportPlan ref = enumerate_oracle(inst.measure_y(), inst.measure_x(), cost.spec);
      const bool agree = plans_agree(plan, ref);
      entry["oracle"] = {{"transport_cost", ref.total_cost}, {"agreement", agree}};
      if (!agree) mismatches.push_back(cost.name);
    }
    out << "  " << cost.name << ": map " << map_text
        << ", transport cost " << show(plan.total_cost)
        << ", map distortion " << show(distortion) << "\n";
    results.push_back(entry);
  }
  report["costs"] = results;

  if (args.oracle) {
    if (mismatches.empty()) {
      out << "oracle agreement: exact\n";
    } else {
      std::string names;
      for (const auto& n : mismatches) names += " " + n;
      out << "oracle agreement: MISMATCH for" << names << "\n";
    }
  }

  const fs::path dir = output_path(args.out);
  write_json_file(dir / "example1.json", report);

  if (args.sweep) {
    std::string csv = "a,b,m,cost,transport_cost,map_distortion,condition_holds,recovers_inverse\n";
    for (double a : args.sweep_a)
      for (double b : args.sweep_b)
        for (int m : args.sweep_m) {
          const Example1Instance s =
              build_example1(a, b, m, args.p1, args.ptilde1, lq_exponents(costs), variant);
          for (const auto& cost : costs) {
            const TransportPlan plan = solve_exact(s.measure_y(), s.measure_x(), cost.spec);
            const double d = map_distortion(plan, s);
            csv += format_double(a) + "," + format_double(b) + "," + std::to_string(m) + "," +
                   cost.name + "," + format_double(plan.total_cost) + "," + format_double(d) + "," +
                   (condition_holds(s, cost) ? "1" : "0") + "," + (d <= 1e-12 ? "1" : "0") + "\n";
          }
        }
    write_text_file(dir / "sweep.csv", csv);
  }

  write_json_file(dir / "resolved_config.json", resolved);
  write_run_sidecar(dir, "example1");
  return mismatches.empty() ? kExitOk : kExitNumerical;
}

// ---------------------------------------------------------------- image pairs

struct NamedImage {
  std::string name;
  Image image;
};

std::vector<NamedImage> read_directory(const fs::path& dir, std::vector<std::string>& problems) {
  std::vector<NamedImage> out;
  for (const fs::path& p : list_images(dir)) {
    try {
      out.push_back({p.filename().string(), read_image(p)});
    } catch (const std::exception& e) {
      problems.push_back(p.string() + ": " + e.what());
    }
  }
  return out;
}

struct MatchedPairs {
  std::vector<std::string> names;
  std::vector<ImagePair> pairs;  // {first dir image, second dir image}
};

// Pairs images by file name; every problem is collected before failing.
MatchedPairs match_directories(const fs::path& first, const fs::path& second,
                               const std::string& what) {
  std::vector<std::string> problems;
  const auto a = read_directory(first, problems);
  const auto b = read_directory(second, problems);
  std::map<std::string, const Image*> by_name;
  for (const auto& img : b) by_name[img.name] = &img.image;
  std::set<std::string> seen;
  MatchedPairs out;
  for (const auto& img : a) {
    const auto it = by_name.find(img.name);
    if (it == by_name.end()) {
      problems.push_back((first / img.name).string() + ": no counterpart in " + second.string());
      continue;
    }
    seen.insert(img.name);
    if (!img.image.same_shape(*it->second)) {
      problems.push_back(img.name + ": " + shape_string(img.image) + " in " + first.string() +
                         " vs " + shape_string(*it->second) + " in " + second.string());
      continue;
    }
    out.names.push_back(img.name);
    out.pairs.push_back({img.image, *it->second});
  }
  for (const auto& img : b)
    if (!seen.contains(img.name) &&
        std::none_of(a.begin(), a.end(), [&](const NamedImage& x) { return x.name == img.name; }))
      problems.push_back((second / img.name).string() + ": no counterpart in " + first.string());
  if (!problems.empty()) throw ValidationError(what + ": unusable inputs:" + join_lines(problems));
  if (out.pairs.empty()) throw ValidationError(what + ": no image pairs found");
  return out;
}

std::vector<Image> read_pool(const std::string& dir, const std::string& what) {
  std::vector<std::string> problems;
  auto named = read_directory(dir, problems);
  if (!problems.empty()) throw ValidationError(what + ": unreadable inputs:" + join_lines(problems));
  if (named.empty()) throw ValidationError(what + ": no images in " + dir);
  std::vector<Image> out;
  for (auto& n : named) out.push_back(std::move(n.image));
  return out;
}

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
  std::string degraded;
  std::string clean;
  int nbins = 200;
  double max_magnitude = 0.0;
  std::string layout = "linear";
  double log_floor = 1e-6;
  bool exclude_dc = false;
  std::string out = "analyze_out";
};

int run_analyze(const AnalyzeArgs& args, const Json& resolved, std::ostream& out) {
  require(!args.degraded.empty() && !args.clean.empty(),
          "analyze: --degraded and --clean are required");
  require(args.layout == "linear" || args.layout == "log",
          "analyze: --layout must be linear or log");
  const MatchedPairs matched = match_directories(args.degraded, args.clean, "analyze");

  HistogramOptions opts;
  opts.nbins = args.nbins;
  opts.max_magnitude = args.max_magnitude;
  opts.layout = args.layout == "log" ? BinLayout::kLog : BinLayout::kLinear;
  opts.log_floor = args.log_floor;
  opts.include_dc = !args.exclude_dc;
  const Histogram hist = residual_spectrum_histogram(matched.pairs, opts);

  Json doc{{"pairs", matched.names.size()},
           {"coefficients_per_pair", hist.coefficients_per_pair},
           {"include_dc", hist.include_dc},
           {"layout", args.layout},
           {"normalization", hist.normalization},
           {"bins", hist.counts.size()},
           {"total_count", hist.total_count()},
           {"overflow", hist.overflow},
           {"fit_samples", "real and imaginary parts of residual spectra"}};
  const std::vector<double> samples = residual_spectrum_components(matched.pairs, opts.include_dc);
  try {
    const GGFit fit = fit_generalized_gaussian(samples);
    doc["fit"] = to_json(fit);
    out << "analyze: " << matched.names.size() << " pairs, gamma " << show(fit.gamma)
        << ", alpha " << show(fit.alpha) << "\n";
  } catch (const ValidationError& e) {
    doc["fit"] = nullptr;
    doc["fit_error"] = e.what();
    out << "analyze: " << matched.names.size() << " pairs, no fit: " << e.what() << "\n";
  }

  const fs::path dir = output_path(args.out);
  write_text_file(dir / "histogram.csv", histogram_csv(hist));
  write_json_file(dir / "ggfit.json", doc);
  write_json_file(dir / "resolved_config.json", resolved);
  write_run_sidecar(dir, "analyze");
  return kExitOk;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  int height = 32;
  int width = 32;
  int channels = 1;
  std::string scene = "piecewise";
  double max_slope = 1.0 / 64.0;
  int count = 10;
  int start_index = 0;
  std::uint64_t seed = 0;
  std::string kind = "freq-sparse";
  int spikes = 8;
  double amplitude = 0.5;
  bool shared_support = true;
  int rain_count = 6;
  double rain_angle = 80.0;
  double rain_length = 12.0;
  double rain_intensity = 0.4;
  double transmission = 0.6;
  double airlight = 0.9;
  int sr_factor = 4;
  std::uint64_t degradation_seed = 0;
  std::string write = "both";
  std::string out = "synth_out";
};

int run_synth(const SynthArgs& args, const Json& resolved, std::ostream& out) {
  require(args.scene == "piecewise" || args.scene == "smooth",
          "synth: --scene must be piecewise or smooth");
  require(args.write == "both" || args.write == "clean" || args.write == "degraded",
          "synth: --write must be clean, degraded or both");
  require(args.count >= 0 && args.start_index >= 0,
          "synth: --count and --start-index must be non-negative");
  require(args.channels == 1 || args.channels == 3, "synth: --channels must be 1 or 3");
  const SceneModel scene =
      args.scene == "smooth" ? SceneModel::kSmoothGradient : SceneModel::kPiecewiseConstant;
  SceneOptions scene_opts;
  scene_opts.max_slope = args.max_slope;
  DegradationSpec spec;
  spec.kind = degradation_kind_from_string(args.kind);
  spec.spikes = args.spikes;
  spec.amplitude = args.amplitude;
  spec.shared_support = args.shared_support;
  spec.rain = {args.rain_count, args.rain_angle, args.rain_length, args.rain_intensity};
  spec.transmission = args.transmission;
  spec.airlight = args.airlight;
  spec.sr_factor = args.sr_factor;
  spec.seed = args.degradation_seed;
  spec.validate();

  const bool write_clean = args.write != "degraded";
  const bool write_degraded = args.write != "clean";
  const fs::path dir = output_path(args.out);
  const std::string ext = args.channels == 3 ? ".ppm" : ".pgm";
  Json images = Json::array();
  for (int k = 0; k < args.count; ++k) {
    const auto index = static_cast<std::uint64_t>(args.start_index + k);
    const std::uint64_t clean_seed = derive_seed(args.seed, index);
    const std::uint64_t image_seed = derive_seed(args.degradation_seed, index);
    char name[32];
    std::snprintf(name, sizeof name, "%06llu", static_cast<unsigned long long>(index));
    const std::string file = name + ext;
    const Image clean = gen_clean(args.height, args.width, args.channels, scene, clean_seed,
                                  scene_opts);
    Json entry{{"file", file}, {"index", index}, {"clean_seed", clean_seed}};
    if (write_clean) save_image(clean, dir / "clean" / file);
    if (write_degraded) {
      save_image(apply_degradation(clean, spec, image_seed).degraded, dir / "degraded" / file);
      entry["degradation_seed"] = image_seed;
    }
    images.push_back(entry);
  }
  const Json manifest{{"height", args.height},
                      {"width", args.width},
                      {"channels", args.channels},
                      {"scene", args.scene},
                      {"max_slope", args.max_slope},
                      {"seed", args.seed},
                      {"start_index", args.start_index},
                      {"write", args.write},
                      {"seed_rule", "clean_seed = derive_seed(seed, index); degradation_seed = "
                                    "derive_seed(degradation.seed, index)"},
                      {"degradation", to_json(spec)},
                      {"images", images}};
  write_json_file(dir / "manifest.json", manifest);
  write_json_file(dir / "resolved_config.json", resolved);
  write_run_sidecar(dir, "synth");
  out << "synth: wrote " << args.count << " images to " << dir.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- train

struct TrainArgs {
  std::string degraded;
  std::string clean;
  double q = 1.0;
  double eps = 1e-4;
  double lambda = 1.0;
  double learning_rate = 1e-3;
  std::string schedule = "constant";
  int batch_size = 8;
  int iterations = 200;
  std::uint64_t seed = 0;
  std::string feature = "pixels";
  int model_size = 32;
  int kernel_size = 0;
  double init_sigma = 0.01;
  std::string resume;
  std::string out = "train_out";
};

bool same_except_iterations(TrainConfig a, TrainConfig b) {
  a.iterations = b.iterations = 0;
  return to_json(a) == to_json(b);
}

int run_train(const TrainArgs& args, const Json& resolved, std::ostream& out, std::ostream& err) {
  require(!args.degraded.empty() && !args.clean.empty(),
          "train: --degraded and --clean are required");
  TrainConfig cfg;
  cfg.q = args.q;
  cfg.eps = args.eps;
  cfg.lambda = args.lambda;
  cfg.learning_rate = args.learning_rate;
  cfg.schedule = schedule_from_string(args.schedule);
  cfg.batch_size = args.batch_size;
  cfg.iterations = args.iterations;
  cfg.seed = args.seed;
  cfg.feature = feature_kind_from_string(args.feature);
  cfg.model_size = args.model_size;
  cfg.kernel_size = args.kernel_size;
  cfg.init_sigma = args.init_sigma;
  cfg.validate();

  std::optional<RestorationModel> start;
  int start_iteration = 0;
  if (!args.resume.empty()) {
    const Json ckpt = load_json_file(args.resume);
    const TrainConfig prev = train_config_from_json(ckpt.at("config"));
    require(same_except_iterations(prev, cfg),
            "train: --resume checkpoint was written with a different configuration");
    require(ckpt.value("status", "") == "completed",
            "train: --resume checkpoint did not complete its run");
    start = model_from_json(ckpt.at("model"));
    start_iteration = ckpt.at("iterations_completed").get<int>();
    require(start_iteration <= cfg.iterations,
            "train: checkpoint is already past --iterations");
  }

  const std::vector<Image> ys = read_pool(args.degraded, "train");
  const std::vector<Image> xs = read_pool(args.clean, "train");
  const TrainResult result = train(cfg, ys, xs, start, start_iteration);
  const bool diverged = result.status == TrainStatus::kDiverged;

  const Json model_doc{{"config", to_json(cfg)},
                       {"objective", cfg.label()},
                       {"iterations_completed", result.iterations_completed},
                       {"status", diverged ? "diverged" : "completed"},
                       {"message", result.message},
                       {"model", to_json(result.model)}};
  const fs::path dir = output_path(args.out);
  write_json_file(dir / "model.json", model_doc);
  write_text_file(dir / "train_log.csv", train_log_csv(cfg, result.log));
  write_json_file(dir / "resolved_config.json", resolved);
  write_run_sidecar(dir, "train");
  if (diverged) {
    err << "train: " << result.message << "; kept the model after "
        << result.iterations_completed << " iterations\n";
    return kExitNumerical;
  }
  out << "train: " << cfg.label() << ", " << result.iterations_completed
      << " iterations, max |G - 1| " << show(result.model.max_gain_deviation()) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- restore

struct RestoreArgs {
  std::string model;
  std::string input;
  std::string out = "restore_out";
};

int run_restore(const RestoreArgs& args, const Json& resolved, std::ostream& out) {
  require(!args.model.empty() && !args.input.empty(), "restore: --model and --input are required");
  const Json doc = load_json_file(args.model);
  require(doc.contains("model"), "restore: " + args.model + " has no model");
  const RestorationModel model = model_from_json(doc.at("model"));
  std::vector<std::string> problems;
  const auto images = read_directory(args.input, problems);
  if (!problems.empty()) throw ValidationError("restore: unreadable inputs:" + join_lines(problems));
  require(!images.empty(), "restore: no images in " + args.input);
  const fs::path dir = output_path(args.out);
  for (const auto& img : images) {
    try {
      save_image(restore(model, img.image), dir / img.name);
    } catch (const ValidationError& e) {
      throw ValidationError(img.name + ": " + e.what());
    }
  }
  write_json_file(dir / "resolved_config.json", resolved);
  write_run_sidecar(dir, "restore");
  out << "restore: wrote " << images.size() << " images to " << dir.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string restored;
  std::string reference;
  std::string out = "eval_out";
};

int run_eval(const EvalArgs& args, const Json& resolved, std::ostream& out) {
  require(!args.restored.empty() && !args.reference.empty(),
          "eval: --restored and --reference are required");
  const MatchedPairs matched = match_directories(args.restored, args.reference, "eval");
  MetricReport report;
  for (std::size_t k = 0; k < matched.pairs.size(); ++k) {
    const ImagePair& p = matched.pairs[k];
    report.add({matched.names[k], psnr(p.degraded, p.clean), ssim(p.degraded, p.clean)});
  }
  report.finalize();
  const fs::path dir = output_path(args.out);
  write_json_file(dir / "report.json", to_json(report));
  write_json_file(dir / "resolved_config.json", resolved);
  write_run_sidecar(dir, "eval");
  out << "eval: " << report.images.size() << " images, mean PSNR "
      << show(report.mean_psnr_db) << " dB, mean SSIM "
      << show(report.mean_ssim) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- wiring

struct Subcommand {
  CLI::App* app = nullptr;
  std::unique_ptr<OptionTable> table;
  std::string config;
};

Subcommand make_subcommand(CLI::App& root, const std::string& name, const std::string& help) {
  Subcommand sc;
  sc.app = root.add_subcommand(name, help);
  sc.table = std::make_unique<OptionTable>(sc.app);
  return sc;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App root{"sotlab: sparsity-aware optimal transport experiments"};
  root.require_subcommand(1);

  Example1Args ex;
  Subcommand ex_cmd = make_subcommand(root, "example1", "Two-point transport example");
  {
    OptionTable& t = *ex_cmd.table;
    t.add("a", ex.a, "Magnitude of the first coordinate");
    t.add("b", ex.b, "Magnitude of the remaining coordinates");
    t.add("m", ex.m, "Number of small coordinates");
    t.add("p1", ex.p1, "P(X = x1)");
    t.add("ptilde1", ex.ptilde1, "P(N = n1)");
    t.add("costs", ex.costs, "Costs: l2 and/or lq exponents in [0, 1]")->delimiter(',');
    t.add_flag("oracle", ex.oracle, "Cross-check every plan by enumeration");
    t.add_flag("literal-atoms", ex.literal_atoms, "Use x2 = [-a, -b, ..., -b]");
    t.add_flag("sweep", ex.sweep, "Also write sweep.csv over the sweep grids");
    t.add("sweep-a", ex.sweep_a, "Sweep values of a")->delimiter(',');
    t.add("sweep-b", ex.sweep_b, "Sweep values of b")->delimiter(',');
    t.add("sweep-m", ex.sweep_m, "Sweep values of m")->delimiter(',');
    t.add("out", ex.out, "Output directory");
  }

  AnalyzeArgs an;
  Subcommand an_cmd = make_subcommand(root, "analyze", "Residual spectrum statistics");
  {
    OptionTable& t = *an_cmd.table;
    t.add("degraded", an.degraded, "Directory of degraded images");
    t.add("clean", an.clean, "Directory of clean images with matching names");
    t.add("nbins", an.nbins, "Histogram bins");
    t.add("max-magnitude", an.max_magnitude, "Upper histogram edge; 0 uses the largest magnitude");
    t.add("layout", an.layout, "Bin layout: linear or log");
    t.add("log-floor", an.log_floor, "Upper edge of the first log bin");
    t.add_flag("exclude-dc", an.exclude_dc, "Drop the DC coefficient");
    t.add("out", an.out, "Output directory");
  }

  SynthArgs sy;
  Subcommand sy_cmd = make_subcommand(root, "synth", "Generate clean and degraded images");
  {
    OptionTable& t = *sy_cmd.table;
    t.add("height", sy.height, "Image height");
    t.add("width", sy.width, "Image width");
    t.add("channels", sy.channels, "1 or 3");
    t.add("scene", sy.scene, "piecewise or smooth");
    t.add("max-slope", sy.max_slope, "Gradient bound for smooth scenes");
    t.add("count", sy.count, "Number of images");
    t.add("start-index", sy.start_index, "Index of the first image");
    t.add("seed", sy.seed, "Clean scene seed");
    t.add("kind", sy.kind, "freq-sparse, rain-streaks, haze or sr-bicubic");
    t.add("spikes", sy.spikes, "Frequency spikes per image");
    t.add("amplitude", sy.amplitude, "Spike amplitude");
    t.add("shared-support", sy.shared_support, "Share spike frequencies across images");
    t.add("rain-count", sy.rain_count, "Streaks per image");
    t.add("rain-angle", sy.rain_angle, "Streak angle in degrees");
    t.add("rain-length", sy.rain_length, "Streak length in pixels");
    t.add("rain-intensity", sy.rain_intensity, "Streak intensity");
    t.add("transmission", sy.transmission, "Haze transmission");
    t.add("airlight", sy.airlight, "Haze airlight");
    t.add("sr-factor", sy.sr_factor, "Bicubic down/up factor");
    t.add("degradation-seed", sy.degradation_seed, "Degradation seed");
    t.add("write", sy.write, "clean, degraded or both");
    t.add("out", sy.out, "Output directory");
  }

  TrainArgs tr;
  Subcommand tr_cmd = make_subcommand(root, "train", "Train a frequency-diagonal restoration model");
  {
    OptionTable& t = *tr_cmd.table;
    t.add("degraded", tr.degraded, "Directory of degraded training images");
    t.add("clean", tr.clean, "Directory of clean training images (unpaired)");
    t.add("q", tr.q, "Fidelity exponent; 2 is the OT baseline");
    t.add("eps", tr.eps, "Fidelity smoothing");
    t.add("lambda", tr.lambda, "Divergence weight");
    t.add("learning-rate", tr.learning_rate, "Step size");
    t.add("schedule", tr.schedule, "constant or linear-decay");
    t.add("batch-size", tr.batch_size, "Images per step");
    t.add("iterations", tr.iterations, "Total steps");
    t.add("seed", tr.seed, "Sampling and initialization seed");
    t.add("feature", tr.feature, "pixels or patches-of-8");
    t.add("model-size", tr.model_size, "Model tile size");
    t.add("kernel-size", tr.kernel_size, "Spatial kernel size; 0 disables it");
    t.add("init-sigma", tr.init_sigma, "Initial gain perturbation");
    t.add("resume", tr.resume, "model.json to continue from");
    t.add("out", tr.out, "Output directory");
  }

  RestoreArgs rs;
  Subcommand rs_cmd = make_subcommand(root, "restore", "Apply a trained model to a directory");
  {
    OptionTable& t = *rs_cmd.table;
    t.add("model", rs.model, "model.json from train");
    t.add("input", rs.input, "Directory of images to restore");
    t.add("out", rs.out, "Output directory");
  }

  EvalArgs ev;
  Subcommand ev_cmd = make_subcommand(root, "eval", "PSNR and SSIM against references");
  {
    OptionTable& t = *ev_cmd.table;
    t.add("restored", ev.restored, "Directory of restored images");
    t.add("reference", ev.reference, "Directory of reference images with matching names");
    t.add("out", ev.out, "Output directory");
  }

  for (Subcommand* sc : {&ex_cmd, &an_cmd, &sy_cmd, &tr_cmd, &rs_cmd, &ev_cmd})
    sc->app->add_option("--config", sc->config, "JSON config file; flags override it");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    root.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = root.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    for (Subcommand* sc : {&ex_cmd, &an_cmd, &sy_cmd, &tr_cmd, &rs_cmd, &ev_cmd}) {
      if (!sc->app->parsed()) continue;
      const std::string name = sc->app->get_name();
      sc->table->merge(load_config_section(sc->config, name), name);
      const Json resolved{{name, sc->table->resolved()}};
      if (sc == &ex_cmd) return run_example1(ex, resolved, out, err);
      if (sc == &an_cmd) return run_analyze(an, resolved, out);
      if (sc == &sy_cmd) return run_synth(sy, resolved, out);
      if (sc == &tr_cmd) return run_train(tr, resolved, out, err);
      if (sc == &rs_cmd) return run_restore(rs, resolved, out);
      return run_eval(ev, resolved, out);
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace sotlab::cli
