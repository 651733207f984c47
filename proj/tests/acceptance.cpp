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

// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cli_helpers.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "sotlab/costs.hpp"
#include "sotlab/degrade.hpp"
#include "sotlab/dft.hpp"
#include "sotlab/metrics.hpp"
#include "sotlab/rng.hpp"
#include "sotlab/sparsity.hpp"
#include "sotlab/train.hpp"
#include "sotlab/transport.hpp"

using namespace sotlab;
using Json = nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- 1

Outcome example1_golden() {
  const auto t0 = std::chrono::steady_clock::now();
  clitest::TempDir dir;
  const auto r = clitest::run({"example1", "--a", "1", "--b", "0.1", "--m", "11", "--p1", "0.5",
                               "--ptilde1", "0.5", "--costs", "l2,0,0.5,1", "--out", dir / "ex"});
  const double secs = seconds_since(t0);
  if (r.code != 0) return {false, "example1 exited with " + std::to_string(r.code) + ": " + r.err};
  const Json doc = Json::parse(clitest::read_file(dir / "ex/example1.json"));
  const Json l2_map{{"y1", "x1"}, {"y2", "x2"}, {"y3", "x1"}, {"y4", "x2"}};
  const Json lq_map{{"y1", "x1"}, {"y2", "x1"}, {"y3", "x2"}, {"y4", "x2"}};
  bool ok = doc["costs"].size() == 4;
  const Json& l2 = doc["costs"][0];
  const double l2_cost = l2["transport_cost"].get<double>();
  const double l2_dist = l2["map_distortion"].get<double>();
  ok = ok && l2["map"] == l2_map && std::abs(l2_cost - 2.22) <= 1e-9 &&
       std::abs(l2_dist - 2.22) <= 1e-9;
  double worst_lq = 0.0;
  for (int k = 1; k < 4; ++k) {
    const Json& c = doc["costs"][k];
    ok = ok && c["map"] == lq_map;
    worst_lq = std::max(worst_lq, std::abs(c["map_distortion"].get<double>()));
  }
  ok = ok && worst_lq <= 1e-12 && secs < 1.0;
  return {ok, fmt("l2 cost %.12g, l2 distortion %.12g, max lq distortion %.3g, %.3f s", l2_cost,
                  l2_dist, worst_lq, secs)};
}

// ---------------------------------------------------------------- 2

std::vector<double> random_simplex(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> d(0.05, 1.0);
  std::vector<double> w(n);
  double total = 0.0;
  for (double& v : w) total += v = d(gen);
  for (double& v : w) v /= total;
  return w;
}

Outcome solver_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::mt19937_64 gen(777000 + seed);
    std::uniform_int_distribution<std::size_t> rows_dist(1, 9);
    const std::size_t rows = rows_dist(gen);
    std::uniform_int_distribution<std::size_t> cols_dist(1, 10 - rows);
    const std::size_t cols = cols_dist(gen);
    const auto supply = random_simplex(gen, rows);
    const auto demand = random_simplex(gen, cols);
    Matrix cost(rows, cols);
    std::uniform_real_distribution<double> c(0.0, 10.0);
    for (double& v : cost.values) v = c(gen);
    const double exact = solve_exact(supply, demand, cost).total_cost;
    const double brute = enumerate_oracle(supply, demand, cost).total_cost;
    worst = std::max(worst, std::abs(exact - brute));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-9 && secs < 30.0,
          fmt("200 instances, max |exact - oracle| %.3g, %.2f s", worst, secs)};
}

// ---------------------------------------------------------------- 3

Outcome parseval() {
  double worst = 0.0;
  std::mt19937_64 gen(31);
  std::uniform_int_distribution<int> dim(1, 64);
  for (int trial = 0; trial < 100; ++trial) {
    const Image r = oracle::random_image(dim(gen), dim(gen), gen, -1.0, 1.0);
    const double spatial = squared_norm(r);
    const double freq = complex_lq(dft2(r), 2.0, 0.0);
    worst = std::max(worst, std::abs(freq - spatial) / spatial);
  }
  return {worst < 1e-9, fmt("100 residuals up to 64x64, max relative error %.3g", worst)};
}

// ---------------------------------------------------------------- 4

RestorationModel nudge(RestorationModel m, int u, int v, bool imaginary, double h) {
  const int n = m.size();
  const int mu = (n - u) % n, mv = (n - v) % n;
  const Complex step = imaginary ? Complex(0.0, h) : Complex(h, 0.0);
  m.gain(u, v) += step;
  if (mu != u || mv != v) m.gain(mu, mv) += std::conj(step);
  return m;
}

Outcome gradients() {
  const double h = 1e-6;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    std::mt19937_64 gen(9000 + trial);
    TrainConfig cfg;
    cfg.q = trial % 3 == 0 ? 0.5 : (trial % 3 == 1 ? 1.0 : 2.0);
    cfg.eps = 1e-4;
    cfg.lambda = trial % 2 == 0 ? 0.5 : 0.0;
    cfg.model_size = 8;
    cfg.batch_size = 4;
    std::vector<Image> ys, xs;
    for (int k = 0; k < 4; ++k) ys.push_back(oracle::random_image(8, 8, gen));
    for (int k = 0; k < 4; ++k) xs.push_back(oracle::random_image(8, 8, gen));
    const RestorationModel model = RestorationModel::perturbed(8, 0, 0.2, 600 + trial);
    const ModelGradient g = sot_gradient(model, ys, xs, cfg).gradient;
    double scale = 0.0;
    for (const Complex& d : g.gains) scale = std::max(scale, std::abs(d));
    for (int u = 0; u < 8; ++u)
      for (int v = 0; v < 8; ++v)
        for (bool imaginary : {false, true}) {
          const int mu = (8 - u) % 8, mv = (8 - v) % 8;
          const bool self = mu == u && mv == v;
          if (imaginary && self) continue;
          const double fd = oracle::central_difference(
              [&](double s) { return sot_objective(nudge(model, u, v, imaginary, s), ys, xs, cfg).total; },
              h);
          const Complex d = g.gains[static_cast<std::size_t>(u) * 8 + v];
          const double analytic = (self ? 1.0 : 2.0) * (imaginary ? d.imag() : d.real());
          worst = std::max(worst, oracle::relative_error(analytic, fd, 1e-3 * scale));
        }
  }
  return {worst < 1e-4, fmt("50 trials at 8x8, q in {0.5, 1, 2}, max relative error %.3g", worst)};
}

// ---------------------------------------------------------------- 5

Outcome sparsity_calibration() {
  struct Case {
    double gamma, tol;
  };
  bool ok = true;
  std::string detail;
  for (const Case c : {Case{0.6, 0.15}, Case{1.0, 0.07}, Case{2.0, 0.1}}) {
    double worst = 0.0;
    for (std::uint64_t seed : {11u, 12u, 13u}) {
      const auto samples = oracle::generalized_gaussian_samples(c.gamma, 1.0, 100000, seed);
      worst = std::max(worst, std::abs(fit_generalized_gaussian(samples).gamma - c.gamma));
    }
    ok = ok && worst <= c.tol;
    detail += fmt("gamma %.1f max err %.3f (tol %.2f); ", c.gamma, worst, c.tol);
  }
  std::vector<ImagePair> pairs;
  DegradationSpec spec;
  spec.spikes = 8;
  spec.amplitude = 0.5;
  spec.seed = 5;
  for (int k = 0; k < 50; ++k) {
    const Image x = gen_clean(32, 32, 1, SceneModel::kPiecewiseConstant, 4000 + k);
    pairs.push_back({apply_degradation(x, spec, 5000 + k).degraded, x});
  }
  const double gamma = fit_generalized_gaussian(residual_spectrum_components(pairs)).gamma;
  ok = ok && gamma < 1.0;
  detail += fmt("freq-sparse residual gamma %.3f", gamma);
  return {ok, detail};
}

// ---------------------------------------------------------------- 6

Outcome sot_vs_ot(std::FILE* log) {
  const auto t0 = std::chrono::steady_clock::now();
  DegradationSpec spec;
  spec.spikes = 8;
  spec.amplitude = 2.0;
  spec.seed = 2024;
  std::vector<Image> clean, degraded, test_y, test_x;
  for (int i = 0; i < 500; ++i)
    clean.push_back(gen_clean(32, 32, 1, SceneModel::kPiecewiseConstant, 10000 + i));
  for (int i = 0; i < 500; ++i)
    degraded.push_back(
        apply_degradation(gen_clean(32, 32, 1, SceneModel::kPiecewiseConstant, 20000 + i), spec,
                          20000 + i)
            .degraded);
  for (int i = 0; i < 100; ++i) {
    const Image x = gen_clean(32, 32, 1, SceneModel::kPiecewiseConstant, 30000 + i);
    test_x.push_back(x);
    test_y.push_back(apply_degradation(x, spec, 30000 + i).degraded);
  }
  const auto mean_psnr = [&](const std::function<Image(const Image&)>& f) {
    double total = 0.0;
    for (std::size_t i = 0; i < test_y.size(); ++i) total += psnr(f(test_y[i]), test_x[i]);
    return total / static_cast<double>(test_y.size());
  };
  const double input = mean_psnr([](const Image& y) { return y; });

  double result[2] = {0.0, 0.0};
  bool completed = true;
  for (int k = 0; k < 2; ++k) {
    TrainConfig cfg;
    cfg.q = k == 0 ? 1.0 : 2.0;
    cfg.eps = k == 0 ? 1e-4 : 0.0;
    cfg.lambda = 100.0;
    cfg.learning_rate = 2e-3;
    cfg.schedule = LearningRateSchedule::kLinearDecay;
    cfg.iterations = 2000;
    cfg.batch_size = 16;
    cfg.seed = 7;
    cfg.feature = FeatureKind::kPixels;
    cfg.model_size = 32;
    const TrainResult r = train(cfg, degraded, clean);
    completed = completed && r.status == TrainStatus::kCompleted;
    result[k] = mean_psnr([&](const Image& y) { return apply_model(r.model, y); });
    std::fprintf(log, "  %s: held-out PSNR %.3f dB\n", cfg.label().c_str(), result[k]);
  }
  const double secs = seconds_since(t0);
  const double gap = result[0] - result[1];
  const bool ok = completed && gap >= 0.5 && result[0] > input && result[1] > input && secs < 600.0;
  return {ok, fmt("q=1 %.3f dB, q=2 %.3f dB, gap %.3f dB, input %.3f dB, %.1f s", result[0],
                  result[1], gap, input, secs)};
}

// ---------------------------------------------------------------- 7

Outcome lambda_zero() {
  std::vector<Image> pool;
  std::mt19937_64 gen(11);
  std::normal_distribution<double> noise(0.0, 0.3);
  for (int k = 0; k < 8; ++k) {
    Image img = gen_clean(8, 8, 1, SceneModel::kSmoothGradient, k);
    for (double& v : img.data()) v += noise(gen);
    pool.push_back(img);
  }
  double worst = 0.0;
  bool completed = true;
  for (double sigma : {0.01, 0.3}) {
    TrainConfig cfg;
    cfg.q = 2.0;
    cfg.eps = 0.0;
    cfg.lambda = 0.0;
    cfg.model_size = 8;
    cfg.batch_size = 8;
    cfg.iterations = 1500;
    cfg.learning_rate = 0.04;
    cfg.init_sigma = sigma;
    const TrainResult r = train(cfg, pool, pool);
    completed = completed && r.status == TrainStatus::kCompleted;
    worst = std::max(worst, r.model.max_gain_deviation());
  }
  return {completed && worst < 0.05,
          fmt("max |G - 1| after training from sigma 0.01 and 0.3: %.4f", worst)};
}

// ---------------------------------------------------------------- 8

Outcome determinism() {
  clitest::TempDir dir;
  const std::vector<std::vector<std::string>> commands{
      {"example1", "--oracle", "--sweep", "--out", dir / "ex"},
      {"synth", "--count", "8", "--seed", "1", "--amplitude", "0.4", "--out", dir / "pool_a"},
      {"synth", "--count", "8", "--seed", "2", "--start-index", "8", "--amplitude", "0.4", "--out",
       dir / "pool_b"},
      {"synth", "--count", "4", "--kind", "rain-streaks", "--out", dir / "rain"},
      {"analyze", "--degraded", dir / "pool_a/degraded", "--clean", dir / "pool_a/clean", "--out",
       dir / "an"},
      {"train", "--degraded", dir / "pool_b/degraded", "--clean", dir / "pool_a/clean", "--iterations",
       "20", "--lambda", "10", "--out", dir / "tr"},
      {"restore", "--model", dir / "tr/model.json", "--input", dir / "pool_a/degraded", "--out",
       dir / "rs"},
      {"eval", "--restored", dir / "rs", "--reference", dir / "pool_a/clean", "--out", dir / "ev"},
  };
  int files = 0;
  for (const auto& args : commands) {
    const std::string out = args.back();
    const auto first = clitest::run(args);
    const auto before = clitest::snapshot(out);
    const auto second = clitest::run(args);
    const auto after = clitest::snapshot(out);
    if (first.code != 0 || second.code != 0)
      return {false, args.front() + " failed: " + first.err + second.err};
    if (before != after) return {false, args.front() + " outputs differ between runs"};
    files += static_cast<int>(after.size());
  }
  return {true, fmt("%d subcommand runs repeated, %d output files byte-identical",
                    static_cast<int>(commands.size()), files)};
}

// ---------------------------------------------------------------- 9

Outcome metric_examples() {
  const Image zero(16, 16, 1, 0.0);
  const double p20 = psnr(Image(16, 16, 1, 0.1), zero);
  const double p40 = psnr(Image(16, 16, 1, 0.01), zero);
  const double pinf = psnr(zero, zero);

  std::mt19937_64 gen(3);
  const Image ref = oracle::random_image(24, 24, gen);
  const double self = ssim(ref, ref);
  const double a = 0.3, b = 0.7, c1 = 0.01 * 0.01;
  const double constant = ssim(Image(16, 16, 1, a), Image(16, 16, 1, b));
  const double expected = (2 * a * b + c1) / (a * a + b * b + c1);

  Image grating(32, 32);
  Image flipped(32, 32);
  for (int r = 0; r < 32; ++r)
    for (int c = 0; c < 32; ++c) {
      const double wave = 0.3 * std::cos(2.0 * M_PI * (r + 2 * c) / 16.0);
      grating.at(r, c) = 0.5 + wave;
      flipped.at(r, c) = 0.5 - wave;
    }
  const double negated = ssim(flipped, grating);

  const bool ok = std::abs(p20 - 20.0) <= 1e-12 && std::abs(p40 - 40.0) <= 1e-12 &&
                  pinf == kInfinitePsnr && self == 1.0 &&
                  constant == expected && negated < 0.0;
  return {ok, fmt("psnr %.15g / %.15g / %g, ssim(x,x) %.17g, constant %.17g vs %.17g, "
                  "negated %.4f",
                  p20, p40, pinf, self, constant, expected, negated)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {"example1 golden plans", example1_golden},
      {"exact solver matches enumeration oracle", solver_oracle},
      {"parseval / q=2 reduction", parseval},
      {"analytic gradients match finite differences", gradients},
      {"generalized-Gaussian calibration", sparsity_calibration},
      {"q=1 beats q=2 on the freq-sparse task", [] { return sot_vs_ot(stdout); }},
      {"lambda=0 training converges to identity", lambda_zero},
      {"byte-identical reruns", determinism},
      {"metric examples", metric_examples},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("criterion %zu: %s  %s: %s\n", k + 1, o.pass ? "PASS" : "FAIL", criteria[k].name,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
