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

#include <cmath>
#include <cstdlib>

#include "cli_helpers.hpp"
#include "doctest.h"
#include "json.hpp"
#include "sotlab/image.hpp"
#include "sotlab/netpbm.hpp"

using clitest::read_file;
using clitest::run;
using clitest::snapshot;
using clitest::TempDir;
using Json = nlohmann::json;

namespace {

Json read_json(const std::string& path) { return Json::parse(read_file(path)); }

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

void synth(const TempDir& dir, const std::string& out, std::vector<std::string> extra) {
  std::vector<std::string> args{"synth", "--out", dir / out};
  args.insert(args.end(), extra.begin(), extra.end());
  const auto r = run(args);
  REQUIRE_MESSAGE(r.code == 0, r.err);
}

}  // namespace

TEST_CASE("example1 defaults reproduce the golden plans") {
  TempDir dir;
  const auto r = run({"example1", "--oracle", "--out", dir / "ex"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(contains(r.out, "oracle agreement: exact"));
  CHECK(contains(r.out, "l2: map {y1->x1, y2->x2, y3->x1, y4->x2}"));
  CHECK(contains(r.out, "lq(q=1): map {y1->x1, y2->x1, y3->x2, y4->x2}"));
  CHECK(r.err.empty());

  const Json doc = read_json(dir / "ex/example1.json");
  REQUIRE(doc["costs"].size() == 4);
  const Json& l2 = doc["costs"][0];
  CHECK(l2["cost"] == "l2");
  CHECK(std::abs(l2["transport_cost"].get<double>() - 2.22) < 1e-9);
  CHECK(std::abs(l2["map_distortion"].get<double>() - 2.22) < 1e-9);
  CHECK(l2["map"] == Json{{"y1", "x1"}, {"y2", "x2"}, {"y3", "x1"}, {"y4", "x2"}});
  for (int k = 1; k < 4; ++k) {
    const Json& c = doc["costs"][k];
    CHECK(std::abs(c["map_distortion"].get<double>()) < 1e-12);
    CHECK(c["map"] == Json{{"y1", "x1"}, {"y2", "x1"}, {"y3", "x2"}, {"y4", "x2"}});
    CHECK(c["oracle"]["agreement"] == true);
  }
  CHECK(doc["warnings"].empty());
  CHECK(read_json(dir / "ex/resolved_config.json")["example1"]["m"] == 11);
}

TEST_CASE("example1 flags violated conditions") {
  TempDir dir;
  const auto r = run({"example1", "--m", "1", "--costs", "l2,1", "--out", dir / "ex"});
  REQUIRE(r.code == 0);
  CHECK(contains(r.err, "a^q < m b^q violated for q = 1"));
  const Json doc = read_json(dir / "ex/example1.json");
  CHECK(doc["conditions"]["lq"][0]["holds"] == false);
  CHECK(doc["warnings"].size() == 1);
}

TEST_CASE("example1 sweep marks the zero-distortion region") {
  TempDir dir;
  const auto r = run({"example1", "--sweep", "--sweep-b", "0.1,0.5", "--sweep-m", "1,11",
                      "--costs", "l2,1", "--out", dir / "ex"});
  REQUIRE(r.code == 0);
  const std::string csv = read_file(dir / "ex/sweep.csv");
  CHECK(csv.rfind("a,b,m,cost,transport_cost,map_distortion,condition_holds,recovers_inverse\n", 0) == 0);
  CHECK(contains(csv, "\n1,0.10000000000000001,11,lq(q=1),2,0,1,1\n"));
  CHECK(contains(csv, "\n1,0.10000000000000001,11,l2,2.2200000000000002,2.2200000000000002,1,0\n"));
  int rows = 0;
  for (char c : csv) rows += c == '\n';
  CHECK(rows == 1 + 2 * 2 * 2);
}

TEST_CASE("config sections merge under explicit flags") {
  TempDir dir;
  const std::string cfg = dir / "cfg.json";
  std::ofstream(cfg) << R"({"example1": {"m": 5, "b": 0.2, "costs": ["l2"]}})";
  const auto r = run({"example1", "--config", cfg, "--b", "0.3", "--out", dir / "ex"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const Json resolved = read_json(dir / "ex/resolved_config.json")["example1"];
  CHECK(resolved["m"] == 5);
  CHECK(resolved["b"] == 0.3);
  CHECK(resolved["costs"] == Json{"l2"});

  // The resolved copy is itself a valid config.
  const auto again = run({"example1", "--config", dir / "ex/resolved_config.json"});
  CHECK(again.code == 0);
  CHECK(snapshot(dir / "ex").size() == 2);

  std::ofstream(cfg) << R"({"example1": {"mm": 5}})";
  auto bad = run({"example1", "--config", cfg, "--out", dir / "bad"});
  CHECK(bad.code == 1);
  CHECK(contains(bad.err, "unknown key 'mm'"));
  std::ofstream(cfg) << R"({"examples": {}})";
  bad = run({"example1", "--config", cfg, "--out", dir / "bad"});
  CHECK(bad.code == 1);
  CHECK(contains(bad.err, "unknown config section"));
  std::ofstream(cfg) << R"({"example1": {"m": "eleven"}})";
  CHECK(run({"example1", "--config", cfg, "--out", dir / "bad"}).code == 1);
  CHECK(run({"example1", "--config", dir / "missing.json"}).code == 1);
}

TEST_CASE("command-line errors exit with 1") {
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"example1", "--bogus"}).code == 1);
  CHECK(run({"example1", "--m", "many"}).code == 1);
  CHECK(run({"example1", "--costs", "l3"}).code == 1);
  CHECK(run({"example1", "--b", "-1"}).code == 1);
  CHECK(run({"example1", "--help"}).code == 0);
}

TEST_CASE("synth is deterministic and records its seeds") {
  TempDir dir;
  const std::vector<std::string> spec{"--count", "4", "--seed", "3", "--degradation-seed", "9"};
  synth(dir, "a", spec);
  synth(dir, "b", spec);
  const auto a = snapshot(dir.path() / "a");
  auto b = snapshot(dir.path() / "b");
  CHECK(a.size() == 4 * 2 + 2);
  // The resolved config names its own output directory.
  b["resolved_config.json"] = a.at("resolved_config.json");
  CHECK(a == b);

  const Json manifest = read_json(dir / "a/manifest.json");
  REQUIRE(manifest["images"].size() == 4);
  for (const Json& img : manifest["images"]) {
    CHECK(img.contains("clean_seed"));
    CHECK(img.contains("degradation_seed"));
  }
  CHECK(manifest["degradation"]["kind"] == "freq-sparse");
  CHECK(manifest["degradation"]["seed"] == 9);

  synth(dir, "c", {"--count", "2", "--start-index", "2", "--seed", "3", "--degradation-seed", "9",
                   "--write", "degraded"});
  CHECK(!std::filesystem::exists(dir.path() / "c/clean"));
  CHECK(read_file(dir / "c/degraded/000002.pgm") == a.at("degraded/000002.pgm"));
}

TEST_CASE("synth with zero spikes leaves images unchanged") {
  TempDir dir;
  synth(dir, "k0", {"--count", "3", "--spikes", "0"});
  for (const char* name : {"000000.pgm", "000001.pgm", "000002.pgm"})
    CHECK(read_file(dir / ("k0/clean/" + std::string(name))) ==
          read_file(dir / ("k0/degraded/" + std::string(name))));
  CHECK(run({"synth", "--kind", "fog", "--out", dir / "bad"}).code == 1);
  CHECK(run({"synth", "--write", "all", "--out", dir / "bad"}).code == 1);
}

TEST_CASE("analyze reports histograms and fits") {
  TempDir dir;
  synth(dir, "s", {"--count", "12", "--amplitude", "2"});

  auto r = run({"analyze", "--degraded", dir / "s/degraded", "--clean", dir / "s/clean",
                "--nbins", "20", "--out", dir / "an"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const Json fit = read_json(dir / "an/ggfit.json");
  CHECK(fit["pairs"] == 12);
  CHECK(fit["fit"]["gamma"].get<double>() < 1.0);
  const std::string csv = read_file(dir / "an/histogram.csv");
  CHECK(csv.rfind("bin_lo,bin_hi,count\n", 0) == 0);

  r = run({"analyze", "--degraded", dir / "s/clean", "--clean", dir / "s/clean", "--nbins", "4",
           "--max-magnitude", "1", "--out", dir / "same"});
  REQUIRE(r.code == 0);
  CHECK(read_file(dir / "same/histogram.csv") ==
        "bin_lo,bin_hi,count\n0,0.25,1024\n0.25,0.5,0\n0.5,0.75,0\n0.75,1,0\n");
  CHECK(read_json(dir / "same/ggfit.json")["fit"].is_null());

  // A mismatched size and a missing counterpart are both listed.
  std::filesystem::create_directories(dir.path() / "odd");
  for (const char* name : {"000000.pgm", "000001.pgm"})
    std::filesystem::copy_file(dir / ("s/clean/" + std::string(name)), dir / ("odd/" + std::string(name)));
  sotlab::write_image(sotlab::Image(16, 16, 1, 0.5), dir / "odd/000001.pgm");
  std::filesystem::remove(dir.path() / "odd/000000.pgm");
  sotlab::write_image(sotlab::Image(32, 32, 1, 0.5), dir / "odd/extra.pgm");
  r = run({"analyze", "--degraded", dir / "odd", "--clean", dir / "s/clean", "--out", dir / "bad"});
  CHECK(r.code == 1);
  CHECK(contains(r.err, "000001.pgm: 16x16x1"));
  CHECK(contains(r.err, "extra.pgm: no counterpart"));
  CHECK(contains(r.err, "000002.pgm: no counterpart"));

  std::ofstream(dir / "odd/000003.pgm") << "P5 garbage";
  r = run({"analyze", "--degraded", dir / "odd", "--clean", dir / "s/clean", "--out", dir / "bad"});
  CHECK(r.code == 1);
  CHECK(contains(r.err, "000003.pgm"));
}

TEST_CASE("train labels, resumes and aborts") {
  TempDir dir;
  synth(dir, "c", {"--count", "6", "--seed", "1", "--write", "clean"});
  synth(dir, "d", {"--count", "6", "--seed", "2", "--amplitude", "2", "--write", "degraded"});
  const std::vector<std::string> base{"train",        "--degraded",   dir / "d/degraded",
                                      "--clean",      dir / "c/clean", "--batch-size",
                                      "4",            "--lambda",     "10"};
  const auto train = [&](std::vector<std::string> extra) {
    std::vector<std::string> args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return run(args);
  };

  auto r = train({"--q", "2", "--eps", "0", "--iterations", "3", "--out", dir / "ot"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const std::string ot_log = read_file(dir / "ot/train_log.csv");
  CHECK(ot_log.rfind("# OT baseline (q=2, lambda=10)\n", 0) == 0);
  CHECK(contains(ot_log, "\niter,fidelity,divergence,total\n0,"));
  CHECK(read_json(dir / "ot/model.json")["model"]["gains"].size() == 2 * 32 * 32);

  REQUIRE(train({"--iterations", "9", "--out", dir / "full"}).code == 0);
  REQUIRE(train({"--iterations", "4", "--out", dir / "part"}).code == 0);
  r = train({"--iterations", "9", "--resume", dir / "part/model.json", "--out", dir / "resumed"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(read_file(dir / "full/model.json") == read_file(dir / "resumed/model.json"));
  const std::string full_log = read_file(dir / "full/train_log.csv");
  const std::string resumed_log = read_file(dir / "resumed/train_log.csv");
  const std::string tail = resumed_log.substr(resumed_log.find("\n4,") + 1);
  CHECK(full_log.substr(full_log.size() - tail.size()) == tail);
  CHECK(read_file(dir / "full/train_log.csv").rfind("# SOT (q=1", 0) == 0);

  r = train({"--iterations", "9", "--q", "0.5", "--resume", dir / "part/model.json", "--out",
             dir / "bad"});
  CHECK(r.code == 1);
  CHECK(contains(r.err, "different configuration"));

  r = train({"--q", "2", "--eps", "0", "--learning-rate", "50", "--iterations", "200", "--out",
             dir / "div"});
  CHECK(r.code == 2);
  const Json model = read_json(dir / "div/model.json");
  CHECK(model["status"] == "diverged");
  CHECK(model["iterations_completed"].get<int>() < 200);
  for (const Json& g : model["model"]["gains"]) CHECK(std::isfinite(g.get<double>()));
  r = train({"--iterations", "9", "--resume", dir / "div/model.json", "--out", dir / "bad"});
  CHECK(r.code == 1);

  CHECK(train({"--q", "3", "--out", dir / "bad"}).code == 1);
  CHECK(run({"train", "--clean", dir / "c/clean"}).code == 1);
}

TEST_CASE("restore and eval") {
  TempDir dir;
  synth(dir, "s", {"--count", "3", "--amplitude", "2"});
  REQUIRE(run({"train", "--degraded", dir / "s/degraded", "--clean", dir / "s/clean", "--iterations",
               "2", "--out", dir / "m"})
              .code == 0);
  auto r = run({"restore", "--model", dir / "m/model.json", "--input", dir / "s/degraded", "--out",
                dir / "r"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(snapshot(dir.path() / "r").size() == 4);

  r = run({"eval", "--restored", dir / "s/clean", "--reference", dir / "s/clean", "--out", dir / "e"});
  REQUIRE(r.code == 0);
  const Json report = read_json(dir / "e/report.json");
  REQUIRE(report["images"].size() == 3);
  CHECK(report["images"][0]["name"] == "000000.pgm");
  CHECK(report["images"][0]["psnr_db"] == "inf");
  CHECK(report["images"][0]["ssim"] == 1.0);
  CHECK(report["mean"]["psnr_db"] == "inf");
  CHECK(report["mean"]["ssim"] == 1.0);
  CHECK(report["perceptual_metrics_available"] == false);

  r = run({"eval", "--restored", dir / "r", "--reference", dir / "s/clean", "--out", dir / "e2"});
  REQUIRE(r.code == 0);
  const Json restored = read_json(dir / "e2/report.json");
  CHECK(restored["mean"]["psnr_db"].is_number());

  std::filesystem::remove(dir.path() / "r/000001.pgm");
  r = run({"eval", "--restored", dir / "r", "--reference", dir / "s/clean", "--out", dir / "bad"});
  CHECK(r.code == 1);
  CHECK(contains(r.err, "000001.pgm: no counterpart"));

  std::filesystem::create_directories(dir.path() / "big");
  sotlab::write_image(sotlab::Image(40, 32, 1, 0.5), dir / "big/x.pgm");
  r = run({"restore", "--model", dir / "m/model.json", "--input", dir / "big", "--out", dir / "bad"});
  CHECK(r.code == 1);
  CHECK(contains(r.err, "x.pgm"));
  CHECK(contains(r.err, "pad by 24 rows"));
}

TEST_CASE("output root applies to relative output paths") {
  TempDir dir;
  ::setenv("SOTLAB_OUTPUT_ROOT", dir.path().c_str(), 1);
  const auto r = run({"example1", "--out", "rel"});
  ::unsetenv("SOTLAB_OUTPUT_ROOT");
  REQUIRE(r.code == 0);
  CHECK(std::filesystem::exists(dir.path() / "rel/example1.json"));
  CHECK(std::filesystem::exists(dir.path() / "rel/run_info.json"));
}
