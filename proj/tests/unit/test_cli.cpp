// Copyright 2026 The skymatte Authors
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

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "skymatte/cli.hpp"
#include "skymatte/effects.hpp"
#include "skymatte/io.hpp"
#include "skymatte/synthetic.hpp"
#include "support/oracles.hpp"

using namespace skymatte;
namespace fs = std::filesystem;
using skymatte::testing::file_bytes;
using skymatte::testing::scratch_dir;

namespace {

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), {"--log-level", "off"});
  return cli::run(args);
}

double mae(const PlanarImage& a, const PlanarImage& b) {
  REQUIRE(a.data().size() == b.data().size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) s += std::abs(a.data()[i] - b.data()[i]);
  return s / static_cast<double>(a.data().size());
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream(p, std::ios::binary) << s;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path synth(const std::string& name, int w = 256, int h = 192) {
  const fs::path dir = scratch_dir(name);
  REQUIRE(run_cli({"synth", "--width", std::to_string(w), "--height", std::to_string(h),
               "--out-dir", dir.string()}) == cli::kOk);
  return dir;
}

}  // namespace

TEST_CASE("cli usage errors") {
  CHECK(run_cli({}) == cli::kUsageError);
  CHECK(run_cli({"frobnicate"}) == cli::kUsageError);
  CHECK(run_cli({"upsample", "--probability", "x.pfm"}) == cli::kUsageError);
  CHECK(run_cli({"--preset", "nope", "synth", "--out-dir", "/tmp/x"}) == cli::kUsageError);
  CHECK(run_cli({"--isa", "sse9", "synth", "--out-dir", "/tmp/x"}) == cli::kUsageError);
  CHECK(run_cli({"--help"}) == cli::kOk);
  const fs::path dir = scratch_dir("cli_usage");
  write_text(dir / "bad.json", R"({"gf": {"s": -4}})");
  write_text(dir / "m.json", "[]");
  CHECK(run_cli({"--config", (dir / "bad.json").string(), "refine", "--manifest",
             (dir / "m.json").string()}) == cli::kUsageError);
  CHECK(run_cli({"refine", "--manifest", (dir / "missing.json").string()}) == cli::kUsageError);
}

TEST_CASE("synth writes a deterministic scene") {
  const fs::path a = synth("cli_synth_a", 64, 48);
  const fs::path b = synth("cli_synth_b", 64, 48);
  for (const char* f : {"rgb.pfm", "rgb.png", "alpha.pfm", "annotation.png", "trimap.png",
                        "probability.pfm", "manifest.json"}) {
    CAPTURE(f);
    CHECK(fs::exists(a / f));
    CHECK(file_bytes(a / f) == file_bytes(b / f));
  }
}

TEST_CASE("refine manifest") {
  const fs::path dir = synth("cli_refine");
  write_text(dir / "empty.json", "[]");
  CHECK(run_cli({"refine", "--manifest", (dir / "empty.json").string()}) == cli::kOk);

  REQUIRE(run_cli({"refine", "--manifest", (dir / "manifest.json").string()}) == cli::kOk);
  const PlanarImage gt = read_image(dir / "alpha.pfm");
  const PlanarImage refined = read_image(dir / "refined.pfm");
  const PlanarImage raw = read_image(dir / "annotation.png");
  CHECK(mae(refined, gt) < 0.05);
  CHECK(mae(refined, gt) < mae(raw, gt));

  // Trimap annotations are detected automatically.
  write_text(dir / "tri.json",
             R"([{"image_path": "rgb.pfm", "annotation_path": "trimap.png",
                  "output_path": "tri_out.pfm"}])");
  CHECK(run_cli({"refine", "--manifest", (dir / "tri.json").string()}) == cli::kOk);
  CHECK(mae(read_image(dir / "tri_out.pfm"), gt) < 0.05);

  // An extra undetermined region goes through the inpainting path.
  BinaryMask strip(256, 192);
  for (int y = 90; y < 110; ++y) {
    for (int x = 0; x < 256; ++x) strip.set(x, y, true);
  }
  write_png(dir / "extra.png", strip.to_image(), {.png_bit_depth = 8});
  write_text(dir / "extra.json",
             R"([{"image_path": "rgb.pfm", "annotation_path": "annotation.png",
                  "undetermined_path": "extra.png", "output_path": "e1.pfm"},
                 {"image_path": "rgb.pfm", "annotation_path": "trimap.png",
                  "undetermined_path": "extra.png", "output_path": "e2.pfm"}])");
  CHECK(run_cli({"refine", "--manifest", (dir / "extra.json").string()}) == cli::kOk);
  const PlanarImage e1 = read_image(dir / "e1.pfm");
  const PlanarImage e2 = read_image(dir / "e2.pfm");
  CHECK_FALSE(e1 == refined);
  CHECK(mae(e1, gt) < 0.1);
  CHECK(mae(e2, gt) < 0.1);

  // One broken entry does not stop the others.
  write_text(dir / "mixed.json",
             R"([{"image_path": "rgb.pfm", "annotation_path": "annotation.png",
                  "output_path": "m1.pfm"},
                 {"image_path": "nope.pfm", "annotation_path": "annotation.png",
                  "output_path": "m2.pfm"},
                 {"image_path": "rgb.pfm", "annotation_path": "annotation.png",
                  "output_path": "m3.png", "params": {"preset": "ade20k-gf"}}])");
  CHECK(run_cli({"refine", "--manifest", (dir / "mixed.json").string()}) == cli::kPartialFailure);
  CHECK(fs::exists(dir / "m1.pfm"));
  CHECK_FALSE(fs::exists(dir / "m2.pfm"));
  CHECK(fs::exists(dir / "m3.png"));
  CHECK(file_bytes(dir / "m1.pfm") == file_bytes(dir / "refined.pfm"));
}

TEST_CASE("upsample") {
  const fs::path dir = synth("cli_upsample");
  const std::string out = (dir / "up.pfm").string();
  REQUIRE(run_cli({"upsample", "--probability", (dir / "probability.pfm").string(), "--reference",
               (dir / "rgb.pfm").string(), "--output", out}) == cli::kOk);
  const PlanarImage gt = read_image(dir / "alpha.pfm");
  const PlanarImage up = read_image(out);
  CHECK(up.width() == 256);
  CHECK(up.height() == 192);
  CHECK(mae(up, gt) < 0.05);

  const PlanarImage ref(64, 48, 3, ColorSpace::kRgb, 0.3);
  write_pfm(dir / "flat.pfm", ref);
  write_pfm(dir / "ones.pfm", PlanarImage(16, 16, 1, ColorSpace::kMask, 1.0));
  write_pfm(dir / "p04.pfm", PlanarImage(16, 16, 1, ColorSpace::kMask, 0.4));
  REQUIRE(run_cli({"upsample", "--probability", (dir / "ones.pfm").string(), "--reference",
               (dir / "flat.pfm").string(), "--output", (dir / "o1.pfm").string()}) == cli::kOk);
  const PlanarImage o1 = read_image(dir / "o1.pfm");
  for (double v : o1.data()) CHECK(v >= 0.95);
  REQUIRE(run_cli({"upsample", "--probability", (dir / "p04.pfm").string(), "--reference",
               (dir / "flat.pfm").string(), "--output", (dir / "o2.pfm").string()}) == cli::kOk);
  const PlanarImage o2 = read_image(dir / "o2.pfm");
  for (double v : o2.data()) CHECK(v == doctest::Approx(0.4).epsilon(1e-6));

  CHECK(run_cli({"upsample", "--probability", (dir / "rgb.pfm").string(), "--reference",
             (dir / "rgb.pfm").string(), "--output", (dir / "bad.pfm").string()}) ==
        cli::kPartialFailure);
}

TEST_CASE("grade") {
  const fs::path dir = synth("cli_grade", 96, 64);
  const std::string rgb = (dir / "rgb.pfm").string();
  const std::string matte = (dir / "alpha.pfm").string();
  write_text(dir / "empty.json", R"({"effects": []})");
  REQUIRE(run_cli({"grade", "--image", (dir / "rgb.png").string(), "--matte", matte, "--grading",
               (dir / "empty.json").string(), "--output", (dir / "copy.png").string()}) ==
          cli::kOk);
  CHECK(file_bytes(dir / "copy.png") == file_bytes(dir / "rgb.png"));

  write_text(dir / "neutral.json", R"({"effects": [{"effect": "darken", "b_d": 0.5}]})");
  REQUIRE(run_cli({"grade", "--image", rgb, "--matte", matte, "--grading",
               (dir / "neutral.json").string(), "--output", (dir / "n.pfm").string()}) ==
          cli::kOk);
  CHECK(read_image(dir / "n.pfm") == read_image(rgb));

  write_text(dir / "full.json", R"({"effects": [
      {"effect": "wb", "gains_sky": [0.9, 1.0, 1.1]},
      {"effect": "contrast", "b_c": 0.6},
      {"effect": "darken", "b_d": 0.35},
      {"effect": "denoise", "sky_rendition": "rgb.pfm", "t_d": 0.8}]})");
  REQUIRE(run_cli({"grade", "--image", rgb, "--matte", matte, "--grading",
               (dir / "full.json").string(), "--output", (dir / "f.pfm").string()}) ==
          cli::kOk);
  const PlanarImage in = read_image(rgb);
  const PlanarImage a = read_image(matte);
  PlanarImage expect = apply_dual_wb(
      enhance_contrast(darken_sky(composite_denoised(in, in, a, 0.8), a, 0.35), a, 0.6), a,
      {1, 1, 1}, {0.9, 1.0, 1.1});
  const PlanarImage got = read_image(dir / "f.pfm");
  for (std::size_t i = 0; i < got.data().size(); ++i) {
    CHECK(got.data()[i] == static_cast<double>(static_cast<float>(expect.data()[i])));
  }

  write_text(dir / "dup.json", R"({"effects": [{"effect": "darken", "b_d": 0.3},
                                              {"effect": "darken", "b_d": 0.4}]})");
  CHECK(run_cli({"grade", "--image", rgb, "--matte", matte, "--grading",
             (dir / "dup.json").string(), "--output", (dir / "d.pfm").string()}) ==
        cli::kUsageError);
}

TEST_CASE("eval") {
  const fs::path root = scratch_dir("cli_eval");
  fs::create_directories(root / "pred");
  fs::create_directories(root / "gt");
  PlanarImage gt(4, 4, 1, ColorSpace::kMask);
  const double g[16] = {1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0};
  const double p[16] = {0.9, 0.6, 0.5, 0.7, 1.0, 0.8, 0.2, 0.0,
                        0.55, 0.0, 0.0, 0.51, 0.0, 0.49, 0.1, 0.3};
  PlanarImage pred = gt;
  for (int i = 0; i < 16; ++i) {
    gt.data()[i] = g[i];
    pred.data()[i] = p[i];
  }
  write_pfm(root / "gt" / "a.pfm", gt);
  write_pfm(root / "pred" / "a.pfm", gt);
  const std::string csv = (root / "r.csv").string();
  const std::string json = (root / "r.json").string();
  REQUIRE(run_cli({"eval", "--pred-dir", (root / "pred").string(), "--gt-dir",
               (root / "gt").string(), "--csv", csv, "--json", json}) == cli::kOk);
  const std::string text = read_text(csv);
  CHECK(text.rfind("image,status,miou_05,mcr_05,rmse,mae,boundary_loss,jsd,pixels\n", 0) == 0);
  const auto report = nlohmann::json::parse(read_text(json));
  CHECK(report["aggregate"]["miou_05"].get<double>() == 1.0);
  CHECK(report["aggregate"]["mae"].get<double>() == 0.0);

  write_pfm(root / "pred" / "a.pfm", pred);
  REQUIRE(run_cli({"eval", "--pred-dir", (root / "pred").string(), "--gt-dir",
               (root / "gt").string(), "--json", json, "--csv", csv}) == cli::kOk);
  const auto r2 = nlohmann::json::parse(read_text(json));
  CHECK(r2["aggregate"]["miou_05"].get<double>() == doctest::Approx(6.0 / 9.0));
  CHECK(r2["aggregate"]["mcr_05"].get<double>() == doctest::Approx(3.0 / 16.0));

  write_pfm(root / "pred" / "b.pfm", PlanarImage(5, 4, 1, ColorSpace::kMask));
  write_pfm(root / "gt" / "b.pfm", PlanarImage(4, 4, 1, ColorSpace::kMask));
  CHECK(run_cli({"eval", "--pred-dir", (root / "pred").string(), "--gt-dir",
             (root / "gt").string(), "--csv", csv}) == cli::kPartialFailure);
  CHECK(read_text(csv).find("a.pfm,ok") != std::string::npos);
  CHECK(run_cli({"eval", "--pred-dir", (root / "nope").string(), "--gt-dir",
             (root / "gt").string()}) == cli::kUsageError);
}

TEST_CASE("bench smoke run") {
  const fs::path dir = scratch_dir("cli_bench");
  const std::string csv = (dir / "b.csv").string();
  REQUIRE(run_cli({"bench", "--sizes", "128x96", "--s", "8,16", "--reps", "1", "--probability-size",
               "32x32", "--csv", csv}) == cli::kOk);
  const std::string text = read_text(csv);
  std::istringstream in(text);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 3);
  CHECK(text.find("128,96,8,1,") != std::string::npos);
  CHECK(run_cli({"bench", "--sizes", "12by9"}) == cli::kUsageError);
  CHECK(run_cli({"bench", "--reps", "0"}) == cli::kUsageError);
}
