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

#include "skymatte/color.hpp"
#include "skymatte/errors.hpp"
#include "skymatte/refine.hpp"
#include "skymatte/synthetic.hpp"
#include "support/oracles.hpp"

using namespace skymatte;

namespace {

BinaryMask disk_mask(int n, double cx, double cy, double r) {
  BinaryMask m(n, n);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      m.set(x, y, (x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r);
    }
  }
  return m;
}

// Edge set by the 4-neighbor Laplacian, then dilation by testing every
// pixel of an explicit disk structuring element.
BinaryMask brute_band(const BinaryMask& m, int radius) {
  const int w = m.width, h = m.height;
  auto v = [&](int x, int y) {
    return m.at(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1)) ? 1 : 0;
  };
  BinaryMask edges(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      edges.set(x, y, v(x - 1, y) + v(x + 1, y) + v(x, y - 1) + v(x, y + 1) != 4 * v(x, y));
    }
  }
  BinaryMask out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      bool hit = false;
      for (int dy = -radius; dy <= radius && !hit; ++dy) {
        for (int dx = -radius; dx <= radius && !hit; ++dx) {
          if (dx * dx + dy * dy > radius * radius) continue;
          const int sx = x + dx, sy = y + dy;
          if (sx >= 0 && sx < w && sy >= 0 && sy < h && edges.at(sx, sy)) hit = true;
        }
      }
      out.set(x, y, hit);
    }
  }
  return out;
}

double mae(const PlanarImage& a, const PlanarImage& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) s += std::abs(a.data()[i] - b.data()[i]);
  return s / static_cast<double>(a.data().size());
}

RefinePipelineParams ade20k_de_gf() {
  RefinePipelineParams p;
  p.gf = {16, 0.01, 0.01};
  p.density = {0.01, 1024, 0.97, 0, false};
  return p;
}

}  // namespace

TEST_CASE("RefinePipelineParams validation") {
  CHECK_NOTHROW(RefinePipelineParams{}.validate());
  RefinePipelineParams p;
  p.dilation_radius = -1;
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
  p = {};
  p.t_s = 0.0;
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
}

TEST_CASE("boundary band") {
  CHECK(boundary_band(BinaryMask(6, 5, true), 3).count() == 0);
  CHECK(boundary_band(BinaryMask(6, 5, false), 0).count() == 0);

  BinaryMask half(6, 6);
  for (int y = 0; y < 3; ++y) {
    for (int x = 0; x < 6; ++x) half.set(x, y, true);
  }
  const BinaryMask b0 = boundary_band(half, 0);
  for (int y = 0; y < 6; ++y) {
    for (int x = 0; x < 6; ++x) CHECK(b0.at(x, y) == (y == 2 || y == 3));
  }

  for (int r : {0, 1, 2, 3}) {
    CAPTURE(r);
    const BinaryMask disk = disk_mask(8, 3.5, 3.5, 2.5);
    CHECK(boundary_band(disk, r) == brute_band(disk, r));
    const BinaryMask blob = disk_mask(19, 7.2, 9.9, 5.3);
    CHECK(boundary_band(blob, r) == brute_band(blob, r));
  }
  CHECK_THROWS_AS(boundary_band(half, -1), InvalidParameter);
}

TEST_CASE("build_trimap") {
  const BinaryMask disk = disk_mask(8, 3.5, 3.5, 2.5);
  const Trimap plain = build_trimap(disk, BinaryMask(8, 8));
  CHECK(plain.count(Label::kUndetermined) == 0);
  CHECK(plain.count(Label::kSky) == disk.count());
  CHECK(build_trimap(disk, BinaryMask(8, 8, true)).count(Label::kUndetermined) == 64);

  // 6x1 strip: mask 111000, band at x = 2..3, extra at x = 5.
  BinaryMask m(6, 1), band(6, 1), extra(6, 1);
  for (int x = 0; x < 3; ++x) m.set(x, 0, true);
  band.set(2, 0, true);
  band.set(3, 0, true);
  extra.set(5, 0, true);
  const Trimap t = build_trimap(m, band, &extra);
  const Label expect[6] = {Label::kSky, Label::kSky, Label::kUndetermined,
                           Label::kUndetermined, Label::kNotSky, Label::kUndetermined};
  for (int x = 0; x < 6; ++x) CHECK(t.at(x, 0) == expect[x]);

  // Disk + 2-pixel band + 3x3 extra block in a corner.
  BinaryMask corner(8, 8);
  for (int y = 5; y < 8; ++y) {
    for (int x = 5; x < 8; ++x) corner.set(x, y, true);
  }
  const BinaryMask b2 = boundary_band(disk, 2);
  const Trimap full = build_trimap(disk, b2, &corner);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      const Label want = (b2.at(x, y) || corner.at(x, y)) ? Label::kUndetermined
                         : disk.at(x, y)                  ? Label::kSky
                                                          : Label::kNotSky;
      CHECK(full.at(x, y) == want);
    }
  }
  CHECK_THROWS_AS(build_trimap(m, BinaryMask(5, 1)), InvalidInput);
}

TEST_CASE("sharpen curve") {
  for (double t : {0.5, 5.0, 15.0, 40.0}) {
    CHECK(sharpen(0.0, t) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(sharpen(0.5, t) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(sharpen(1.0, t) == doctest::Approx(1.0).epsilon(1e-15));
    double prev = -1.0;
    for (int i = 0; i <= 100; ++i) {
      const double v = sharpen(i / 100.0, t);
      CHECK(v > prev);
      prev = v;
    }
  }
  for (double x = 0.0; x <= 1.0; x += 0.125) {
    CHECK(std::abs(sharpen(x, 1e-4) - x) < 1e-3);
  }
  // (h(3.75) - h(-7.5)) / (h(7.5) - h(-7.5)), h the logistic function.
  CHECK(sharpen(0.75, 15.0) == doctest::Approx(0.9775505896).epsilon(1e-9));
  CHECK_THROWS_AS(sharpen(0.5, 0.0), InvalidParameter);
  CHECK_THROWS_AS(sharpen(0.5, -3.0), InvalidParameter);

  PlanarImage a(3, 1, 1, ColorSpace::kMask);
  a.at(0, 0) = 0.0;
  a.at(1, 0) = 0.75;
  a.at(2, 0) = 1.0;
  const PlanarImage s = sharpen_mask(a, 15.0);
  CHECK(s.colorspace() == ColorSpace::kMask);
  CHECK(s.at(0, 0) >= 0.0);
  CHECK(s.at(2, 0) <= 1.0);
  CHECK(s.at(1, 0) == doctest::Approx(0.9775505896));
  CHECK_THROWS_AS(sharpen_mask(a, 0.0), InvalidParameter);
}

TEST_CASE("refine_annotation on a uniform sky") {
  PlanarImage rgb(40, 30, 3, ColorSpace::kRgb, 0.6);
  const BinaryMask all(40, 30, true);
  for (bool density : {true, false}) {
    RefinePipelineParams p = ade20k_de_gf();
    p.use_density = density;
    const PlanarImage alpha = refine_annotation(rgb, all, p);
    for (double v : alpha.data()) CHECK(v >= 0.95);
  }
}

TEST_CASE("refine_annotation on the synthetic scene") {
  SyntheticParams sp;
  sp.width = 256;
  sp.height = 192;
  sp.seed = 5;
  const SyntheticScene scene = make_synthetic_scene(sp);
  const PlanarImage raw = scene.annotation.to_image();
  const RefinePipelineParams p = ade20k_de_gf();
  const PlanarImage alpha = refine_annotation(scene.rgb, scene.annotation, p);
  const double refined = mae(alpha, scene.alpha);
  CHECK(refined < 0.05);
  CHECK(refined < mae(raw, scene.alpha));
  for (double v : alpha.data()) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  // The same result from the equivalent trimap.
  const Trimap t = build_trimap(scene.annotation,
                                boundary_band(scene.annotation, p.dilation_radius));
  CHECK(refine_annotation(scene.rgb, t, p) == alpha);

  // Sky pixels far from any label boundary end near 1.
  const BinaryMask band = boundary_band(scene.annotation, 2 * p.gf.s * p.dilation_radius);
  const BinaryMask cables = BinaryMask::from_image(scene.alpha, 0.999);
  for (int y = 0; y < sp.height; ++y) {
    for (int x = 0; x < sp.width; ++x) {
      if (scene.annotation.at(x, y) && !band.at(x, y) && cables.at(x, y)) {
        CHECK(alpha.at(x, y) > 0.95);
      }
    }
  }
}

TEST_CASE("filtering an already correct continuous alpha changes it little") {
  SyntheticParams sp;
  sp.width = 256;
  sp.height = 192;
  sp.seed = 6;
  const SyntheticScene scene = make_synthetic_scene(sp);
  const PlanarImage yuv = rgb_to_yuv(scene.rgb);
  const PlanarImage y = modified_guided_filter(
      yuv, scene.alpha, ConfidenceMap::uniform(sp.width, sp.height, 0.8),
      {16, 0.01, 0.01});
  CHECK(mae(y, scene.alpha) < 0.02);
}

TEST_CASE("refine_annotation errors") {
  const PlanarImage rgb(10, 10, 3, ColorSpace::kRgb, 0.5);
  CHECK_THROWS_AS(refine_annotation(rgb, BinaryMask(9, 10, true), ade20k_de_gf()),
                  InvalidInput);
  CHECK_THROWS_AS(refine_annotation(rgb, Trimap(10, 9), ade20k_de_gf()), InvalidInput);
  CHECK_THROWS_AS(refine_annotation(rgb, Trimap(10, 10), ade20k_de_gf()), EmptyReference);
  CHECK_THROWS_AS(refine_annotation(PlanarImage(10, 10, 1), BinaryMask(10, 10), ade20k_de_gf()),
                  InvalidInput);
}

// Frozen output of the 1024x768 deployment path (256x256 probability, s=64,
// default inference confidence). Guards against silent numeric drift.
TEST_CASE("upsample_probability regression values") {
  SyntheticParams sp;
  sp.width = 1024;
  sp.height = 768;
  sp.seed = 1;
  const SyntheticScene scene = make_synthetic_scene(sp);
  const PlanarImage a = upsample_probability(scene.probability, scene.rgb, {64, 0.01, 0.01}, {});
  double sum = 0.0;
  for (double v : a.data()) sum += v;
  CHECK(sum / static_cast<double>(a.data().size()) ==
        doctest::Approx(0.54445556101750292).epsilon(1e-9));
  const struct {
    int x, y;
    double v;
  } golden[] = {{0, 0, 1.0},
                {511, 300, 0.99878076041134567},
                {100, 420, 0.0091896016620589549},
                {900, 430, 0.98619646044926057},
                {1023, 767, 0.0},
                {700, 380, 0.99558394362879032},
                {300, 450, 0.0081688255314519287}};
  for (const auto& g : golden) {
    CAPTURE(g.x);
    CAPTURE(g.y);
    CHECK(std::abs(a.at(g.x, g.y) - g.v) < 1e-9);
  }
  CHECK(mae(a, scene.alpha) < 0.05);
}
