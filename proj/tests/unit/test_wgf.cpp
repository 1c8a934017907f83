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

#include <array>
#include <cmath>

#include "skymatte/confidence.hpp"
#include "skymatte/errors.hpp"
#include "skymatte/kernels.hpp"
#include "skymatte/parallel.hpp"
#include "skymatte/wgf.hpp"
#include "support/oracles.hpp"

using namespace skymatte;
using skymatte::testing::random_image;

namespace {

double max_abs_diff(const PlanarImage& a, const PlanarImage& b) {
  REQUIRE(a.data().size() == b.data().size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  }
  return m;
}

// Smooth, well-conditioned 3-channel reference: independent ramps plus
// texture so every local covariance is full rank.
PlanarImage textured_reference(int w, int h, std::uint64_t seed) {
  PlanarImage noise = random_image(w, h, 3, seed);
  PlanarImage ref(w, h, 3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double u = static_cast<double>(x) / w;
      const double v = static_cast<double>(y) / h;
      ref.at(x, y, 0) = 0.25 + 0.25 * u + 0.5 * noise.at(x, y, 0);
      ref.at(x, y, 1) = 0.5 * v + 0.5 * noise.at(x, y, 1);
      ref.at(x, y, 2) = 0.5 * (1 - u) * v + 0.5 * noise.at(x, y, 2);
    }
  }
  return ref;
}

}  // namespace

TEST_CASE("GuidedFilterParams validation and low_res_extent") {
  CHECK_NOTHROW(GuidedFilterParams{}.validate());
  CHECK_THROWS_AS((GuidedFilterParams{0, 0.01, 0.01}.validate()), InvalidParameter);
  CHECK_THROWS_AS((GuidedFilterParams{4, 0.0, 0.01}.validate()), InvalidParameter);
  CHECK_THROWS_AS((GuidedFilterParams{4, 0.01, -1.0}.validate()), InvalidParameter);
  CHECK(low_res_extent(1024, 64) == 16);
  CHECK(low_res_extent(768, 64) == 12);
  CHECK(low_res_extent(10, 4) == 3);
  CHECK(low_res_extent(3, 8) == 1);
  CHECK_THROWS_AS(low_res_extent(10, 0), InvalidParameter);
}

TEST_CASE("bilinear_downsample matches the direct 2-D tent average") {
  for (auto [w, h, s] : {std::array{8, 8, 4}, std::array{13, 7, 3},
                         std::array{10, 10, 1}, std::array{5, 9, 8},
                         std::array{33, 17, 2}}) {
    CAPTURE(w);
    CAPTURE(s);
    const PlanarImage x = random_image(w, h, 2, 100 + w);
    const PlanarImage got = bilinear_downsample(x, s);
    CHECK(got.width() == low_res_extent(w, s));
    CHECK(got.height() == low_res_extent(h, s));
    CHECK(max_abs_diff(got, skymatte::testing::brute_downsample(x, s)) < 1e-14);
  }
}

TEST_CASE("weighted_downsample") {
  const std::array<double, 1> k{0.37};
  const PlanarImage konst = PlanarImage::constant(12, 9, k);
  PlanarImage c = random_image(12, 9, 1, 20, 0.01, 1.0);
  const PlanarImage low = weighted_downsample(konst, c, 4);
  for (double v : low.data()) CHECK(v == doctest::Approx(0.37).epsilon(1e-14));

  const PlanarImage x = random_image(12, 9, 3, 21);
  const PlanarImage ones(12, 9, 1, ColorSpace::kGeneric, 1.0);
  CHECK(max_abs_diff(weighted_downsample(x, ones, 4), bilinear_downsample(x, 4)) < 1e-15);

  // 8x8, s=4, varying confidence: ds(x c) / ds(c) evaluated directly.
  const PlanarImage x8 = random_image(8, 8, 1, 22);
  const PlanarImage c8 = random_image(8, 8, 1, 23, 0.01, 1.0);
  const PlanarImage xc = hadamard(x8, c8);
  const PlanarImage num = skymatte::testing::brute_downsample(xc, 4);
  const PlanarImage den = skymatte::testing::brute_downsample(c8, 4);
  const PlanarImage got = weighted_downsample(x8, c8, 4);
  for (std::size_t i = 0; i < got.data().size(); ++i) {
    CHECK(got.data()[i] == doctest::Approx(num.data()[i] / den.data()[i]).epsilon(1e-13));
  }

  c.at(3, 3) = 0.0;
  CHECK_THROWS_AS(weighted_downsample(x, c, 4), InvalidInput);
  CHECK_THROWS_AS(weighted_downsample(x, random_image(11, 9, 1, 1, 0.1, 1), 4),
                  InvalidInput);
}

TEST_CASE("confidence dominance in the weighted mean") {
  // s = 3 puts a low-resolution center exactly on pixel (4, 4).
  PlanarImage x(9, 9, 1);
  PlanarImage c(9, 9, 1, ColorSpace::kGeneric, 0.01);
  x.at(4, 4) = 1.0;
  c.at(4, 4) = 1.0;
  const PlanarImage low = weighted_downsample(x, c, 3);
  // Tent weights per axis around an integer center: 1, 2/3, 2/3, 1/3, 1/3,
  // total 3, so the 2-D total is 9 and the other pixels weigh 8 * 0.01.
  const double expect = 1.0 / (1.0 + 0.01 * 8.0);
  CHECK(low.at(1, 1) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(low.at(1, 1) > 0.9);

  // Through the full filter with a flat reference the pixel keeps its value.
  const PlanarImage ref(9, 9, 3, ColorSpace::kYuv, 0.5);
  const PlanarImage p = to_mask(x);
  const PlanarImage y =
      modified_guided_filter(ref, p, ConfidenceMap(to_mask(c)), {3, 0.01, 0.01});
  CHECK(y.at(4, 4) > 0.9);
}

TEST_CASE("upsample stage factorization") {
  using V = std::vector<int>;
  CHECK(upsample_stages(1) == V{});
  CHECK(upsample_stages(2) == V{2});
  CHECK(upsample_stages(8) == V{2, 2, 2});
  CHECK(upsample_stages(16) == V{4, 2, 2});
  CHECK(upsample_stages(48) == V{4, 4, 3});
  CHECK(upsample_stages(64) == V{4, 4, 4});
  CHECK(upsample_stages(7) == V{7});
  CHECK(upsample_stages(12) == V{3, 2, 2});
  for (int s = 1; s <= 128; ++s) {
    const V f = upsample_stages(s);
    int prod = 1;
    for (int v : f) prod *= v;
    CHECK(prod == s);
    CHECK(f.size() <= 3);
  }
  CHECK_THROWS_AS(upsample_stages(0), InvalidParameter);
}

TEST_CASE("smooth_upsample reproduces constants and ramps") {
  for (int s : {1, 8, 16, 48, 64}) {
    CAPTURE(s);
    const std::array<double, 2> v{0.3, -2.0};
    const PlanarImage up = smooth_upsample(PlanarImage::constant(4, 3, v), s);
    CHECK(up.width() == 4 * s);
    CHECK(up.height() == 3 * s);
    for (double p : up.plane(0)) CHECK(p == doctest::Approx(0.3).epsilon(1e-14));
    for (double p : up.plane(1)) CHECK(p == doctest::Approx(-2.0).epsilon(1e-14));

    // Low-res sample j represents full-res coordinate (j + 0.5) s - 0.5.
    const int n = 8;
    PlanarImage ramp(n, 2, 1);
    for (int j = 0; j < n; ++j) {
      ramp.at(j, 0) = ramp.at(j, 1) = 0.01 * ((j + 0.5) * s - 0.5) + 0.2;
    }
    const PlanarImage r = smooth_upsample(ramp, s);
    for (int x = 2 * s; x < (n - 2) * s; ++x) {
      CHECK(std::abs(r.at(x, s) - (0.01 * x + 0.2)) < 1e-9);
    }
  }
}

TEST_CASE("smooth_upsample impulse response equals the composed tents") {
  for (int s : {8, 16, 48, 64}) {
    CAPTURE(s);
    const int n = 5;
    PlanarImage impulse(n, n, 1);
    impulse.at(2, 2) = 1.0;
    const PlanarImage got = smooth_upsample(impulse, s);
    const auto m = skymatte::testing::composed_upsample_matrix(n, upsample_stages(s));
    double worst = 0.0;
    for (int y = 0; y < n * s; ++y) {
      for (int x = 0; x < n * s; ++x) {
        worst = std::max(worst, std::abs(got.at(x, y) - m[y][2] * m[x][2]));
      }
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("solve_image_ldl3") {
  PlanarImage a(3, 2, 6);
  PlanarImage b = random_image(3, 2, 3, 30);
  for (int ch : {0, 3, 5}) std::ranges::fill(a.plane(ch), 1.0);
  CHECK(max_abs_diff(solve_image_ldl3(a, b), b) == 0.0);

  std::ranges::fill(a.plane(0), 2.0);
  std::ranges::fill(a.plane(3), 4.0);
  std::ranges::fill(a.plane(5), 8.0);
  std::ranges::fill(b.plane(0), 2.0);
  std::ranges::fill(b.plane(1), 4.0);
  std::ranges::fill(b.plane(2), 8.0);
  const PlanarImage ones = solve_image_ldl3(a, b);
  for (double v : ones.data()) CHECK(v == 1.0);

  std::ranges::fill(a.plane(3), 0.0);
  a.at(2, 1, 3) = 0.0;
  try {
    solve_image_ldl3(a, b);
    FAIL("expected SingularSystem");
  } catch (const SingularSystem& e) {
    CHECK(e.x() == 0);
    CHECK(e.y() == 0);
    CHECK(e.pivot() == 2);
  }
  CHECK_THROWS_AS(solve_image_ldl3(PlanarImage(2, 2, 5), PlanarImage(2, 2, 3)),
                  InvalidInput);
  CHECK_THROWS_AS(solve_image_ldl3(PlanarImage(2, 2, 6), PlanarImage(3, 2, 3)),
                  InvalidInput);
}

TEST_CASE("solve_image_ldl3 matches Gaussian elimination on random SPD") {
  std::mt19937_64 rng(31);
  PlanarImage a(4, 4, 6), b(4, 4, 3);
  std::array<double, 3> expect[4][4];
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) {
      double m[3][3];
      for (auto& row : m) for (double& v : row) v = 2 * skymatte::testing::unit(rng) - 1;
      std::array<std::array<double, 3>, 3> full{};
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
          for (int k = 0; k < 3; ++k) full[r][c] += m[r][k] * m[c][k];
        }
        full[r][r] += 0.1;
      }
      const int idx[6][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};
      for (int ch = 0; ch < 6; ++ch) a.at(x, y, ch) = full[idx[ch][0]][idx[ch][1]];
      std::array<double, 3> rhs{};
      for (int ch = 0; ch < 3; ++ch) b.at(x, y, ch) = rhs[ch] = 2 * skymatte::testing::unit(rng) - 1;
      expect[y][x] = skymatte::testing::gauss_solve<3>(full, rhs);
    }
  }
  const PlanarImage sol = solve_image_ldl3(a, b);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) {
      for (int ch = 0; ch < 3; ++ch) {
        CHECK(std::abs(sol.at(x, y, ch) - expect[y][x][ch]) < 1e-12);
      }
    }
  }
}

TEST_CASE("modified_guided_filter reproduces a constant mask") {
  const PlanarImage ref = textured_reference(40, 30, 40);
  const PlanarImage p(40, 30, 1, ColorSpace::kMask, 0.42);
  const PlanarImage y = modified_guided_filter(
      ref, p, ConfidenceMap::uniform(40, 30, 1.0), {8, 0.01, 0.01});
  CHECK(y.colorspace() == ColorSpace::kMask);
  for (double v : y.data()) CHECK(v == doctest::Approx(0.42).epsilon(1e-9));
}

TEST_CASE("modified_guided_filter recovers an affine mask") {
  const int w = 128, h = 96;
  const PlanarImage ref = textured_reference(w, h, 41);
  PlanarImage p(w, h, 1, ColorSpace::kMask);
  const double a[3] = {0.4, -0.3, 0.25}, beta = 0.3;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      p.at(x, y) = a[0] * ref.at(x, y, 0) + a[1] * ref.at(x, y, 1) +
                   a[2] * ref.at(x, y, 2) + beta;
    }
  }
  require_mask(p, "fixture");
  for (int s : {4, 16}) {
    const PlanarImage y = modified_guided_filter(
        ref, p, ConfidenceMap::uniform(w, h, 1.0), {s, 1e-6, 1e-6});
    double mae = 0.0;
    for (std::size_t i = 0; i < y.data().size(); ++i) {
      mae += std::abs(y.data()[i] - p.data()[i]);
    }
    CHECK(mae / y.data().size() < 1e-3);
  }
}

TEST_CASE("modified_guided_filter output range and errors") {
  const PlanarImage ref = textured_reference(33, 21, 42);
  PlanarImage p = random_image(33, 21, 1, 43, 0, 1, ColorSpace::kMask);
  const auto c = ConfidenceMap(random_image(33, 21, 1, 44, 0.01, 1, ColorSpace::kMask));
  const PlanarImage y = modified_guided_filter(ref, p, c, {4, 1e-4, 1e-4});
  for (double v : y.data()) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  CHECK(modified_guided_filter(ref, p, c, {4, 1e-4, 1e-4}) == y);

  CHECK_THROWS_AS(modified_guided_filter(random_image(33, 21, 1, 1), p, c, {}),
                  InvalidInput);
  CHECK_THROWS_AS(
      modified_guided_filter(ref, p, ConfidenceMap::uniform(32, 21, 1.0), {}),
      InvalidInput);
  const PlanarImage big(40, 21, 1, ColorSpace::kMask, 0.5);
  // A mask on a different grid is resampled to the reference.
  const PlanarImage resampled =
      modified_guided_filter(ref, big, ConfidenceMap::uniform(40, 21, 1.0), {});
  CHECK(resampled.width() == ref.width());
  CHECK(resampled.height() == ref.height());
  PlanarImage bad = p;
  bad.at(0, 0) = 1.5;
  CHECK_THROWS_AS(guided_filter_coefficients(ref, bad, c, {}), InvalidInput);
}

TEST_CASE("low-resolution masks are resized to the reference") {
  const PlanarImage ref = textured_reference(64, 48, 45);
  const PlanarImage small(16, 12, 1, ColorSpace::kMask, 0.8);
  FilterProfile prof;
  const PlanarImage y = modified_guided_filter(
      ref, small, ConfidenceMap::uniform(16, 12, 1.0), {16, 0.01, 0.01}, &prof);
  CHECK(y.width() == 64);
  CHECK(y.height() == 48);
  for (double v : y.data()) CHECK(v == doctest::Approx(0.8).epsilon(1e-9));
  CHECK(prof.solves == 4u * 3u);
  CHECK(prof.low_width == 4);
  CHECK(prof.low_height == 3);
}

TEST_CASE("classic guided filter coefficients at small s") {
  const PlanarImage ref = textured_reference(16, 16, 46);
  const PlanarImage p = random_image(16, 16, 1, 47, 0, 1, ColorSpace::kMask);
  const PlanarImage cimg = random_image(16, 16, 1, 48, 0.01, 1, ColorSpace::kMask);
  for (int s : {1, 2, 4}) {
    const GuidedFilterParams gf{s, 0.05, 0.05};
    const auto coeffs = guided_filter_coefficients(ref, p, ConfidenceMap(cimg), gf);
    for (int j = 0; j < coeffs.b.height(); ++j) {
      for (int i = 0; i < coeffs.b.width(); ++i) {
        const auto o = skymatte::testing::brute_wls(ref, p, cimg, s, i, j, 0.05, 0.05);
        for (int ch = 0; ch < 3; ++ch) {
          CHECK(std::abs(coeffs.a.at(i, j, ch) - o[ch]) < 1e-9);
        }
        CHECK(std::abs(coeffs.b.at(i, j) - o[3]) < 1e-9);
      }
    }
  }
}

TEST_CASE("filter output is independent of ISA and thread count") {
  const PlanarImage ref = textured_reference(97, 61, 49);
  const PlanarImage p = random_image(97, 61, 1, 50, 0, 1, ColorSpace::kMask);
  const auto c = ConfidenceMap(random_image(97, 61, 1, 51, 0.01, 1, ColorSpace::kMask));
  const GuidedFilterParams gf{8, 0.01, 0.01};
  PlanarImage base;
  {
    kernels::ScopedIsa isa(kernels::Isa::kScalar);
    base = modified_guided_filter(ref, p, c, gf);
  }
  if (kernels::isa_supported(kernels::Isa::kAvx2)) {
    kernels::ScopedIsa isa(kernels::Isa::kAvx2);
    CHECK(modified_guided_filter(ref, p, c, gf) == base);
  }
  const int previous = thread_count();
  for (int t : {2, 5}) {
    set_thread_count(t);
    CHECK(modified_guided_filter(ref, p, c, gf) == base);
  }
  set_thread_count(previous);
}
