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

#include "skymatte/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "skymatte/errors.hpp"
#include "skymatte/refine.hpp"

namespace skymatte {
namespace {

// Portable uniform draw in [0,1); std::uniform_real_distribution is not
// specified bit-exactly across standard libraries.
double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * unit(rng);
}

struct Wave {
  double amplitude;
  double period;
  double phase;
};

struct Cable {
  double x0, y0, x1, y1;  // endpoints across the full width
};

using Rgb = std::array<double, 3>;

constexpr Rgb kSkyTop{0.20, 0.40, 0.85};
constexpr Rgb kSkyHorizon{0.62, 0.76, 0.96};
constexpr Rgb kCheckerA{0.16, 0.28, 0.12};
constexpr Rgb kCheckerB{0.48, 0.36, 0.24};
constexpr Rgb kCableColor{0.08, 0.08, 0.09};

double segment_distance(const Cable& c, double px, double py) {
  const double dx = c.x1 - c.x0;
  const double dy = c.y1 - c.y0;
  const double t = std::clamp(((px - c.x0) * dx + (py - c.y0) * dy) /
                                  (dx * dx + dy * dy),
                              0.0, 1.0);
  return std::hypot(px - (c.x0 + t * dx), py - (c.y0 + t * dy));
}

std::vector<std::pair<std::size_t, double>> area_weights(int src, int dst,
                                                         int i) {
  const double scale = static_cast<double>(src) / dst;
  const double lo = i * scale;
  const double hi = (i + 1) * scale;
  std::vector<std::pair<std::size_t, double>> w;
  for (int k = static_cast<int>(std::floor(lo));
       k < std::min(src, static_cast<int>(std::ceil(hi))); ++k) {
    const double cover = std::min(hi, k + 1.0) - std::max(lo, double(k));
    if (cover > 0.0) w.emplace_back(static_cast<std::size_t>(k), cover / scale);
  }
  return w;
}

}  // namespace

void SyntheticParams::validate() const {
  if (width < 8 || height < 8) {
    throw InvalidParameter("synthetic scene must be at least 8x8");
  }
  if (!(aa_radius > 0.0)) throw InvalidParameter("aa_radius must be positive");
  if (cables < 0) throw InvalidParameter("cables must be >= 0");
  if (!(cable_half_width > 0.0)) {
    throw InvalidParameter("cable_half_width must be positive");
  }
  if (checker_size < 1 || annotation_step < 1 || trimap_band < 0) {
    throw InvalidParameter("checker_size and annotation_step must be >= 1");
  }
  if (!(annotation_jitter >= 0.0)) {
    throw InvalidParameter("annotation_jitter must be >= 0");
  }
  if (probability_width < 1 || probability_height < 1) {
    throw InvalidParameter("probability size must be positive");
  }
}

PlanarImage area_downsample(const PlanarImage& img, int w, int h) {
  if (w < 1 || h < 1) throw InvalidParameter("area_downsample: empty target");
  PlanarImage out(w, h, img.channels(), img.colorspace());
  std::vector<std::vector<std::pair<std::size_t, double>>> wx(w), wy(h);
  for (int x = 0; x < w; ++x) wx[x] = area_weights(img.width(), w, x);
  for (int y = 0; y < h; ++y) wy[y] = area_weights(img.height(), h, y);
  std::vector<double> row(img.width());
  for (int c = 0; c < img.channels(); ++c) {
    for (int y = 0; y < h; ++y) {
      std::ranges::fill(row, 0.0);
      for (const auto& [sy, wgt] : wy[y]) {
        const auto src = img.row(c, static_cast<int>(sy));
        for (std::size_t x = 0; x < row.size(); ++x) row[x] += wgt * src[x];
      }
      auto dst = out.row(c, y);
      for (int x = 0; x < w; ++x) {
        double s = 0.0;
        for (const auto& [sx, wgt] : wx[x]) s += wgt * row[sx];
        dst[x] = s;
      }
    }
  }
  if (out.colorspace() == ColorSpace::kMask) {
    for (double& v : out.plane(0)) v = std::clamp(v, 0.0, 1.0);
  }
  return out;
}

SyntheticScene make_synthetic_scene(const SyntheticParams& p) {
  p.validate();
  std::mt19937_64 rng(p.seed);
  const int w = p.width;
  const int h = p.height;

  const double base = 0.55 * h;
  std::array<Wave, 3> waves{};
  for (int i = 0; i < 3; ++i) {
    waves[i] = {uniform(rng, 0.02, 0.06) * h / (i + 1),
                uniform(rng, 0.25, 0.6) * w / (i + 1),
                uniform(rng, 0.0, 2.0 * std::numbers::pi)};
  }
  auto horizon = [&](double x) {
    double y = base;
    for (const auto& wv : waves) {
      y += wv.amplitude *
           std::sin(2.0 * std::numbers::pi * x / wv.period + wv.phase);
    }
    return y;
  };

  std::vector<Cable> cables(static_cast<std::size_t>(p.cables));
  for (auto& c : cables) {
    c.x0 = -1.0;
    c.x1 = w + 1.0;
    c.y0 = uniform(rng, 0.1, 0.45) * h;
    c.y1 = uniform(rng, 0.1, 0.45) * h;
  }

  SyntheticScene s;
  s.sky = PlanarImage(w, h, 3, ColorSpace::kRgb);
  s.fg = PlanarImage(w, h, 3, ColorSpace::kRgb);
  s.rgb = PlanarImage(w, h, 3, ColorSpace::kRgb);
  s.alpha = PlanarImage(w, h, 1, ColorSpace::kMask);

  for (int y = 0; y < h; ++y) {
    const double py = y + 0.5;
    const double t = std::min(1.0, py / base);
    for (int x = 0; x < w; ++x) {
      const double px = x + 0.5;
      // Horizon ramp: alpha falls from 1 to 0 over [-r, r] around the curve.
      const double d = py - horizon(px);
      double a = std::clamp(0.5 - d / (2.0 * p.aa_radius), 0.0, 1.0);
      double cable_cover = 0.0;
      for (const auto& c : cables) {
        const double dist = segment_distance(c, px, py);
        cable_cover = std::max(
            cable_cover, std::clamp(p.cable_half_width + 0.5 - dist, 0.0, 1.0));
      }
      a *= 1.0 - cable_cover;
      s.alpha.at(x, y, 0) = a;

      const bool on_cable = cable_cover > 0.0;
      const bool dark = ((x / p.checker_size) + (y / p.checker_size)) % 2 == 0;
      const Rgb& fg = on_cable ? kCableColor : (dark ? kCheckerA : kCheckerB);
      for (int c = 0; c < 3; ++c) {
        const double sky = kSkyTop[c] + t * (kSkyHorizon[c] - kSkyTop[c]);
        s.sky.at(x, y, c) = sky;
        s.fg.at(x, y, c) = fg[c];
        s.rgb.at(x, y, c) = a * sky + (1.0 - a) * fg[c];
      }
    }
  }

  // Coarse polygon: jittered vertices on the horizon, straight edges between.
  const int n_vertices = (w + p.annotation_step - 1) / p.annotation_step + 1;
  std::vector<double> vx(n_vertices), vy(n_vertices);
  for (int i = 0; i < n_vertices; ++i) {
    vx[i] = std::min<double>(i * p.annotation_step, w);
    vy[i] = horizon(vx[i]) +
            uniform(rng, -p.annotation_jitter, p.annotation_jitter);
  }
  s.annotation = BinaryMask(w, h);
  for (int x = 0; x < w; ++x) {
    const double px = x + 0.5;
    const int i = std::min(n_vertices - 2, static_cast<int>(px / p.annotation_step));
    const double f = (px - vx[i]) / (vx[i + 1] - vx[i]);
    const double edge = vy[i] + f * (vy[i + 1] - vy[i]);
    for (int y = 0; y < h; ++y) s.annotation.set(x, y, y + 0.5 < edge);
  }
  s.trimap = build_trimap(s.annotation, boundary_band(s.annotation, p.trimap_band));
  s.probability = area_downsample(s.alpha, p.probability_width,
                                  p.probability_height);
  return s;
}

}  // namespace skymatte
