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

#include "skymatte/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "skymatte/errors.hpp"
#include "skymatte/kernels.hpp"
#include "skymatte/parallel.hpp"

namespace skymatte {
namespace {

// Unbiased draw from [0, bound) by rejection; avoids the
// implementation-defined std::uniform_int_distribution so that sample sets
// are identical across standard libraries.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % bound;
}

}  // namespace

void DensityParams::validate() const {
  if (!(sigma > 0.0)) throw InvalidParameter("density sigma must be positive");
  if (n_samples < 1) throw InvalidParameter("density needs n_samples >= 1");
  if (!(p_c > 0.0)) throw InvalidParameter("inpainting threshold must be positive");
}

std::vector<std::size_t> select_sky_samples(const Trimap& t,
                                            std::size_t n_samples,
                                            std::uint64_t seed) {
  std::vector<std::size_t> sky;
  for (std::size_t i = 0; i < t.pixel_count(); ++i) {
    if (t[i] == Label::kSky) sky.push_back(i);
  }
  if (sky.empty()) {
    throw EmptyReference("density estimation needs at least one SKY pixel");
  }
  if (sky.size() <= n_samples) return sky;

  // Partial Fisher-Yates over the sky index list.
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const std::size_t j = i + bounded(rng, sky.size() - i);
    std::swap(sky[i], sky[j]);
  }
  sky.resize(n_samples);
  std::ranges::sort(sky);
  return sky;
}

PlanarImage sky_probability(const PlanarImage& rgb, const Trimap& t,
                            const DensityParams& params) {
  params.validate();
  require_channels(rgb, 3, "sky_probability");
  if (rgb.width() != t.width() || rgb.height() != t.height()) {
    throw InvalidInput("sky_probability: image and trimap sizes differ");
  }
  const auto samples = select_sky_samples(t, params.n_samples, params.seed);
  const std::size_t n = samples.size();
  // Structure-of-arrays sample colors for the kernel sum.
  std::vector<double> sr(n), sg(n), sb(n);
  for (std::size_t j = 0; j < n; ++j) {
    sr[j] = rgb.plane(0)[samples[j]];
    sg[j] = rgb.plane(1)[samples[j]];
    sb[j] = rgb.plane(2)[samples[j]];
  }
  const double var = params.sigma * params.sigma;
  const double neg_inv_two_var = -1.0 / (2.0 * var);
  const double scale =
      params.normalize_kernel
          ? 1.0
          : 1.0 / std::pow(2.0 * std::numbers::pi * var, 1.5);

  PlanarImage out(rgb.width(), rgb.height(), 1);
  const auto& k = kernels::active();
  const int width = rgb.width();
  parallel_for(0, rgb.height(), [&](int y) {
    const auto r = rgb.row(0, y), g = rgb.row(1, y), b = rgb.row(2, y);
    auto dst = out.row(0, y);
    for (int x = 0; x < width; ++x) {
      if (t.at(x, y) != Label::kUndetermined) {
        dst[x] = 0.0;
        continue;
      }
      const double sum = k.gaussian_sum(sr.data(), sg.data(), sb.data(), n,
                                        r[x], g[x], b[x], neg_inv_two_var);
      dst[x] = scale * sum / static_cast<double>(n);
    }
  });
  return out;
}

InpaintResult inpaint(const Trimap& t, const PlanarImage& p, double p_c) {
  require_channels(p, 1, "inpaint");
  if (p.width() != t.width() || p.height() != t.height()) {
    throw InvalidInput("inpaint: probability and trimap sizes differ");
  }
  InpaintResult result{t, BinaryMask(t.width(), t.height())};
  const auto prob = p.plane(0);
  for (std::size_t i = 0; i < t.pixel_count(); ++i) {
    if (t[i] != Label::kUndetermined) continue;
    if (prob[i] > p_c) {
      result.trimap[i] = Label::kSky;
      result.inpainted_sky.bits[i] = 1;
    } else {
      result.trimap[i] = Label::kNotSky;
    }
  }
  return result;
}

}  // namespace skymatte
