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

#include "skymatte/refine.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "skymatte/color.hpp"
#include "skymatte/errors.hpp"

namespace skymatte {
namespace {

void require_same_shape(const BinaryMask& a, const BinaryMask& b,
                        std::string_view what) {
  if (a.width != b.width || a.height != b.height) {
    throw InvalidInput(std::string(what) + ": mask sizes differ");
  }
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

PlanarImage filter_trimap(const PlanarImage& rgb, const Trimap& trimap,
                          const RefinePipelineParams& params) {
  PlanarImage mask;
  ConfidenceMap conf = ConfidenceMap::uniform(rgb.width(), rgb.height(), 1.0);
  if (params.use_density) {
    const PlanarImage prob = sky_probability(rgb, trimap, params.density);
    const InpaintResult inpainted = inpaint(trimap, prob, params.density.p_c);
    conf = trimap_confidence(trimap, inpainted.inpainted_sky, params.conf);
    mask = inpainted.trimap.sky().to_image();
  } else {
    conf = trimap_confidence(trimap, BinaryMask(rgb.width(), rgb.height()),
                             params.conf);
    mask = trimap.sky().to_image();
  }
  const PlanarImage yuv = rgb_to_yuv(rgb);
  PlanarImage alpha = modified_guided_filter(yuv, mask, conf, params.gf);
  if (params.sharpen) alpha = sharpen_mask(alpha, params.t_s);
  return alpha;
}

}  // namespace

void RefinePipelineParams::validate() const {
  if (dilation_radius < 0) {
    throw InvalidParameter("dilation radius must be >= 0");
  }
  if (!(t_s > 0.0)) throw InvalidParameter("sharpness factor must be positive");
  gf.validate();
  conf.validate();
  if (use_density) density.validate();
}

BinaryMask boundary_band(const BinaryMask& mask, int radius) {
  if (radius < 0) throw InvalidParameter("band radius must be >= 0");
  const int w = mask.width;
  const int h = mask.height;
  auto at = [&](int x, int y) {
    return static_cast<int>(
        mask.at(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1)));
  };
  BinaryMask edges(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int lap = at(x - 1, y) + at(x + 1, y) + at(x, y - 1) +
                      at(x, y + 1) - 4 * at(x, y);
      edges.set(x, y, lap != 0);
    }
  }
  if (radius == 0) return edges;

  // Per-row prefix counts; a disk is a stack of horizontal runs.
  std::vector<int> prefix(static_cast<std::size_t>(h) * (w + 1), 0);
  for (int y = 0; y < h; ++y) {
    int* p = prefix.data() + static_cast<std::size_t>(y) * (w + 1);
    for (int x = 0; x < w; ++x) p[x + 1] = p[x] + edges.at(x, y);
  }
  BinaryMask band(w, h);
  for (int dy = -radius; dy <= radius; ++dy) {
    int half = 0;
    while ((half + 1) * (half + 1) + dy * dy <= radius * radius) ++half;
    for (int y = 0; y < h; ++y) {
      const int sy = y + dy;
      if (sy < 0 || sy >= h) continue;
      const int* p = prefix.data() + static_cast<std::size_t>(sy) * (w + 1);
      for (int x = 0; x < w; ++x) {
        const int lo = std::max(0, x - half);
        const int hi = std::min(w, x + half + 1);
        if (p[hi] - p[lo] > 0) band.set(x, y, true);
      }
    }
  }
  return band;
}

Trimap build_trimap(const BinaryMask& mask, const BinaryMask& band,
                    const BinaryMask* extra_undetermined) {
  require_same_shape(mask, band, "build_trimap");
  if (extra_undetermined) {
    require_same_shape(mask, *extra_undetermined, "build_trimap");
  }
  Trimap t = Trimap::from_mask(mask);
  for (std::size_t i = 0; i < t.pixel_count(); ++i) {
    if (band.bits[i] || (extra_undetermined && extra_undetermined->bits[i])) {
      t[i] = Label::kUndetermined;
    }
  }
  return t;
}

double sharpen(double x, double t_s) {
  if (!(t_s > 0.0)) {
    throw InvalidParameter("sharpness factor must be positive, got " +
                           std::to_string(t_s));
  }
  const double lo = logistic(-t_s / 2.0);
  const double hi = logistic(t_s / 2.0);
  return (logistic(t_s * (x - 0.5)) - lo) / (hi - lo);
}

PlanarImage sharpen_mask(const PlanarImage& alpha, double t_s) {
  require_mask(alpha, "sharpen_mask");
  sharpen(0.5, t_s);  // parameter check
  PlanarImage out(alpha.width(), alpha.height(), 1, ColorSpace::kMask);
  std::ranges::transform(alpha.plane(0), out.plane(0).begin(), [&](double x) {
    return std::clamp(sharpen(x, t_s), 0.0, 1.0);
  });
  return out;
}

PlanarImage refine_annotation(const PlanarImage& rgb, const BinaryMask& raw,
                              const RefinePipelineParams& params,
                              const BinaryMask* extra_undetermined) {
  params.validate();
  require_channels(rgb, 3, "refine_annotation");
  if (raw.width != rgb.width() || raw.height != rgb.height()) {
    throw InvalidInput("refine_annotation: image and annotation sizes differ");
  }
  if (!params.use_density) {
    // Filter the raw labels directly with unit confidence.
    const PlanarImage yuv = rgb_to_yuv(rgb);
    PlanarImage alpha = modified_guided_filter(
        yuv, raw.to_image(),
        ConfidenceMap::uniform(rgb.width(), rgb.height(), 1.0), params.gf);
    if (params.sharpen) alpha = sharpen_mask(alpha, params.t_s);
    return alpha;
  }
  const BinaryMask band = boundary_band(raw, params.dilation_radius);
  return filter_trimap(rgb, build_trimap(raw, band, extra_undetermined),
                       params);
}

PlanarImage refine_annotation(const PlanarImage& rgb, const Trimap& raw,
                              const RefinePipelineParams& params) {
  params.validate();
  require_channels(rgb, 3, "refine_annotation");
  if (raw.width() != rgb.width() || raw.height() != rgb.height()) {
    throw InvalidInput("refine_annotation: image and annotation sizes differ");
  }
  return filter_trimap(rgb, raw, params);
}

PlanarImage upsample_probability(const PlanarImage& probability,
                                 const PlanarImage& rgb,
                                 const GuidedFilterParams& gf,
                                 const InferenceConfidenceParams& conf,
                                 FilterProfile* profile) {
  require_mask(probability, "upsample_probability");
  const ConfidenceMap c = inference_confidence(probability, conf);
  return modified_guided_filter(rgb_to_yuv(rgb), probability, c, gf, profile);
}

}  // namespace skymatte
