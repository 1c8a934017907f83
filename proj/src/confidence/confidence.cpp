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

#include "skymatte/confidence.hpp"

#include <algorithm>
#include <string>

#include "skymatte/errors.hpp"

namespace skymatte {

double bias(double x, double b) {
  if (!(b > 0.0 && b < 1.0)) {
    throw InvalidParameter("bias shape must lie in (0,1), got " +
                           std::to_string(b));
  }
  return x / ((1.0 / b - 2.0) * (1.0 - x) + 1.0);
}

ConfidenceMap::ConfidenceMap(PlanarImage img) : img_(std::move(img)) {
  require_channels(img_, 1, "ConfidenceMap");
  for (double v : img_.plane(0)) {
    if (!(v > 0.0 && v <= 1.0)) {
      throw InvalidInput("confidence value " + std::to_string(v) +
                         " outside (0,1]");
    }
  }
  img_.set_colorspace(ColorSpace::kMask);
}

ConfidenceMap ConfidenceMap::uniform(int width, int height, double value) {
  return ConfidenceMap(PlanarImage(width, height, 1, ColorSpace::kMask, value));
}

void InferenceConfidenceParams::validate() const {
  if (!(0.0 < l && l <= h && h < 1.0)) {
    throw InvalidParameter("confidence thresholds need 0 < l <= h < 1");
  }
  if (!(b > 0.0 && b < 1.0)) {
    throw InvalidParameter("confidence bias shape must lie in (0,1)");
  }
  if (!(eps > 0.0 && eps < 1.0)) {
    throw InvalidParameter("confidence floor must lie in (0,1)");
  }
}

double inference_confidence(double p, const InferenceConfidenceParams& params) {
  if (p < params.l) {
    return std::max(params.eps, bias((params.l - p) / params.l, params.b));
  }
  if (p > params.h) {
    return std::max(params.eps,
                    bias((p - params.h) / (1.0 - params.h), params.b));
  }
  return params.eps;
}

ConfidenceMap inference_confidence(const PlanarImage& p,
                                   const InferenceConfidenceParams& params) {
  params.validate();
  require_mask(p, "inference_confidence");
  PlanarImage out(p.width(), p.height(), 1, ColorSpace::kMask);
  std::ranges::transform(p.plane(0), out.plane(0).begin(), [&](double v) {
    return inference_confidence(v, params);
  });
  return ConfidenceMap(std::move(out));
}

void TrimapConfidenceParams::validate() const {
  auto unit = [](double v) { return v > 0.0 && v <= 1.0; };
  if (!unit(c_det) || !unit(c_inpaint) || !unit(c_undet)) {
    throw InvalidParameter("trimap confidences must lie in (0,1]");
  }
  if (!(c_det >= c_inpaint && c_inpaint >= c_undet)) {
    throw InvalidParameter("trimap confidences need c_det >= c_inpaint >= c_undet");
  }
}

ConfidenceMap trimap_confidence(const Trimap& t, const BinaryMask& inpainted_sky,
                                const TrimapConfidenceParams& params) {
  params.validate();
  if (inpainted_sky.width != t.width() || inpainted_sky.height != t.height()) {
    throw InvalidInput("trimap_confidence: flag image size mismatch");
  }
  PlanarImage out(t.width(), t.height(), 1, ColorSpace::kMask);
  auto c = out.plane(0);
  for (std::size_t i = 0; i < t.pixel_count(); ++i) {
    const bool annotated = t[i] != Label::kUndetermined;
    if (inpainted_sky.bits[i] && annotated) {
      throw InvalidInput("trimap_confidence: pixel " + std::to_string(i) +
                         " is annotated but flagged as inpainted");
    }
    c[i] = annotated               ? params.c_det
           : inpainted_sky.bits[i] ? params.c_inpaint
                                   : params.c_undet;
  }
  return ConfidenceMap(std::move(out));
}

}  // namespace skymatte
