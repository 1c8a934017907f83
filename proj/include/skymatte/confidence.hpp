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

#pragma once

#include "skymatte/image.hpp"
#include "skymatte/trimap.hpp"

namespace skymatte {

// Schlick's bias curve x / ((1/b - 2)(1 - x) + 1). Fixes 0 and 1, is the
// identity at b = 0.5 and strictly increasing on [0,1] for b in (0,1).
// Throws InvalidParameter unless 0 < b < 1.
double bias(double x, double b);

// Per-pixel weights in (0,1] for the weighted guided filter, stored as a
// one-channel MASK image.
class ConfidenceMap {
 public:
  // Throws InvalidInput unless img is one channel with values in (0,1].
  explicit ConfidenceMap(PlanarImage img);
  static ConfidenceMap uniform(int width, int height, double value);

  const PlanarImage& image() const { return img_; }
  int width() const { return img_.width(); }
  int height() const { return img_.height(); }

 private:
  PlanarImage img_;
};

// Confidence of a network probability map: certain away from the
// [l, h] band, eps inside it (inclusive at both ends).
struct InferenceConfidenceParams {
  double l = 0.3;
  double h = 0.5;
  double b = 0.8;
  double eps = 0.01;

  void validate() const;
};

double inference_confidence(double p, const InferenceConfidenceParams& params);
ConfidenceMap inference_confidence(const PlanarImage& p,
                                   const InferenceConfidenceParams& params);

struct TrimapConfidenceParams {
  double c_det = 0.8;      // annotated SKY / NOT_SKY
  double c_inpaint = 0.6;  // undetermined, inpainted as sky
  double c_undet = 0.4;    // everything else

  void validate() const;
};

// inpainted_sky may only flag pixels that are UNDETERMINED in t (the
// pre-inpainting trimap).
ConfidenceMap trimap_confidence(const Trimap& t, const BinaryMask& inpainted_sky,
                                const TrimapConfidenceParams& params);

}  // namespace skymatte
