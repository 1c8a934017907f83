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

#include "skymatte/confidence.hpp"
#include "skymatte/density.hpp"
#include "skymatte/image.hpp"
#include "skymatte/trimap.hpp"
#include "skymatte/wgf.hpp"

namespace skymatte {

struct RefinePipelineParams {
  int dilation_radius = 4;  // disk radius around mask edges, pixels
  GuidedFilterParams gf{16, 0.01, 0.01};
  DensityParams density{0.01, 1024, 0.97, 0, true};
  TrimapConfidenceParams conf;
  double t_s = 15.0;  // sigmoid sharpness
  // Inpaint the undetermined band by density estimation. When off, binary
  // masks are filtered with unit confidence and trimap UNDETERMINED pixels
  // become NOT_SKY at c_undet.
  bool use_density = true;
  bool sharpen = true;

  void validate() const;
};

// Pixels within `radius` (Euclidean disk) of a nonzero response of the
// 4-neighbor Laplacian (-4 center, +1 cross, clamp-to-edge) of the mask.
BinaryMask boundary_band(const BinaryMask& mask, int radius);

// band and extra_undetermined (optional) become UNDETERMINED, the rest keeps
// the SKY / NOT_SKY label of mask.
Trimap build_trimap(const BinaryMask& mask, const BinaryMask& band,
                    const BinaryMask* extra_undetermined = nullptr);

// Normalized logistic contrast curve; S(0) = 0, S(1/2) = 1/2, S(1) = 1.
double sharpen(double x, double t_s);
PlanarImage sharpen_mask(const PlanarImage& alpha, double t_s);

// Coarse binary annotation -> continuous alpha matte.
PlanarImage refine_annotation(const PlanarImage& rgb, const BinaryMask& raw,
                              const RefinePipelineParams& params,
                              const BinaryMask* extra_undetermined = nullptr);
// Trimap annotation -> continuous alpha matte (no edge band is added).
PlanarImage refine_annotation(const PlanarImage& rgb, const Trimap& raw,
                              const RefinePipelineParams& params);

// Low-resolution sky probability -> full-resolution matte: confidence from
// the probability, rgb_to_yuv on the reference, modified_guided_filter.
PlanarImage upsample_probability(const PlanarImage& probability,
                                 const PlanarImage& rgb,
                                 const GuidedFilterParams& gf,
                                 const InferenceConfidenceParams& conf,
                                 FilterProfile* profile = nullptr);

}  // namespace skymatte
