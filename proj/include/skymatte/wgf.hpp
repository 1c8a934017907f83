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

#include <cstddef>
#include <vector>

#include "skymatte/confidence.hpp"
#include "skymatte/image.hpp"

namespace skymatte {

struct GuidedFilterParams {
  int s = 64;           // downsampling factor
  double eps_l = 0.01;  // luma regularizer
  double eps_c = 0.01;  // chroma regularizer

  void validate() const;
};

// ceil(n / s): low-resolution extent for a full-resolution extent n.
int low_res_extent(int n, int s);

// Tent-filter downsample by s. Low-resolution sample j is centered at
// (j + 0.5) * s - 0.5 in full-resolution coordinates and weights its
// neighbors by max(0, 1 - |x - center| / s), normalized; samples outside
// the image clamp to the edge. Output is ceil(W/s) x ceil(H/s).
PlanarImage bilinear_downsample(const PlanarImage& x, int s);

// ds(x * c, s) / ds(c, s) with the one-channel weight c broadcast across the
// channels of x. Throws InvalidInput if any weight is <= 0.
PlanarImage weighted_downsample(const PlanarImage& x, const PlanarImage& c,
                                int s);
PlanarImage weighted_downsample(const PlanarImage& x, const ConfidenceMap& c,
                                int s);

// Integer stage factors for smooth_upsample: at most three factors whose
// product is s, minimizing the largest factor and then preferring more
// stages, largest first (64 -> 4,4,4; 16 -> 4,2,2; 48 -> 4,4,3).
std::vector<int> upsample_stages(int s);

// One triangle-kernel (bilinear, half-pixel centered) upsample by factor.
PlanarImage tent_upsample(const PlanarImage& x, int factor);

// Consecutive tent upsamples per upsample_stages(s); output is s times the
// input resolution in each dimension.
PlanarImage smooth_upsample(const PlanarImage& x, int s);

// Per-pixel solve of A x = b with A given by its upper triangle in 6
// channels (11,12,13,22,23,33). Throws SingularSystem on a pivot <= 0.
PlanarImage solve_image_ldl3(const PlanarImage& a, const PlanarImage& b);

// Low-resolution affine coefficients of the filter: a (3 channels, one per
// reference channel) and b (1 channel).
struct GuidedFilterCoefficients {
  PlanarImage a;
  PlanarImage b;
};

// Wall-clock breakdown and work counts of one filter invocation.
struct FilterProfile {
  double resize_ms = 0.0;
  double downsample_ms = 0.0;
  double solve_ms = 0.0;
  double upsample_ms = 0.0;
  double apply_ms = 0.0;
  std::size_t solves = 0;  // number of 3x3 systems solved
  int low_width = 0;
  int low_height = 0;
};

// Weighted moments, regularized covariance, LDL solve. ref, p and c must
// share dimensions.
GuidedFilterCoefficients guided_filter_coefficients(
    const PlanarImage& ref, const PlanarImage& p, const ConfidenceMap& c,
    const GuidedFilterParams& params, FilterProfile* profile = nullptr);

// Edge-aware refinement of the mask p guided by the 3-channel reference
// (normally YUV), weighted by c. When p and c are smaller than the
// reference they are first resized bilinearly to its resolution. The
// result is clamped to [0,1].
PlanarImage modified_guided_filter(const PlanarImage& ref, const PlanarImage& p,
                                   const ConfidenceMap& c,
                                   const GuidedFilterParams& params,
                                   FilterProfile* profile = nullptr);

}  // namespace skymatte
