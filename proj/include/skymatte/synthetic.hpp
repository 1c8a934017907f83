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

#include <cstdint>

#include "skymatte/image.hpp"
#include "skymatte/trimap.hpp"

namespace skymatte {

struct SyntheticParams {
  int width = 512;
  int height = 384;
  std::uint64_t seed = 1;
  double aa_radius = 1.5;  // half-width of the horizon ramp, pixels
  int cables = 3;
  double cable_half_width = 0.75;
  int checker_size = 16;
  int annotation_step = 32;     // polygon vertex spacing
  double annotation_jitter = 3.0;
  int trimap_band = 8;
  int probability_width = 256;
  int probability_height = 256;

  void validate() const;
};

// Sky gradient composited over a checkerboard through a known alpha:
// rgb = alpha * sky + (1 - alpha) * fg exactly, per pixel and channel.
struct SyntheticScene {
  PlanarImage rgb;
  PlanarImage alpha;  // ground truth, MASK
  PlanarImage sky;
  PlanarImage fg;
  BinaryMask annotation;  // coarse polygon, ignores cables
  Trimap trimap;          // annotation with an undetermined band
  PlanarImage probability;  // alpha area-averaged to the probability size
};

SyntheticScene make_synthetic_scene(const SyntheticParams& params);

// Exact box-filter resampling (fractional pixel coverage) to w x h.
PlanarImage area_downsample(const PlanarImage& img, int w, int h);

}  // namespace skymatte
