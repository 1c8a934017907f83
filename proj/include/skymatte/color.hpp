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

namespace skymatte {

struct ColorOptions {
  // Reject out-of-range inputs with InvalidInput instead of clamping them to
  // [0,1] and logging a warning.
  bool strict = false;
};

// BT.601 full-range luma weights.
inline constexpr double kLumaR = 0.299;
inline constexpr double kLumaB = 0.114;
inline constexpr double kLumaG = 1.0 - kLumaR - kLumaB;

// Luma in channel 0, chroma (B-Y)/(2(1-kb)) and (R-Y)/(2(1-kr)) in channels
// 1 and 2, both centered on 0 with range [-0.5, 0.5].
PlanarImage rgb_to_yuv(const PlanarImage& rgb, ColorOptions opts = {});
PlanarImage yuv_to_rgb(const PlanarImage& yuv);

// H in [0,1) (fraction of a turn), S and V in [0,1]; V = max(R,G,B).
PlanarImage rgb_to_hsv(const PlanarImage& rgb, ColorOptions opts = {});
PlanarImage hsv_to_rgb(const PlanarImage& hsv, ColorOptions opts = {});

struct Hsv {
  double h, s, v;
};
Hsv rgb_to_hsv(double r, double g, double b);
void hsv_to_rgb(const Hsv& hsv, double& r, double& g, double& b);

// IEC 61966-2-1 transfer function.
double srgb_to_linear(double v);
double linear_to_srgb(double v);

}  // namespace skymatte
