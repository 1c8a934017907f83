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
#include <cstdint>
#include <vector>

#include "skymatte/image.hpp"
#include "skymatte/trimap.hpp"

namespace skymatte {

struct DensityParams {
  double sigma = 0.01;          // Gaussian kernel std-dev, RGB in [0,1]
  std::size_t n_samples = 1024;  // sky pixels sampled for the estimate
  double p_c = 0.6;             // sky threshold used by inpainting
  std::uint64_t seed = 0;
  // Scale the kernel so K(x, x) = 1 instead of carrying the
  // (2 pi sigma^2)^(-3/2) density constant.
  bool normalize_kernel = true;

  void validate() const;
};

// Row-major indices of the SKY pixels used as kernel centers. When the trimap
// has at most n_samples sky pixels all of them are used, in index order;
// otherwise n_samples are drawn without replacement (seeded) and returned
// sorted. Throws EmptyReference when there is no SKY pixel.
std::vector<std::size_t> select_sky_samples(const Trimap& t,
                                            std::size_t n_samples,
                                            std::uint64_t seed);

// Kernel density of each UNDETERMINED pixel's RGB under the sampled sky
// colors: p_i = (1/N) sum_j K(I_i, I_j). Other pixels are 0. The result is
// not clamped; with normalize_kernel off it is a density and may exceed 1.
PlanarImage sky_probability(const PlanarImage& rgb, const Trimap& t,
                            const DensityParams& params);

struct InpaintResult {
  Trimap trimap;              // no UNDETERMINED pixels left
  BinaryMask inpainted_sky;   // undetermined pixels relabeled SKY
};

// UNDETERMINED pixels with p > p_c become SKY (and are flagged), the rest
// become NOT_SKY. Annotated pixels are untouched.
InpaintResult inpaint(const Trimap& t, const PlanarImage& p, double p_c);

}  // namespace skymatte
