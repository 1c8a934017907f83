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

#include <filesystem>

#include "skymatte/image.hpp"
#include "skymatte/trimap.hpp"

namespace skymatte {

struct ImageReadOptions {
  // Decode sRGB-encoded PNG samples to linear light. PFM data is never
  // converted.
  bool srgb_to_linear = false;
};

struct ImageWriteOptions {
  int png_bit_depth = 16;  // 8 or 16
  // Encode linear values with the sRGB transfer function before quantizing.
  bool linear_to_srgb = false;
};

// Dispatches on the extension: .png or .pfm. One-channel results are tagged
// MASK when every value lies in [0,1], three-channel results RGB. Alpha
// channels are dropped and palette images are expanded.
PlanarImage read_image(const std::filesystem::path& path,
                       ImageReadOptions opts = {});
// Accepts 1- or 3-channel images. PNG samples are clamped to [0,1].
void write_image(const std::filesystem::path& path, const PlanarImage& img,
                 ImageWriteOptions opts = {});

PlanarImage read_png(const std::filesystem::path& path,
                     ImageReadOptions opts = {});
void write_png(const std::filesystem::path& path, const PlanarImage& img,
               ImageWriteOptions opts = {});

// Portable float map: "Pf" (1 channel) or "PF" (3 channels), a negative
// scale marks little-endian samples, rows are stored bottom to top.
PlanarImage read_pfm(const std::filesystem::path& path);
void write_pfm(const std::filesystem::path& path, const PlanarImage& img);

// Trimaps are 8-bit palette PNGs whose index and gray level are both the
// label value (0, 128, 255). 8-bit gray PNGs with those values also load;
// any other content raises InvalidInput.
Trimap read_trimap(const std::filesystem::path& path);
void write_trimap(const std::filesystem::path& path, const Trimap& trimap);

}  // namespace skymatte
