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
#include <span>
#include <string_view>
#include <vector>

namespace skymatte {

enum class ColorSpace : std::uint8_t { kRgb, kYuv, kHsv, kMask, kGeneric };

std::string_view to_string(ColorSpace cs);

// H x W x C raster of doubles in channel-planar layout: channel c occupies
// the contiguous range [c*W*H, (c+1)*W*H), rows are contiguous within it.
class PlanarImage {
 public:
  PlanarImage() = default;
  PlanarImage(int width, int height, int channels,
              ColorSpace cs = ColorSpace::kGeneric, double fill = 0.0);

  static PlanarImage constant(int width, int height,
                              std::span<const double> value,
                              ColorSpace cs = ColorSpace::kGeneric);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  ColorSpace colorspace() const { return cs_; }
  void set_colorspace(ColorSpace cs) { cs_ = cs; }

  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  bool empty() const { return data_.empty(); }
  bool same_size(const PlanarImage& o) const {
    return width_ == o.width_ && height_ == o.height_;
  }

  std::span<double> plane(int c) {
    return {data_.data() + static_cast<std::size_t>(c) * pixel_count(),
            pixel_count()};
  }
  std::span<const double> plane(int c) const {
    return {data_.data() + static_cast<std::size_t>(c) * pixel_count(),
            pixel_count()};
  }
  std::span<double> row(int c, int y) {
    return plane(c).subspan(static_cast<std::size_t>(y) * width_, width_);
  }
  std::span<const double> row(int c, int y) const {
    return plane(c).subspan(static_cast<std::size_t>(y) * width_, width_);
  }

  double& at(int x, int y, int c = 0) {
    return data_[index(x, y, c)];
  }
  double at(int x, int y, int c = 0) const { return data_[index(x, y, c)]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  // Single-channel copy of channel c.
  PlanarImage channel(int c, ColorSpace cs = ColorSpace::kGeneric) const;

  bool operator==(const PlanarImage& o) const = default;

 private:
  std::size_t index(int x, int y, int c) const {
    return static_cast<std::size_t>(c) * pixel_count() +
           static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  ColorSpace cs_ = ColorSpace::kGeneric;
  std::vector<double> data_;
};

// Throws InvalidInput unless img has exactly `channels` channels.
void require_channels(const PlanarImage& img, int channels,
                      std::string_view what);
// Throws InvalidInput unless a and b share width and height.
void require_same_size(const PlanarImage& a, const PlanarImage& b,
                       std::string_view what);
// Throws InvalidInput unless img is 1-channel with every value in [0,1].
void require_mask(const PlanarImage& img, std::string_view what);

// Clamp every value to [0,1] and tag as a mask.
PlanarImage to_mask(PlanarImage img);

// Elementwise product. A 1-channel operand is broadcast across the channels
// of the other.
PlanarImage hadamard(const PlanarImage& x, const PlanarImage& y);

// Per-pixel sum over channels of the Hadamard product of two 3-channel images.
PlanarImage dot3(const PlanarImage& x, const PlanarImage& y);

// Upper triangle of the per-pixel outer product of two 3-channel images,
// channels ordered (1,1),(1,2),(1,3),(2,2),(2,3),(3,3).
PlanarImage outer3(const PlanarImage& x, const PlanarImage& y);

// Bilinear resize with half-pixel centers and clamp-to-edge sampling.
PlanarImage resize_bilinear(const PlanarImage& img, int width, int height);

// Horizontal mirror, used by property tests and tooling.
PlanarImage mirror_horizontal(const PlanarImage& img);

// Per-pixel 0/1 flags.
struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  BinaryMask() = default;
  BinaryMask(int w, int h, bool fill = false)
      : width(w), height(h),
        bits(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {}

  bool at(int x, int y) const {
    return bits[static_cast<std::size_t>(y) * width + x] != 0;
  }
  void set(int x, int y, bool v) {
    bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
  }
  std::size_t count() const;

  // Values >= threshold become 1.
  static BinaryMask from_image(const PlanarImage& img, double threshold = 0.5);
  PlanarImage to_image() const;

  bool operator==(const BinaryMask&) const = default;
};

}  // namespace skymatte
