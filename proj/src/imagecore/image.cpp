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

#include "skymatte/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "skymatte/errors.hpp"
#include "skymatte/kernels.hpp"
#include "skymatte/parallel.hpp"

namespace skymatte {

std::string_view to_string(ColorSpace cs) {
  switch (cs) {
    case ColorSpace::kRgb: return "RGB";
    case ColorSpace::kYuv: return "YUV";
    case ColorSpace::kHsv: return "HSV";
    case ColorSpace::kMask: return "MASK";
    case ColorSpace::kGeneric: return "GENERIC";
  }
  return "?";
}

PlanarImage::PlanarImage(int width, int height, int channels, ColorSpace cs,
                         double fill)
    : width_(width), height_(height), channels_(channels), cs_(cs) {
  if (width < 1 || height < 1) {
    throw InvalidInput("image dimensions must be positive, got " +
                       std::to_string(width) + "x" + std::to_string(height));
  }
  if (channels < 1) throw InvalidInput("image needs at least one channel");
  if (cs == ColorSpace::kMask && channels != 1) {
    throw InvalidInput("MASK images have exactly one channel");
  }
  data_.assign(pixel_count() * static_cast<std::size_t>(channels), fill);
}

PlanarImage PlanarImage::constant(int width, int height,
                                  std::span<const double> value,
                                  ColorSpace cs) {
  PlanarImage img(width, height, static_cast<int>(value.size()), cs);
  for (int c = 0; c < img.channels(); ++c) {
    std::ranges::fill(img.plane(c), value[c]);
  }
  return img;
}

PlanarImage PlanarImage::channel(int c, ColorSpace cs) const {
  PlanarImage out(width_, height_, 1, cs);
  std::ranges::copy(plane(c), out.plane(0).begin());
  return out;
}

void require_channels(const PlanarImage& img, int channels,
                      std::string_view what) {
  if (img.channels() != channels) {
    throw InvalidInput(std::string(what) + ": expected " +
                       std::to_string(channels) + " channels, got " +
                       std::to_string(img.channels()));
  }
}

void require_same_size(const PlanarImage& a, const PlanarImage& b,
                       std::string_view what) {
  if (!a.same_size(b)) {
    throw InvalidInput(std::string(what) + ": size mismatch " +
                       std::to_string(a.width()) + "x" +
                       std::to_string(a.height()) + " vs " +
                       std::to_string(b.width()) + "x" +
                       std::to_string(b.height()));
  }
}

void require_mask(const PlanarImage& img, std::string_view what) {
  require_channels(img, 1, what);
  for (double v : img.plane(0)) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvalidInput(std::string(what) + ": mask value " +
                         std::to_string(v) + " outside [0,1]");
    }
  }
}

PlanarImage to_mask(PlanarImage img) {
  require_channels(img, 1, "to_mask");
  for (double& v : img.plane(0)) v = std::clamp(v, 0.0, 1.0);
  img.set_colorspace(ColorSpace::kMask);
  return img;
}

PlanarImage hadamard(const PlanarImage& x, const PlanarImage& y) {
  require_same_size(x, y, "hadamard");
  const bool x_broadcast = x.channels() == 1 && y.channels() > 1;
  const bool y_broadcast = y.channels() == 1 && x.channels() > 1;
  if (x.channels() != y.channels() && !x_broadcast && !y_broadcast) {
    throw InvalidInput("hadamard: channel counts " +
                       std::to_string(x.channels()) + " and " +
                       std::to_string(y.channels()) + " do not broadcast");
  }
  const int channels = std::max(x.channels(), y.channels());
  PlanarImage out(x.width(), x.height(), channels);
  const auto& k = kernels::active();
  for (int c = 0; c < channels; ++c) {
    const auto xp = x.plane(x_broadcast ? 0 : c);
    const auto yp = y.plane(y_broadcast ? 0 : c);
    k.mul(out.plane(c).data(), xp.data(), yp.data(), out.pixel_count());
  }
  return out;
}

PlanarImage dot3(const PlanarImage& x, const PlanarImage& y) {
  require_channels(x, 3, "dot3");
  require_channels(y, 3, "dot3");
  require_same_size(x, y, "dot3");
  PlanarImage out(x.width(), x.height(), 1);
  auto o = out.plane(0);
  for (std::size_t i = 0; i < out.pixel_count(); ++i) {
    o[i] = x.plane(0)[i] * y.plane(0)[i] + x.plane(1)[i] * y.plane(1)[i] +
           x.plane(2)[i] * y.plane(2)[i];
  }
  return out;
}

PlanarImage outer3(const PlanarImage& x, const PlanarImage& y) {
  require_channels(x, 3, "outer3");
  require_channels(y, 3, "outer3");
  require_same_size(x, y, "outer3");
  static constexpr int kRow[6] = {0, 0, 0, 1, 1, 2};
  static constexpr int kCol[6] = {0, 1, 2, 1, 2, 2};
  PlanarImage out(x.width(), x.height(), 6);
  const auto& k = kernels::active();
  for (int c = 0; c < 6; ++c) {
    k.mul(out.plane(c).data(), x.plane(kRow[c]).data(),
          y.plane(kCol[c]).data(), out.pixel_count());
  }
  return out;
}

PlanarImage resize_bilinear(const PlanarImage& img, int width, int height) {
  if (img.width() == width && img.height() == height) return img;
  PlanarImage out(width, height, img.channels(), img.colorspace());

  struct Tap {
    int i0, i1;
    double w1;
  };
  auto taps = [](int in, int out_n) {
    std::vector<Tap> t(out_n);
    const double scale = static_cast<double>(in) / out_n;
    for (int o = 0; o < out_n; ++o) {
      const double u = (o + 0.5) * scale - 0.5;
      const double fl = std::floor(u);
      const int i = static_cast<int>(fl);
      t[o] = {std::clamp(i, 0, in - 1), std::clamp(i + 1, 0, in - 1), u - fl};
    }
    return t;
  };
  const auto tx = taps(img.width(), width);
  const auto ty = taps(img.height(), height);
  const auto& k = kernels::active();

  for (int c = 0; c < img.channels(); ++c) {
    // Horizontal pass on every source row, then blend row pairs.
    PlanarImage tmp(width, img.height(), 1);
    for (int y = 0; y < img.height(); ++y) {
      const auto src = img.row(c, y);
      auto dst = tmp.row(0, y);
      for (int x = 0; x < width; ++x) {
        dst[x] = (1.0 - tx[x].w1) * src[tx[x].i0] + tx[x].w1 * src[tx[x].i1];
      }
    }
    parallel_for(0, height, [&](int y) {
      k.blend2(out.row(c, y).data(), tmp.row(0, ty[y].i0).data(),
               1.0 - ty[y].w1, tmp.row(0, ty[y].i1).data(), ty[y].w1,
               static_cast<std::size_t>(width));
    });
  }
  return out;
}

PlanarImage mirror_horizontal(const PlanarImage& img) {
  PlanarImage out = img;
  for (int c = 0; c < img.channels(); ++c) {
    for (int y = 0; y < img.height(); ++y) {
      std::ranges::reverse(out.row(c, y));
    }
  }
  return out;
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::ranges::count_if(
      bits, [](std::uint8_t b) { return b != 0; }));
}

BinaryMask BinaryMask::from_image(const PlanarImage& img, double threshold) {
  require_channels(img, 1, "BinaryMask::from_image");
  BinaryMask m(img.width(), img.height());
  const auto p = img.plane(0);
  for (std::size_t i = 0; i < p.size(); ++i) m.bits[i] = p[i] >= threshold;
  return m;
}

PlanarImage BinaryMask::to_image() const {
  PlanarImage img(width, height, 1, ColorSpace::kMask);
  auto p = img.plane(0);
  for (std::size_t i = 0; i < bits.size(); ++i) p[i] = bits[i] ? 1.0 : 0.0;
  return img;
}

}  // namespace skymatte
