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

#include "skymatte/color.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "skymatte/errors.hpp"

namespace skymatte {
namespace {

// Clamps every channel to [0,1] in place, or throws in strict mode.
void sanitize_unit_range(PlanarImage& img, ColorOptions opts,
                         std::string_view what) {
  std::size_t clamped = 0;
  for (double& v : img.data()) {
    if (v >= 0.0 && v <= 1.0) continue;
    if (opts.strict) {
      throw InvalidInput(std::string(what) + ": value " + std::to_string(v) +
                         " outside [0,1]");
    }
    v = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
    ++clamped;
  }
  if (clamped > 0) {
    spdlog::warn("{}: clamped {} out-of-range values to [0,1]", what, clamped);
  }
}

void require_tag(const PlanarImage& img, ColorSpace cs, std::string_view what) {
  require_channels(img, 3, what);
  if (img.colorspace() != cs) {
    throw InvalidInput(std::string(what) + ": expected " +
                       std::string(to_string(cs)) + " input, got " +
                       std::string(to_string(img.colorspace())));
  }
}

}  // namespace

PlanarImage rgb_to_yuv(const PlanarImage& rgb, ColorOptions opts) {
  require_tag(rgb, ColorSpace::kRgb, "rgb_to_yuv");
  PlanarImage in = rgb;
  sanitize_unit_range(in, opts, "rgb_to_yuv");
  PlanarImage out(rgb.width(), rgb.height(), 3, ColorSpace::kYuv);
  const auto r = in.plane(0), g = in.plane(1), b = in.plane(2);
  auto y = out.plane(0), u = out.plane(1), v = out.plane(2);
  for (std::size_t i = 0; i < out.pixel_count(); ++i) {
    const double luma = kLumaR * r[i] + kLumaG * g[i] + kLumaB * b[i];
    y[i] = luma;
    u[i] = (b[i] - luma) / (2.0 * (1.0 - kLumaB));
    v[i] = (r[i] - luma) / (2.0 * (1.0 - kLumaR));
  }
  return out;
}

PlanarImage yuv_to_rgb(const PlanarImage& yuv) {
  require_tag(yuv, ColorSpace::kYuv, "yuv_to_rgb");
  PlanarImage out(yuv.width(), yuv.height(), 3, ColorSpace::kRgb);
  const auto y = yuv.plane(0), u = yuv.plane(1), v = yuv.plane(2);
  auto r = out.plane(0), g = out.plane(1), b = out.plane(2);
  for (std::size_t i = 0; i < out.pixel_count(); ++i) {
    r[i] = y[i] + 2.0 * (1.0 - kLumaR) * v[i];
    b[i] = y[i] + 2.0 * (1.0 - kLumaB) * u[i];
    g[i] = (y[i] - kLumaR * r[i] - kLumaB * b[i]) / kLumaG;
  }
  return out;
}

Hsv rgb_to_hsv(double r, double g, double b) {
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double delta = mx - mn;
  Hsv out{0.0, 0.0, mx};
  if (mx <= 0.0 || delta <= 0.0) return out;
  out.s = delta / mx;
  double sector;
  if (mx == r) {
    sector = (g - b) / delta;
    if (sector < 0.0) sector += 6.0;
  } else if (mx == g) {
    sector = (b - r) / delta + 2.0;
  } else {
    sector = (r - g) / delta + 4.0;
  }
  out.h = sector / 6.0;
  if (out.h >= 1.0) out.h -= 1.0;
  return out;
}

void hsv_to_rgb(const Hsv& hsv, double& r, double& g, double& b) {
  const double v = hsv.v;
  const double c = v * hsv.s;
  double h6 = (hsv.h - std::floor(hsv.h)) * 6.0;
  const int sector = std::min(static_cast<int>(h6), 5);
  const double f = h6 - sector;
  const double m = v - c;
  const double rising = m + c * f;
  const double falling = v - c * f;
  switch (sector) {
    case 0: r = v; g = rising; b = m; break;
    case 1: r = falling; g = v; b = m; break;
    case 2: r = m; g = v; b = rising; break;
    case 3: r = m; g = falling; b = v; break;
    case 4: r = rising; g = m; b = v; break;
    default: r = v; g = m; b = falling; break;
  }
}

PlanarImage rgb_to_hsv(const PlanarImage& rgb, ColorOptions opts) {
  require_tag(rgb, ColorSpace::kRgb, "rgb_to_hsv");
  PlanarImage in = rgb;
  sanitize_unit_range(in, opts, "rgb_to_hsv");
  PlanarImage out(rgb.width(), rgb.height(), 3, ColorSpace::kHsv);
  for (std::size_t i = 0; i < out.pixel_count(); ++i) {
    const Hsv px = rgb_to_hsv(in.plane(0)[i], in.plane(1)[i], in.plane(2)[i]);
    out.plane(0)[i] = px.h;
    out.plane(1)[i] = px.s;
    out.plane(2)[i] = px.v;
  }
  return out;
}

PlanarImage hsv_to_rgb(const PlanarImage& hsv, ColorOptions opts) {
  require_tag(hsv, ColorSpace::kHsv, "hsv_to_rgb");
  PlanarImage in = hsv;
  // Hue wraps; only saturation and value are range-checked.
  for (double& h : in.plane(0)) h -= std::floor(h);
  PlanarImage sv(in.width(), in.height(), 2);
  std::ranges::copy(in.plane(1), sv.plane(0).begin());
  std::ranges::copy(in.plane(2), sv.plane(1).begin());
  sanitize_unit_range(sv, opts, "hsv_to_rgb");
  PlanarImage out(hsv.width(), hsv.height(), 3, ColorSpace::kRgb);
  for (std::size_t i = 0; i < out.pixel_count(); ++i) {
    hsv_to_rgb({in.plane(0)[i], sv.plane(0)[i], sv.plane(1)[i]},
               out.plane(0)[i], out.plane(1)[i], out.plane(2)[i]);
  }
  return out;
}

double srgb_to_linear(double v) {
  return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double v) {
  return v <= 0.0031308 ? 12.92 * v : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

}  // namespace skymatte
