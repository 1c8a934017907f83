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

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "skymatte/image.hpp"

namespace skymatte {

using RgbGains = std::array<double, 3>;

// Bilinear lookup table over two strictly increasing axes; queries outside
// the grid clamp to the edge.
class Lut2D {
 public:
  // values[iy][ix] is the entry at (x_axis[ix], y_axis[iy]).
  Lut2D(std::vector<double> x_axis, std::vector<double> y_axis,
        std::vector<std::vector<double>> values);

  // {"x_axis": [...], "y_axis": [...], "values": [[...], ...]}
  static Lut2D from_json(const nlohmann::json& j);
  static Lut2D load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  double lookup(double x, double y) const;

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<std::vector<double>> v_;
};

// Tonemapped V: bias(v, b_d).
double darken_curve(double v, double b_d);
// v below t_c unchanged, above it (1 - t_c) bias((v - t_c)/(1 - t_c), b_c) + t_c.
double contrast_curve(double v, double b_c, double t_c);

// Each effect blends its result with the input as in + alpha (out - in), so
// it is exactly the identity where alpha = 0 or where the effect itself is
// neutral. Images must be 3-channel RGB in [0,1], alpha a MASK of the same
// size.
PlanarImage darken_sky(const PlanarImage& rgb, const PlanarImage& alpha,
                       double b_d);
PlanarImage enhance_contrast(const PlanarImage& rgb, const PlanarImage& alpha,
                             double b_c, double t_c = 0.085);
// alpha' = 0 below t_d, (alpha - t_d) / (1 - t_d) above; fg + alpha' (sky - fg).
PlanarImage composite_denoised(const PlanarImage& fg, const PlanarImage& sky,
                               const PlanarImage& alpha, double t_d = 0.8);
// Per channel g_fg*x + alpha (g_sky*x - g_fg*x), clamped to [0,1].
PlanarImage apply_dual_wb(const PlanarImage& rgb, const PlanarImage& alpha,
                          const RgbGains& gains_fg, const RgbGains& gains_sky);

struct EffectParams {
  double b_d = 0.5;
  double b_c = 0.5;
  double t_c = 0.085;
  double t_d = 0.8;
  RgbGains gains_fg{1.0, 1.0, 1.0};
  RgbGains gains_sky{1.0, 1.0, 1.0};
  std::optional<Lut2D> b_d_lut;  // (scene brightness, sky brightness) -> b_d
  std::optional<Lut2D> b_c_lut;  // (exposure time, SNR) -> b_c

  void validate() const;
};

// One step of a grading chain.
struct DenoiseStep {
  std::filesystem::path sky_rendition;  // sky-tuned denoise of the input
  double t_d = 0.8;
};
struct DarkenStep {
  std::optional<double> b_d;
  std::optional<Lut2D> lut;
  double scene_brightness = 0.0;
  double sky_brightness = 0.0;

  double resolve() const;
};
struct ContrastStep {
  std::optional<double> b_c;
  std::optional<Lut2D> lut;
  double exposure_time = 0.0;
  double snr = 0.0;
  double t_c = 0.085;

  double resolve() const;
};
struct WhiteBalanceStep {
  RgbGains gains_fg{1.0, 1.0, 1.0};
  RgbGains gains_sky{1.0, 1.0, 1.0};
};
using EffectStep =
    std::variant<DenoiseStep, DarkenStep, ContrastStep, WhiteBalanceStep>;

// Steps run in the fixed order denoise -> darken -> contrast -> white
// balance; each kind may appear at most once.
struct GradingChain {
  std::vector<EffectStep> steps;

  // {"effects": [{"effect": "darken", "b_d": 0.3}, ...]}. LUT references
  // ("lut": "file.json") resolve relative to base_dir.
  static GradingChain from_json(const nlohmann::json& j,
                                const std::filesystem::path& base_dir = {});
  static GradingChain load(const std::filesystem::path& path);
};

// Applies the chain. sky renditions for denoise steps are read from disk
// unless supplied through `sky_rendition`.
PlanarImage apply_chain(const PlanarImage& rgb, const PlanarImage& alpha,
                        const GradingChain& chain,
                        const PlanarImage* sky_rendition = nullptr);

}  // namespace skymatte
