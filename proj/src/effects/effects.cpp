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

#include "skymatte/effects.hpp"

#include <algorithm>
#include <fstream>
#include <string>

#include "skymatte/confidence.hpp"
#include "skymatte/errors.hpp"
#include "skymatte/io.hpp"
#include "skymatte/kernels.hpp"
#include "skymatte/parallel.hpp"

namespace skymatte {
namespace {

void require_shape(double b, std::string_view name) {
  if (!(b > 0.0 && b < 1.0)) {
    throw InvalidParameter(std::string(name) + " must lie in (0,1), got " +
                           std::to_string(b));
  }
}

void require_unit_rgb(const PlanarImage& rgb, std::string_view what) {
  require_channels(rgb, 3, what);
  for (double v : rgb.data()) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvalidInput(std::string(what) + ": pixel value " +
                         std::to_string(v) + " outside [0,1]");
    }
  }
}

void require_inputs(const PlanarImage& rgb, const PlanarImage& alpha,
                    std::string_view what) {
  require_unit_rgb(rgb, what);
  require_mask(alpha, what);
  require_same_size(rgb, alpha, what);
}

void require_gains(const RgbGains& g, std::string_view name) {
  for (double v : g) {
    if (!(v > 0.0)) {
      throw InvalidParameter(std::string(name) + " must be positive");
    }
  }
}

// Maps V through curve(v) by scaling RGB with V'/V, which leaves H and S of
// the HSV decomposition unchanged, then blends by alpha.
template <typename VCurve>
PlanarImage tonemap_value(const PlanarImage& rgb, const PlanarImage& alpha,
                          VCurve&& curve) {
  PlanarImage out(rgb.width(), rgb.height(), 3, ColorSpace::kRgb);
  const auto& k = kernels::active();
  const auto w = static_cast<std::size_t>(rgb.width());
  parallel_for(0, rgb.height(), [&](int y) {
    std::vector<double> value(w), mapped(w), tone(w);
    const double* ch[3] = {rgb.row(0, y).data(), rgb.row(1, y).data(),
                           rgb.row(2, y).data()};
    for (std::size_t i = 0; i < w; ++i) {
      value[i] = std::max({ch[0][i], ch[1][i], ch[2][i]});
    }
    curve(mapped.data(), value.data(), w);
    const double* a = alpha.row(0, y).data();
    for (int c = 0; c < 3; ++c) {
      for (std::size_t i = 0; i < w; ++i) {
        tone[i] = value[i] > 0.0 ? ch[c][i] * (mapped[i] / value[i]) : 0.0;
      }
      k.lerp(out.row(c, y).data(), ch[c], tone.data(), a, w);
    }
  });
  return out;
}

Lut2D lut_from_json_value(const nlohmann::json& j,
                          const std::filesystem::path& base_dir) {
  if (j.is_string()) return Lut2D::load(base_dir / j.get<std::string>());
  return Lut2D::from_json(j);
}

RgbGains gains_from_json(const nlohmann::json& j, std::string_view name) {
  if (!j.is_array() || j.size() != 3) {
    throw ConfigError(std::string(name) + " must be an array of 3 numbers");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

int step_rank(const EffectStep& s) { return static_cast<int>(s.index()); }

}  // namespace

Lut2D::Lut2D(std::vector<double> x_axis, std::vector<double> y_axis,
             std::vector<std::vector<double>> values)
    : x_(std::move(x_axis)), y_(std::move(y_axis)), v_(std::move(values)) {
  if (x_.size() < 2 || y_.size() < 2) {
    throw ConfigError("LUT needs at least 2 entries per axis");
  }
  auto increasing = [](const std::vector<double>& a) {
    return std::ranges::adjacent_find(a, std::greater_equal<>()) == a.end();
  };
  if (!increasing(x_) || !increasing(y_)) {
    throw ConfigError("LUT axes must be strictly increasing");
  }
  if (v_.size() != y_.size()) {
    throw ConfigError("LUT needs one value row per y-axis entry");
  }
  for (const auto& row : v_) {
    if (row.size() != x_.size()) {
      throw ConfigError("LUT rows need one value per x-axis entry");
    }
  }
}

Lut2D Lut2D::from_json(const nlohmann::json& j) {
  try {
    return Lut2D(j.at("x_axis").get<std::vector<double>>(),
                 j.at("y_axis").get<std::vector<double>>(),
                 j.at("values").get<std::vector<std::vector<double>>>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed LUT: ") + e.what());
  }
}

Lut2D Lut2D::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open LUT " + path.string());
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("LUT " + path.string() + ": " + e.what());
  }
}

nlohmann::json Lut2D::to_json() const {
  return {{"x_axis", x_}, {"y_axis", y_}, {"values", v_}};
}

double Lut2D::lookup(double x, double y) const {
  auto locate = [](const std::vector<double>& axis, double q) {
    q = std::clamp(q, axis.front(), axis.back());
    auto it = std::ranges::upper_bound(axis, q);
    std::size_t i = static_cast<std::size_t>(it - axis.begin());
    i = std::clamp<std::size_t>(i, 1, axis.size() - 1) - 1;
    const double t = (q - axis[i]) / (axis[i + 1] - axis[i]);
    return std::pair{i, t};
  };
  const auto [ix, tx] = locate(x_, x);
  const auto [iy, ty] = locate(y_, y);
  const double top = v_[iy][ix] + tx * (v_[iy][ix + 1] - v_[iy][ix]);
  const double bot = v_[iy + 1][ix] + tx * (v_[iy + 1][ix + 1] - v_[iy + 1][ix]);
  return top + ty * (bot - top);
}

double darken_curve(double v, double b_d) { return bias(v, b_d); }

double contrast_curve(double v, double b_c, double t_c) {
  if (v < t_c) return v;
  return (1.0 - t_c) * bias((v - t_c) / (1.0 - t_c), b_c) + t_c;
}

PlanarImage darken_sky(const PlanarImage& rgb, const PlanarImage& alpha,
                       double b_d) {
  require_shape(b_d, "b_d");
  require_inputs(rgb, alpha, "darken_sky");
  const double k_shape = 1.0 / b_d - 2.0;
  const auto& k = kernels::active();
  return tonemap_value(rgb, alpha,
                       [&](double* out, const double* v, std::size_t n) {
                         k.bias_curve(out, v, k_shape, n);
                       });
}

PlanarImage enhance_contrast(const PlanarImage& rgb, const PlanarImage& alpha,
                             double b_c, double t_c) {
  require_shape(b_c, "b_c");
  if (!(t_c >= 0.0 && t_c < 1.0)) {
    throw InvalidParameter("t_c must lie in [0,1)");
  }
  require_inputs(rgb, alpha, "enhance_contrast");
  return tonemap_value(rgb, alpha,
                       [&](double* out, const double* v, std::size_t n) {
                         for (std::size_t i = 0; i < n; ++i) {
                           out[i] = contrast_curve(v[i], b_c, t_c);
                         }
                       });
}

PlanarImage composite_denoised(const PlanarImage& fg, const PlanarImage& sky,
                               const PlanarImage& alpha, double t_d) {
  if (!(t_d > 0.0 && t_d < 1.0)) {
    throw InvalidParameter("t_d must lie in (0,1), got " + std::to_string(t_d));
  }
  require_inputs(fg, alpha, "composite_denoised");
  require_unit_rgb(sky, "composite_denoised");
  require_same_size(fg, sky, "composite_denoised");
  PlanarImage out(fg.width(), fg.height(), 3, ColorSpace::kRgb);
  const auto& k = kernels::active();
  const auto w = static_cast<std::size_t>(fg.width());
  parallel_for(0, fg.height(), [&](int y) {
    std::vector<double> adjusted(w);
    const auto a = alpha.row(0, y);
    for (std::size_t i = 0; i < w; ++i) {
      adjusted[i] = a[i] < t_d ? 0.0 : (a[i] - t_d) / (1.0 - t_d);
    }
    for (int c = 0; c < 3; ++c) {
      k.lerp(out.row(c, y).data(), fg.row(c, y).data(), sky.row(c, y).data(),
             adjusted.data(), w);
    }
  });
  return out;
}

PlanarImage apply_dual_wb(const PlanarImage& rgb, const PlanarImage& alpha,
                          const RgbGains& gains_fg, const RgbGains& gains_sky) {
  require_gains(gains_fg, "gains_fg");
  require_gains(gains_sky, "gains_sky");
  require_inputs(rgb, alpha, "apply_dual_wb");
  PlanarImage out(rgb.width(), rgb.height(), 3, ColorSpace::kRgb);
  const auto& k = kernels::active();
  const auto w = static_cast<std::size_t>(rgb.width());
  parallel_for(0, rgb.height(), [&](int y) {
    std::vector<double> fg(w), sky(w);
    for (int c = 0; c < 3; ++c) {
      const auto src = rgb.row(c, y);
      for (std::size_t i = 0; i < w; ++i) {
        fg[i] = gains_fg[c] * src[i];
        sky[i] = gains_sky[c] * src[i];
      }
      auto dst = out.row(c, y);
      k.lerp(dst.data(), fg.data(), sky.data(), alpha.row(0, y).data(), w);
      for (double& v : dst) v = std::clamp(v, 0.0, 1.0);
    }
  });
  return out;
}

void EffectParams::validate() const {
  require_shape(b_d, "b_d");
  require_shape(b_c, "b_c");
  if (!(t_c >= 0.0 && t_c < 1.0)) throw InvalidParameter("t_c must lie in [0,1)");
  if (!(t_d > 0.0 && t_d < 1.0)) throw InvalidParameter("t_d must lie in (0,1)");
  require_gains(gains_fg, "gains_fg");
  require_gains(gains_sky, "gains_sky");
}

double DarkenStep::resolve() const {
  if (b_d) return *b_d;
  if (lut) return lut->lookup(scene_brightness, sky_brightness);
  throw ConfigError("darken step needs b_d or a LUT");
}

double ContrastStep::resolve() const {
  if (b_c) return *b_c;
  if (lut) return lut->lookup(exposure_time, snr);
  throw ConfigError("contrast step needs b_c or a LUT");
}

GradingChain GradingChain::from_json(const nlohmann::json& j,
                                     const std::filesystem::path& base_dir) {
  GradingChain chain;
  try {
    for (const auto& e : j.at("effects")) {
      const std::string kind = e.at("effect").get<std::string>();
      if (kind == "denoise") {
        DenoiseStep s;
        s.sky_rendition = base_dir / e.at("sky_rendition").get<std::string>();
        s.t_d = e.value("t_d", 0.8);
        chain.steps.emplace_back(s);
      } else if (kind == "darken") {
        DarkenStep s;
        if (e.contains("b_d")) s.b_d = e["b_d"].get<double>();
        if (e.contains("lut")) s.lut = lut_from_json_value(e["lut"], base_dir);
        s.scene_brightness = e.value("scene_brightness", 0.0);
        s.sky_brightness = e.value("sky_brightness", 0.0);
        s.resolve();
        chain.steps.emplace_back(std::move(s));
      } else if (kind == "contrast") {
        ContrastStep s;
        if (e.contains("b_c")) s.b_c = e["b_c"].get<double>();
        if (e.contains("lut")) s.lut = lut_from_json_value(e["lut"], base_dir);
        s.exposure_time = e.value("exposure_time", 0.0);
        s.snr = e.value("snr", 0.0);
        s.t_c = e.value("t_c", 0.085);
        s.resolve();
        chain.steps.emplace_back(std::move(s));
      } else if (kind == "white_balance" || kind == "wb") {
        WhiteBalanceStep s;
        if (e.contains("gains_fg")) s.gains_fg = gains_from_json(e["gains_fg"], "gains_fg");
        if (e.contains("gains_sky")) s.gains_sky = gains_from_json(e["gains_sky"], "gains_sky");
        chain.steps.emplace_back(s);
      } else {
        throw ConfigError("unknown effect '" + kind + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed grading config: ") + e.what());
  }
  std::ranges::stable_sort(chain.steps, {}, step_rank);
  for (std::size_t i = 1; i < chain.steps.size(); ++i) {
    if (step_rank(chain.steps[i]) == step_rank(chain.steps[i - 1])) {
      throw ConfigError("each effect may appear at most once in a chain");
    }
  }
  return chain;
}

GradingChain GradingChain::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open grading config " + path.string());
  try {
    return from_json(nlohmann::json::parse(in), path.parent_path());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("grading config " + path.string() + ": " + e.what());
  }
}

PlanarImage apply_chain(const PlanarImage& rgb, const PlanarImage& alpha,
                        const GradingChain& chain,
                        const PlanarImage* sky_rendition) {
  PlanarImage img = rgb;
  for (const auto& step : chain.steps) {
    if (const auto* s = std::get_if<DenoiseStep>(&step)) {
      if (sky_rendition) {
        img = composite_denoised(img, *sky_rendition, alpha, s->t_d);
      } else {
        img = composite_denoised(img, read_image(s->sky_rendition), alpha,
                                 s->t_d);
      }
    } else if (const auto* s = std::get_if<DarkenStep>(&step)) {
      img = darken_sky(img, alpha, s->resolve());
    } else if (const auto* s = std::get_if<ContrastStep>(&step)) {
      img = enhance_contrast(img, alpha, s->resolve(), s->t_c);
    } else if (const auto* s = std::get_if<WhiteBalanceStep>(&step)) {
      img = apply_dual_wb(img, alpha, s->gains_fg, s->gains_sky);
    }
  }
  return img;
}

}  // namespace skymatte
