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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "skymatte/confidence.hpp"
#include "skymatte/density.hpp"
#include "skymatte/refine.hpp"
#include "skymatte/wgf.hpp"

namespace skymatte {

// Named parameter bundles:
//   paper-internal  s=8, density inpainting at p_c=0.6, no sharpening
//   ade20k-gf       s=48, unit confidence, no inpainting, no sharpening
//   ade20k-de-gf    s=16, p_c=0.97, disk radius 4, 0.8/0.6/0.4, t_s=15
//   pipeline-s64    s=64 with the default probability confidence
// All use eps_l = eps_c = 0.01. The inpainting presets threshold the
// unnormalized kernel density, whose scale the thresholds are set against.
std::vector<std::string> preset_names();

struct RunConfig {
  std::string preset = "ade20k-de-gf";
  GuidedFilterParams gf{16, 0.01, 0.01};
  DensityParams density{0.01, 1024, 0.97, 0, false};
  TrimapConfidenceParams trimap_conf;
  InferenceConfidenceParams inference;
  int dilation_radius = 4;
  double t_s = 15.0;
  bool use_density = true;
  bool sharpen = true;
  std::uint64_t seed = 0;
  int threads = 1;
  bool linear = false;  // decode sRGB PNG input to linear light

  RefinePipelineParams refine_params() const;
  void validate() const;
};

// Throws ConfigError for an unknown name.
RunConfig preset_config(std::string_view name);

// Overlays the fields present in j. A "preset" key resets every field to
// that preset first, so it is applied before the others.
void apply_json(RunConfig& cfg, const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path,
                      std::string_view default_preset);
nlohmann::json to_json(const RunConfig& cfg);

}  // namespace skymatte
