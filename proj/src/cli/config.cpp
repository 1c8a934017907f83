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

#include "skymatte/config.hpp"

#include <algorithm>
#include <fstream>

#include "skymatte/errors.hpp"

namespace skymatte {
namespace {

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void check_keys(const nlohmann::json& j, std::string_view block,
                std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) {
    throw ConfigError(std::string(block) + " must be a JSON object");
  }
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown key '" + key + "' in " + std::string(block));
    }
  }
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"paper-internal", "ade20k-gf", "ade20k-de-gf", "pipeline-s64"};
}

RunConfig preset_config(std::string_view name) {
  RunConfig c;
  c.preset = std::string(name);
  if (name == "paper-internal") {
    c.gf = {8, 0.01, 0.01};
    c.density.p_c = 0.6;
    c.density.normalize_kernel = false;
    c.sharpen = false;
  } else if (name == "ade20k-gf") {
    c.gf = {48, 0.01, 0.01};
    c.use_density = false;
    c.sharpen = false;
  } else if (name == "ade20k-de-gf") {
    c.gf = {16, 0.01, 0.01};
    c.density.p_c = 0.97;
    c.density.normalize_kernel = false;
    c.dilation_radius = 4;
    c.trimap_conf = {0.8, 0.6, 0.4};
    c.t_s = 15.0;
    c.sharpen = true;
  } else if (name == "pipeline-s64") {
    c.gf = {64, 0.01, 0.01};
    c.inference = {};
    c.sharpen = false;
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'");
  }
  return c;
}

RefinePipelineParams RunConfig::refine_params() const {
  RefinePipelineParams p;
  p.dilation_radius = dilation_radius;
  p.gf = gf;
  p.density = density;
  p.density.seed = seed;
  p.conf = trimap_conf;
  p.t_s = t_s;
  p.use_density = use_density;
  p.sharpen = sharpen;
  return p;
}

void RunConfig::validate() const {
  if (threads < 1) throw ConfigError("threads must be >= 1");
  try {
    refine_params().validate();
    inference.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }
}

void apply_json(RunConfig& cfg, const nlohmann::json& j) {
  check_keys(j, "config",
             {"preset", "gf", "density", "confidence", "inference", "refine",
              "seed", "threads", "linear"});
  try {
    if (j.contains("preset")) {
      cfg = preset_config(j.at("preset").get<std::string>());
    }
    if (j.contains("gf")) {
      const auto& g = j.at("gf");
      check_keys(g, "gf", {"s", "eps_l", "eps_c"});
      read_field(g, "s", cfg.gf.s);
      read_field(g, "eps_l", cfg.gf.eps_l);
      read_field(g, "eps_c", cfg.gf.eps_c);
    }
    if (j.contains("density")) {
      const auto& d = j.at("density");
      check_keys(d, "density", {"sigma", "n_samples", "p_c", "normalize_kernel"});
      read_field(d, "sigma", cfg.density.sigma);
      read_field(d, "n_samples", cfg.density.n_samples);
      read_field(d, "p_c", cfg.density.p_c);
      read_field(d, "normalize_kernel", cfg.density.normalize_kernel);
    }
    if (j.contains("confidence")) {
      const auto& c = j.at("confidence");
      check_keys(c, "confidence", {"c_det", "c_inpaint", "c_undet"});
      read_field(c, "c_det", cfg.trimap_conf.c_det);
      read_field(c, "c_inpaint", cfg.trimap_conf.c_inpaint);
      read_field(c, "c_undet", cfg.trimap_conf.c_undet);
    }
    if (j.contains("inference")) {
      const auto& c = j.at("inference");
      check_keys(c, "inference", {"l", "h", "b", "eps"});
      read_field(c, "l", cfg.inference.l);
      read_field(c, "h", cfg.inference.h);
      read_field(c, "b", cfg.inference.b);
      read_field(c, "eps", cfg.inference.eps);
    }
    if (j.contains("refine")) {
      const auto& r = j.at("refine");
      check_keys(r, "refine",
                 {"dilation_radius", "t_s", "use_density", "sharpen"});
      read_field(r, "dilation_radius", cfg.dilation_radius);
      read_field(r, "t_s", cfg.t_s);
      read_field(r, "use_density", cfg.use_density);
      read_field(r, "sharpen", cfg.sharpen);
    }
    read_field(j, "seed", cfg.seed);
    read_field(j, "threads", cfg.threads);
    read_field(j, "linear", cfg.linear);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  cfg.validate();
}

RunConfig load_config(const std::filesystem::path& path,
                      std::string_view default_preset) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  RunConfig cfg = preset_config(default_preset);
  apply_json(cfg, j);
  return cfg;
}

nlohmann::json to_json(const RunConfig& c) {
  return {
      {"preset", c.preset},
      {"gf", {{"s", c.gf.s}, {"eps_l", c.gf.eps_l}, {"eps_c", c.gf.eps_c}}},
      {"density",
       {{"sigma", c.density.sigma},
        {"n_samples", c.density.n_samples},
        {"p_c", c.density.p_c},
        {"normalize_kernel", c.density.normalize_kernel}}},
      {"confidence",
       {{"c_det", c.trimap_conf.c_det},
        {"c_inpaint", c.trimap_conf.c_inpaint},
        {"c_undet", c.trimap_conf.c_undet}}},
      {"inference",
       {{"l", c.inference.l},
        {"h", c.inference.h},
        {"b", c.inference.b},
        {"eps", c.inference.eps}}},
      {"refine",
       {{"dilation_radius", c.dilation_radius},
        {"t_s", c.t_s},
        {"use_density", c.use_density},
        {"sharpen", c.sharpen}}},
      {"seed", c.seed},
      {"threads", c.threads},
      {"linear", c.linear},
  };
}

}  // namespace skymatte
