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

#include "skymatte/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/fmt/fmt.h>
#include <spdlog/spdlog.h>

#include "skymatte/color.hpp"
#include "skymatte/config.hpp"
#include "skymatte/effects.hpp"
#include "skymatte/errors.hpp"
#include "skymatte/io.hpp"
#include "skymatte/kernels.hpp"
#include "skymatte/metrics.hpp"
#include "skymatte/parallel.hpp"
#include "skymatte/refine.hpp"
#include "skymatte/synthetic.hpp"

namespace skymatte::cli {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct GlobalOptions {
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> preset;
  std::optional<std::string> config;
  std::string isa = "auto";
  bool linear = false;
  std::string log_level = "info";
};

struct RefineOptions {
  std::string manifest;
};

struct UpsampleOptions {
  std::string probability;
  std::string reference;
  std::string output;
  bool profile = false;
};

struct GradeOptions {
  std::string image;
  std::string matte;
  std::string grading;
  std::string output;
  std::string sky_rendition;
  int bit_depth = 16;
};

struct EvalOptions {
  std::string pred_dir;
  std::string gt_dir;
  std::string csv;
  std::string json;
};

struct BenchOptions {
  std::string sizes = "1024x768";
  std::string s_values = "64";
  int reps = 5;
  std::string probability_size = "256x256";
  std::string csv;
};

struct SynthOptions {
  int width = 512;
  int height = 384;
  double aa_radius = 1.5;
  std::string out_dir;
};

class ThreadCountGuard {
 public:
  explicit ThreadCountGuard(int n) : previous_(thread_count()) {
    set_thread_count(n);
  }
  ~ThreadCountGuard() { set_thread_count(previous_); }
  ThreadCountGuard(const ThreadCountGuard&) = delete;
  ThreadCountGuard& operator=(const ThreadCountGuard&) = delete;

 private:
  int previous_;
};

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

RunConfig resolve_config(const GlobalOptions& g, std::string_view default_preset,
                         const nlohmann::json* overrides = nullptr) {
  RunConfig cfg = preset_config(g.preset.value_or(std::string(default_preset)));
  if (g.config) {
    std::ifstream in(*g.config);
    if (!in) throw ConfigError("cannot open config " + *g.config);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("config " + *g.config + ": " + e.what());
    }
    // An explicit --preset wins over the file's preset.
    if (g.preset && j.is_object()) j.erase("preset");
    apply_json(cfg, j);
  }
  if (overrides) apply_json(cfg, *overrides);
  if (g.seed) cfg.seed = *g.seed;
  if (g.threads) cfg.threads = *g.threads;
  if (g.linear) cfg.linear = true;
  cfg.validate();
  return cfg;
}

std::pair<int, int> parse_size(const std::string& s) {
  int w = 0;
  int h = 0;
  char x = 0;
  std::istringstream in(s);
  if (!(in >> w >> x >> h) || x != 'x' || w < 1 || h < 1 || !in.eof()) {
    throw ConfigError("expected WIDTHxHEIGHT, got '" + s + "'");
  }
  return {w, h};
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& s, Parse parse) {
  std::vector<T> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(parse(item));
  }
  if (out.empty()) throw ConfigError("empty list '" + s + "'");
  return out;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

PlanarImage read_rgb(const fs::path& path, bool linear) {
  PlanarImage img = read_image(path, {.srgb_to_linear = linear});
  require_channels(img, 3, path.string());
  img.set_colorspace(ColorSpace::kRgb);
  return img;
}

PlanarImage read_matte(const fs::path& path) {
  PlanarImage img = read_image(path);
  if (img.channels() != 1) {
    throw InvalidInput(path.string() + ": expected a one-channel matte");
  }
  return to_mask(img);
}

// --- refine ------------------------------------------------------------

void refine_entry(const nlohmann::json& entry, const fs::path& base,
                  const GlobalOptions& g) {
  const auto image_path = resolve(base, entry.at("image_path").get<std::string>());
  const auto annotation_path =
      resolve(base, entry.at("annotation_path").get<std::string>());
  const auto output_path =
      resolve(base, entry.at("output_path").get<std::string>());
  const nlohmann::json* params =
      entry.contains("params") ? &entry.at("params") : nullptr;
  const RunConfig cfg = resolve_config(g, "ade20k-de-gf", params);

  const PlanarImage rgb = read_rgb(image_path, cfg.linear);
  const std::string kind = entry.value("annotation_type", std::string("auto"));
  std::optional<Trimap> trimap;
  if (kind == "trimap") {
    trimap = read_trimap(annotation_path);
  } else if (kind == "auto") {
    try {
      trimap = read_trimap(annotation_path);
    } catch (const InvalidInput&) {
      // Not a label image; fall through to a thresholded mask.
    }
    if (trimap && trimap->count(Label::kUndetermined) == 0) trimap.reset();
  } else if (kind != "mask") {
    throw ConfigError("annotation_type must be auto, mask or trimap");
  }

  // Optional region (e.g. trees) forced into the undetermined label.
  std::optional<BinaryMask> extra;
  if (entry.contains("undetermined_path")) {
    extra = BinaryMask::from_image(to_mask(read_image(
        resolve(base, entry.at("undetermined_path").get<std::string>()))));
  }

  PlanarImage alpha;
  if (trimap) {
    if (extra) {
      if (extra->width != trimap->width() || extra->height != trimap->height()) {
        throw InvalidInput("undetermined region and trimap sizes differ");
      }
      for (int y = 0; y < extra->height; ++y) {
        for (int x = 0; x < extra->width; ++x) {
          if (extra->at(x, y)) trimap->set(x, y, Label::kUndetermined);
        }
      }
    }
    alpha = refine_annotation(rgb, *trimap, cfg.refine_params());
  } else {
    const BinaryMask mask =
        BinaryMask::from_image(to_mask(read_image(annotation_path)));
    alpha = refine_annotation(rgb, mask, cfg.refine_params(),
                              extra ? &*extra : nullptr);
  }
  write_image(output_path, alpha);
}

int cmd_refine(const RefineOptions& o, const GlobalOptions& g) {
  std::ifstream in(o.manifest);
  if (!in) throw ConfigError("cannot open manifest " + o.manifest);
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("manifest " + o.manifest + ": " + e.what());
  }
  if (!manifest.is_array()) throw ConfigError("manifest must be a JSON array");
  // Validate the global configuration once, before touching any image.
  const RunConfig cfg = resolve_config(g, "ade20k-de-gf");
  ThreadCountGuard threads(cfg.threads);

  const fs::path base = fs::path(o.manifest).parent_path();
  std::size_t failures = 0;
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    const auto& entry = manifest[i];
    const std::string name = entry.is_object() && entry.contains("image_path")
                                 ? entry["image_path"].dump()
                                 : "#" + std::to_string(i);
    try {
      refine_entry(entry, base, g);
      spdlog::info("refine {}: ok", name);
    } catch (const std::exception& e) {
      ++failures;
      spdlog::error("refine {}: {}", name, e.what());
    }
  }
  spdlog::info("refine: {} of {} images failed", failures, manifest.size());
  return failures == 0 ? kOk : kPartialFailure;
}

// --- upsample ----------------------------------------------------------

int cmd_upsample(const UpsampleOptions& o, const GlobalOptions& g) {
  const RunConfig cfg = resolve_config(g, "pipeline-s64");
  ThreadCountGuard threads(cfg.threads);
  const auto t0 = Clock::now();
  const PlanarImage prob = read_matte(o.probability);
  const PlanarImage rgb = read_rgb(o.reference, cfg.linear);
  const double read_ms = elapsed_ms(t0);
  FilterProfile profile;
  const auto t1 = Clock::now();
  const PlanarImage alpha =
      upsample_probability(prob, rgb, cfg.gf, cfg.inference, &profile);
  const double filter_ms = elapsed_ms(t1);
  const auto t2 = Clock::now();
  write_image(o.output, alpha);
  const double write_ms = elapsed_ms(t2);
  if (o.profile) {
    const nlohmann::json j = {
        {"read_ms", read_ms},       {"filter_ms", filter_ms},
        {"write_ms", write_ms},     {"resize_ms", profile.resize_ms},
        {"downsample_ms", profile.downsample_ms},
        {"solve_ms", profile.solve_ms},
        {"upsample_ms", profile.upsample_ms},
        {"apply_ms", profile.apply_ms},
        {"solves", profile.solves},
        {"low_width", profile.low_width},
        {"low_height", profile.low_height}};
    std::cout << j.dump() << '\n';
  }
  return kOk;
}

// --- grade -------------------------------------------------------------

int cmd_grade(const GradeOptions& o, const GlobalOptions& g) {
  const RunConfig cfg = resolve_config(g, "pipeline-s64");
  ThreadCountGuard threads(cfg.threads);
  const GradingChain chain = GradingChain::load(o.grading);
  if (chain.steps.empty()) {
    fs::copy_file(o.image, o.output, fs::copy_options::overwrite_existing);
    return kOk;
  }
  const PlanarImage rgb = read_rgb(o.image, cfg.linear);
  const PlanarImage alpha = read_matte(o.matte);
  std::optional<PlanarImage> sky;
  if (!o.sky_rendition.empty()) sky = read_rgb(o.sky_rendition, cfg.linear);
  const PlanarImage graded =
      apply_chain(rgb, alpha, chain, sky ? &*sky : nullptr);
  write_image(o.output, graded,
              {.png_bit_depth = o.bit_depth, .linear_to_srgb = cfg.linear});
  return kOk;
}

// --- eval --------------------------------------------------------------

bool is_image_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::ranges::transform(ext, ext.begin(),
                         [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".pfm";
}

std::optional<fs::path> find_ground_truth(const fs::path& gt_dir,
                                          const fs::path& pred) {
  const fs::path same = gt_dir / pred.filename();
  if (fs::exists(same)) return same;
  for (const char* ext : {".png", ".pfm", ".PNG", ".PFM"}) {
    fs::path alt = gt_dir / pred.stem();
    alt += ext;
    if (fs::exists(alt)) return alt;
  }
  return std::nullopt;
}

std::string fmt_value(double v) { return fmt::format("{:.17g}", v); }

int cmd_eval(const EvalOptions& o, const GlobalOptions& g) {
  const RunConfig cfg = resolve_config(g, "pipeline-s64");
  ThreadCountGuard threads(cfg.threads);
  if (!fs::is_directory(o.pred_dir)) {
    throw ConfigError("not a directory: " + o.pred_dir);
  }
  if (!fs::is_directory(o.gt_dir)) {
    throw ConfigError("not a directory: " + o.gt_dir);
  }
  std::vector<fs::path> preds;
  for (const auto& e : fs::directory_iterator(o.pred_dir)) {
    if (e.is_regular_file() && is_image_file(e.path())) preds.push_back(e.path());
  }
  std::ranges::sort(preds);

  std::ostringstream csv;
  csv << "image,status,miou_05,mcr_05,rmse,mae,boundary_loss,jsd,pixels\n";
  nlohmann::json rows = nlohmann::json::array();
  std::vector<MetricsReport> ok;
  std::size_t failures = 0;
  for (const auto& pred : preds) {
    const std::string name = pred.filename().string();
    try {
      const auto gt = find_ground_truth(o.gt_dir, pred);
      if (!gt) throw IoError("no ground truth for " + pred.string());
      const MetricsReport r = evaluate(read_matte(pred), read_matte(*gt));
      ok.push_back(r);
      csv << name << ",ok," << fmt_value(r.miou_05) << ','
          << fmt_value(r.mcr_05) << ',' << fmt_value(r.rmse) << ','
          << fmt_value(r.mae) << ',' << fmt_value(r.boundary_loss) << ','
          << fmt_value(r.jsd) << ',' << r.pixels << '\n';
      rows.push_back({{"image", name}, {"status", "ok"},
                      {"miou_05", r.miou_05}, {"mcr_05", r.mcr_05},
                      {"rmse", r.rmse}, {"mae", r.mae},
                      {"boundary_loss", r.boundary_loss}, {"jsd", r.jsd},
                      {"pixels", r.pixels}});
    } catch (const std::exception& e) {
      ++failures;
      spdlog::error("eval {}: {}", name, e.what());
      csv << name << ",error,,,,,,,\n";
      rows.push_back({{"image", name}, {"status", "error"}, {"error", e.what()}});
    }
  }

  nlohmann::json aggregate = {{"count", ok.size()}};
  if (!ok.empty()) {
    auto mean = [&](double MetricsReport::*field) {
      std::vector<double> v;
      for (const auto& r : ok) v.push_back(r.*field);
      return pairwise_sum(v) / static_cast<double>(v.size());
    };
    std::size_t pixels = 0;
    for (const auto& r : ok) pixels += r.pixels;
    aggregate["miou_05"] = mean(&MetricsReport::miou_05);
    aggregate["mcr_05"] = mean(&MetricsReport::mcr_05);
    aggregate["rmse"] = mean(&MetricsReport::rmse);
    aggregate["mae"] = mean(&MetricsReport::mae);
    aggregate["boundary_loss"] = mean(&MetricsReport::boundary_loss);
    aggregate["jsd"] = mean(&MetricsReport::jsd);
    aggregate["pixels"] = pixels;
    csv << "mean,aggregate," << fmt_value(aggregate["miou_05"]) << ','
        << fmt_value(aggregate["mcr_05"]) << ',' << fmt_value(aggregate["rmse"])
        << ',' << fmt_value(aggregate["mae"]) << ','
        << fmt_value(aggregate["boundary_loss"]) << ','
        << fmt_value(aggregate["jsd"]) << ',' << pixels << '\n';
  }

  if (o.csv.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(o.csv, std::ios::binary);
    if (!(f << csv.str())) throw IoError("cannot write " + o.csv);
  }
  if (!o.json.empty()) {
    std::ofstream f(o.json, std::ios::binary);
    const nlohmann::json j = {{"images", rows}, {"aggregate", aggregate}};
    if (!(f << j.dump(2) << '\n')) throw IoError("cannot write " + o.json);
  }
  return failures == 0 ? kOk : kPartialFailure;
}

// --- bench -------------------------------------------------------------

double median(std::vector<double> v) {
  std::ranges::sort(v);
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int cmd_bench(const BenchOptions& o, const GlobalOptions& g) {
  const RunConfig cfg = resolve_config(g, "pipeline-s64");
  ThreadCountGuard threads(cfg.threads);
  if (o.reps < 1) throw ConfigError("--reps must be >= 1");
  const auto sizes = parse_list<std::pair<int, int>>(o.sizes, parse_size);
  const auto s_values = parse_list<int>(o.s_values, [](const std::string& s) {
    try {
      return std::stoi(s);
    } catch (const std::exception&) {
      throw ConfigError("bad s value '" + s + "'");
    }
  });
  const auto [pw, ph] = parse_size(o.probability_size);

  GradingChain effects;
  DarkenStep darken;
  darken.b_d = 0.3;
  ContrastStep contrast;
  contrast.b_c = 0.4;
  effects.steps.emplace_back(darken);
  effects.steps.emplace_back(contrast);

  std::ostringstream csv;
  csv << "width,height,s,reps,confidence_ms,yuv_ms,filter_ms,resize_ms,"
         "downsample_ms,solve_ms,upsample_ms,apply_ms,effects_ms,total_ms,"
         "solves,solve_limit,low_width,low_height,isa,threads\n";
  for (const auto& [w, h] : sizes) {
    SyntheticParams sp;
    sp.width = w;
    sp.height = h;
    sp.seed = cfg.seed;
    sp.probability_width = pw;
    sp.probability_height = ph;
    const SyntheticScene scene = make_synthetic_scene(sp);
    for (int s : s_values) {
      GuidedFilterParams gf = cfg.gf;
      gf.s = s;
      gf.validate();
      std::map<std::string, std::vector<double>> t;
      FilterProfile last;
      for (int r = 0; r < o.reps; ++r) {
        const auto t0 = Clock::now();
        const ConfidenceMap conf =
            inference_confidence(scene.probability, cfg.inference);
        t["confidence"].push_back(elapsed_ms(t0));
        const auto t1 = Clock::now();
        const PlanarImage yuv = rgb_to_yuv(scene.rgb);
        t["yuv"].push_back(elapsed_ms(t1));
        FilterProfile prof;
        const auto t2 = Clock::now();
        const PlanarImage alpha =
            modified_guided_filter(yuv, scene.probability, conf, gf, &prof);
        t["filter"].push_back(elapsed_ms(t2));
        t["resize"].push_back(prof.resize_ms);
        t["downsample"].push_back(prof.downsample_ms);
        t["solve"].push_back(prof.solve_ms);
        t["upsample"].push_back(prof.upsample_ms);
        t["apply"].push_back(prof.apply_ms);
        const auto t3 = Clock::now();
        const PlanarImage graded = apply_chain(scene.rgb, alpha, effects);
        t["effects"].push_back(elapsed_ms(t3));
        t["total"].push_back(elapsed_ms(t0));
        last = prof;
      }
      const std::size_t limit =
          static_cast<std::size_t>(low_res_extent(w, s)) * low_res_extent(h, s);
      csv << w << ',' << h << ',' << s << ',' << o.reps;
      for (const char* k : {"confidence", "yuv", "filter", "resize",
                            "downsample", "solve", "upsample", "apply",
                            "effects", "total"}) {
        csv << ',' << fmt::format("{:.3f}", median(t[k]));
      }
      csv << ',' << last.solves << ',' << limit << ',' << last.low_width << ','
          << last.low_height << ',' << kernels::to_string(kernels::active_isa())
          << ',' << thread_count() << '\n';
    }
  }
  if (o.csv.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(o.csv, std::ios::binary);
    if (!(f << csv.str())) throw IoError("cannot write " + o.csv);
  }
  return kOk;
}

// --- synth -------------------------------------------------------------

int cmd_synth(const SynthOptions& o, const GlobalOptions& g) {
  const RunConfig cfg = resolve_config(g, "pipeline-s64");
  ThreadCountGuard threads(cfg.threads);
  SyntheticParams sp;
  sp.width = o.width;
  sp.height = o.height;
  sp.seed = cfg.seed;
  sp.aa_radius = o.aa_radius;
  const SyntheticScene scene = make_synthetic_scene(sp);
  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  write_pfm(dir / "rgb.pfm", scene.rgb);
  write_png(dir / "rgb.png", scene.rgb);
  write_pfm(dir / "alpha.pfm", scene.alpha);
  write_png(dir / "annotation.png", scene.annotation.to_image(),
            {.png_bit_depth = 8});
  write_trimap(dir / "trimap.png", scene.trimap);
  write_pfm(dir / "probability.pfm", scene.probability);
  const nlohmann::json manifest = nlohmann::json::array(
      {{{"image_path", "rgb.pfm"},
        {"annotation_path", "annotation.png"},
        {"output_path", "refined.pfm"}}});
  std::ofstream f(dir / "manifest.json", std::ios::binary);
  if (!(f << manifest.dump(2) << '\n')) {
    throw IoError("cannot write " + (dir / "manifest.json").string());
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Sky matte refinement, upsampling, grading and evaluation",
               "skymatte"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--threads", g.threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--preset", g.preset, "Parameter preset")
      ->check(CLI::IsMember(preset_names()));
  app.add_option("--config", g.config, "JSON configuration file");
  app.add_option("--isa", g.isa, "Kernel variant")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));
  app.add_flag("--linear", g.linear,
               "Decode sRGB PNG images to linear light and encode outputs");
  app.add_option("--log-level", g.log_level, "trace, debug, info, warn, error");

  RefineOptions ro;
  auto* refine = app.add_subcommand("refine", "Refine coarse annotations");
  refine->add_option("--manifest", ro.manifest, "JSON manifest")->required();

  UpsampleOptions uo;
  auto* upsample =
      app.add_subcommand("upsample", "Upsample a sky probability map");
  upsample->add_option("--probability", uo.probability)->required();
  upsample->add_option("--reference", uo.reference)->required();
  upsample->add_option("--output", uo.output)->required();
  upsample->add_flag("--profile", uo.profile, "Print stage timings as JSON");

  GradeOptions go;
  auto* grade = app.add_subcommand("grade", "Apply sky grading effects");
  grade->add_option("--image", go.image)->required();
  grade->add_option("--matte", go.matte)->required();
  grade->add_option("--grading", go.grading, "Effect chain JSON")->required();
  grade->add_option("--output", go.output)->required();
  grade->add_option("--sky-rendition", go.sky_rendition,
                    "Sky-denoised rendition for the denoise step");
  grade->add_option("--bit-depth", go.bit_depth)
      ->check(CLI::IsMember({8, 16}));

  EvalOptions eo;
  auto* eval = app.add_subcommand("eval", "Evaluate mattes against ground truth");
  eval->add_option("--pred-dir", eo.pred_dir)->required();
  eval->add_option("--gt-dir", eo.gt_dir)->required();
  eval->add_option("--csv", eo.csv, "CSV report (default stdout)");
  eval->add_option("--json", eo.json, "JSON report");

  BenchOptions bo;
  auto* bench = app.add_subcommand("bench", "Time the upsampling pipeline");
  bench->add_option("--sizes", bo.sizes, "Comma-separated WxH list");
  bench->add_option("--s", bo.s_values, "Comma-separated downsampling factors");
  bench->add_option("--reps", bo.reps);
  bench->add_option("--probability-size", bo.probability_size);
  bench->add_option("--csv", bo.csv, "CSV report (default stdout)");

  SynthOptions so;
  auto* synth = app.add_subcommand("synth", "Write the synthetic test scene");
  synth->add_option("--width", so.width);
  synth->add_option("--height", so.height);
  synth->add_option("--aa-radius", so.aa_radius);
  synth->add_option("--out-dir", so.out_dir)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  const auto level = spdlog::level::from_str(g.log_level);
  const auto previous_level = spdlog::get_level();
  spdlog::set_level(level);
  struct LevelReset {
    spdlog::level::level_enum l;
    ~LevelReset() { spdlog::set_level(l); }
  } level_reset{previous_level};

  try {
    std::optional<kernels::ScopedIsa> isa;
    if (g.isa != "auto") {
      const auto parsed = kernels::parse_isa(g.isa);
      if (!parsed || !kernels::isa_supported(*parsed)) {
        throw ConfigError("kernel variant '" + g.isa + "' is not available");
      }
      isa.emplace(*parsed);
    }
    if (*refine) return cmd_refine(ro, g);
    if (*upsample) return cmd_upsample(uo, g);
    if (*grade) return cmd_grade(go, g);
    if (*eval) return cmd_eval(eo, g);
    if (*bench) return cmd_bench(bo, g);
    if (*synth) return cmd_synth(so, g);
  } catch (const ConfigError& e) {
    spdlog::error("{}", e.what());
    return kUsageError;
  } catch (const InvalidParameter& e) {
    spdlog::error("{}", e.what());
    return kUsageError;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kPartialFailure;
  }
  return kUsageError;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace skymatte::cli
