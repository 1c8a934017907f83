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

#include "skymatte/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <spdlog/spdlog.h>

#include "skymatte/errors.hpp"

namespace skymatte {
namespace {

void require_pair(const PlanarImage& pred, const PlanarImage& gt,
                  std::string_view what) {
  require_channels(pred, 1, what);
  require_channels(gt, 1, what);
  require_same_size(pred, gt, what);
}

double xlogx_ratio(double p, double m) { return p * std::log(p / m); }

}  // namespace

double pairwise_sum(std::span<const double> v) {
  constexpr std::size_t kLeaf = 8;
  if (v.size() <= kLeaf) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

BinaryScores binarized_metrics(const PlanarImage& pred, const PlanarImage& gt,
                               double threshold) {
  require_pair(pred, gt, "binarized_metrics");
  BinaryScores s;
  const auto p = pred.plane(0);
  const auto g = gt.plane(0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const bool pp = p[i] >= threshold;
    const bool gp = g[i] >= threshold;
    if (pp && gp) ++s.tp;
    else if (pp) ++s.fp;
    else if (gp) ++s.fn;
    else ++s.tn;
  }
  const std::size_t uni = s.tp + s.fp + s.fn;
  if (uni == 0) {
    spdlog::warn("binarized_metrics: no positive pixels in either mask, IoU set to 1");
    s.miou_05 = 1.0;
  } else {
    s.miou_05 = static_cast<double>(s.tp) / static_cast<double>(uni);
  }
  s.mcr_05 = static_cast<double>(s.fp + s.fn) / static_cast<double>(p.size());
  return s;
}

ContinuousScores continuous_metrics(const PlanarImage& pred,
                                    const PlanarImage& gt) {
  require_pair(pred, gt, "continuous_metrics");
  const auto p = pred.plane(0);
  const auto g = gt.plane(0);
  std::vector<double> abs_err(p.size()), sq_err(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p[i] - g[i];
    abs_err[i] = std::abs(d);
    sq_err[i] = d * d;
  }
  const double m = static_cast<double>(p.size());
  return {std::sqrt(pairwise_sum(sq_err) / m), pairwise_sum(abs_err) / m};
}

double boundary_loss(const PlanarImage& pred, const PlanarImage& gt) {
  require_pair(pred, gt, "boundary_loss");
  const int w = pred.width();
  const int h = pred.height();
  std::vector<double> terms(pred.pixel_count());
  for (int y = 0; y < h; ++y) {
    const int yn = std::min(y + 1, h - 1);
    for (int x = 0; x < w; ++x) {
      const int xn = std::min(x + 1, w - 1);
      const double dxp = pred.at(xn, y, 0) - pred.at(x, y, 0);
      const double dyp = pred.at(x, yn, 0) - pred.at(x, y, 0);
      const double dxg = gt.at(xn, y, 0) - gt.at(x, y, 0);
      const double dyg = gt.at(x, yn, 0) - gt.at(x, y, 0);
      const double ex = dxp - dxg;
      const double ey = dyp - dyg;
      terms[static_cast<std::size_t>(y) * w + x] = ex * ex + ey * ey;
    }
  }
  return std::sqrt(pairwise_sum(terms) / static_cast<double>(terms.size()));
}

double bernoulli_jsd(double p, double q) {
  p = std::clamp(p, kJsdDelta, 1.0 - kJsdDelta);
  q = std::clamp(q, kJsdDelta, 1.0 - kJsdDelta);
  const double m = 0.5 * (p + q);
  const double kl_pm = xlogx_ratio(p, m) + xlogx_ratio(1.0 - p, 1.0 - m);
  const double kl_qm = xlogx_ratio(q, m) + xlogx_ratio(1.0 - q, 1.0 - m);
  return std::max(0.0, 0.5 * (kl_pm + kl_qm));
}

double jsd(const PlanarImage& pred, const PlanarImage& gt) {
  require_pair(pred, gt, "jsd");
  const auto p = pred.plane(0);
  const auto g = gt.plane(0);
  std::vector<double> terms(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) terms[i] = bernoulli_jsd(p[i], g[i]);
  return pairwise_sum(terms) / static_cast<double>(terms.size());
}

MetricsReport evaluate(const PlanarImage& pred, const PlanarImage& gt) {
  const auto b = binarized_metrics(pred, gt);
  const auto c = continuous_metrics(pred, gt);
  MetricsReport r;
  r.miou_05 = b.miou_05;
  r.mcr_05 = b.mcr_05;
  r.rmse = c.rmse;
  r.mae = c.mae;
  r.boundary_loss = boundary_loss(pred, gt);
  r.jsd = jsd(pred, gt);
  r.pixels = pred.pixel_count();
  return r;
}

}  // namespace skymatte
