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
#include <span>

#include "skymatte/image.hpp"

namespace skymatte {

struct BinaryScores {
  double miou_05 = 0.0;
  double mcr_05 = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
};

struct ContinuousScores {
  double rmse = 0.0;
  double mae = 0.0;
};

struct MetricsReport {
  double miou_05 = 0.0;
  double mcr_05 = 0.0;
  double rmse = 0.0;
  double mae = 0.0;
  double boundary_loss = 0.0;
  double jsd = 0.0;
  std::size_t pixels = 0;
};

// Clamp applied to Bernoulli parameters before taking logs.
inline constexpr double kJsdDelta = 1e-6;

// Sums in a fixed pairwise tree, so the result depends only on the order of
// `v`, never on how the work was scheduled.
double pairwise_sum(std::span<const double> v);

// Values >= threshold are positive. With no positives in either mask the
// IoU is reported as 1 and a warning is logged.
BinaryScores binarized_metrics(const PlanarImage& pred, const PlanarImage& gt,
                               double threshold = 0.5);
ContinuousScores continuous_metrics(const PlanarImage& pred,
                                    const PlanarImage& gt);
// RMS difference of forward-difference gradients (dx, dy), with the last
// row/column difference taken as zero.
double boundary_loss(const PlanarImage& pred, const PlanarImage& gt);
// Mean per-pixel Jensen-Shannon divergence of Bernoulli(pred) and
// Bernoulli(gt), natural log.
double jsd(const PlanarImage& pred, const PlanarImage& gt);
double bernoulli_jsd(double p, double q);

MetricsReport evaluate(const PlanarImage& pred, const PlanarImage& gt);

}  // namespace skymatte
