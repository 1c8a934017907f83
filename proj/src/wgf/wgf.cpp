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

#include "skymatte/wgf.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "skymatte/errors.hpp"
#include "skymatte/kernels.hpp"
#include "skymatte/parallel.hpp"

namespace skymatte {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since)
      .count();
}

void require_factor(int s) {
  if (s < 1) {
    throw InvalidParameter("downsampling factor must be >= 1, got " +
                           std::to_string(s));
  }
}

// Normalized tent taps of one axis, flattened: output j uses entries
// [start[j], start[j+1]).
struct AxisTaps {
  std::vector<std::size_t> start;
  std::vector<int> index;
  std::vector<double> weight;
};

AxisTaps downsample_taps(int n, int s) {
  const int m = low_res_extent(n, s);
  AxisTaps taps;
  taps.start.reserve(m + 1);
  taps.start.push_back(0);
  for (int j = 0; j < m; ++j) {
    // Work in doubled coordinates so half-integer centers stay exact.
    const long twice_center = static_cast<long>(2 * j + 1) * s - 1;
    const long lo = (twice_center - 2L * s) / 2 - 1;
    const long hi = (twice_center + 2L * s) / 2 + 1;
    double total = 0.0;
    const std::size_t first = taps.weight.size();
    for (long x = lo; x <= hi; ++x) {
      const long dist2 = std::labs(2 * x - twice_center);
      if (dist2 >= 2L * s) continue;
      const double w = 1.0 - static_cast<double>(dist2) / (2.0 * s);
      taps.index.push_back(static_cast<int>(std::clamp<long>(x, 0, n - 1)));
      taps.weight.push_back(w);
      total += w;
    }
    for (std::size_t k = first; k < taps.weight.size(); ++k) {
      taps.weight[k] /= total;
    }
    taps.start.push_back(taps.weight.size());
  }
  return taps;
}

// Fills `rows.size()` rows of length width for source row y.
using RowSource = std::function<void(int y, std::span<double* const> rows)>;

// Tent downsample of a virtual nch-channel image whose rows are produced on
// demand. Vertical pass first (row axpys), then horizontal.
PlanarImage downsample_rows(int width, int height, int s, int nch,
                            const RowSource& source) {
  const AxisTaps tx = downsample_taps(width, s);
  const AxisTaps ty = downsample_taps(height, s);
  const int out_w = low_res_extent(width, s);
  const int out_h = low_res_extent(height, s);
  PlanarImage out(out_w, out_h, nch);
  const auto& k = kernels::active();
  const auto w = static_cast<std::size_t>(width);

  parallel_for(0, out_h, [&](int j) {
    std::vector<double> acc(w * nch, 0.0);
    std::vector<double> scratch(w * nch);
    std::vector<double*> rows(nch);
    for (int c = 0; c < nch; ++c) rows[c] = scratch.data() + c * w;
    for (std::size_t t = ty.start[j]; t < ty.start[j + 1]; ++t) {
      source(ty.index[t], rows);
      for (int c = 0; c < nch; ++c) {
        k.axpy(acc.data() + c * w, rows[c], ty.weight[t], w);
      }
    }
    for (int c = 0; c < nch; ++c) {
      const double* a = acc.data() + c * w;
      auto dst = out.row(c, j);
      for (int i = 0; i < out_w; ++i) {
        double sum = 0.0;
        for (std::size_t t = tx.start[i]; t < tx.start[i + 1]; ++t) {
          sum += tx.weight[t] * a[tx.index[t]];
        }
        dst[i] = sum;
      }
    }
  });
  return out;
}

void require_positive_weights(const PlanarImage& c, std::string_view what) {
  require_channels(c, 1, what);
  for (double v : c.plane(0)) {
    if (!(v > 0.0)) {
      throw InvalidInput(std::string(what) + ": confidence " +
                         std::to_string(v) + " is not strictly positive");
    }
  }
}

// Upper-triangle channel order of outer3.
constexpr std::array<int, 6> kOuterRow = {0, 0, 0, 1, 1, 2};
constexpr std::array<int, 6> kOuterCol = {0, 1, 2, 1, 2, 2};

PlanarImage crop(const PlanarImage& img, int width, int height) {
  if (img.width() == width && img.height() == height) return img;
  PlanarImage out(width, height, img.channels(), img.colorspace());
  for (int c = 0; c < img.channels(); ++c) {
    for (int y = 0; y < height; ++y) {
      const auto src = img.row(c, y);
      std::copy_n(src.begin(), width, out.row(c, y).begin());
    }
  }
  return out;
}

}  // namespace

void GuidedFilterParams::validate() const {
  require_factor(s);
  if (!(eps_l > 0.0) || !(eps_c > 0.0)) {
    throw InvalidParameter("guided filter regularizers must be positive");
  }
}

int low_res_extent(int n, int s) {
  require_factor(s);
  return (n + s - 1) / s;
}

PlanarImage bilinear_downsample(const PlanarImage& x, int s) {
  require_factor(s);
  PlanarImage out = downsample_rows(
      x.width(), x.height(), s, x.channels(),
      [&](int y, std::span<double* const> rows) {
        for (int c = 0; c < x.channels(); ++c) {
          std::ranges::copy(x.row(c, y), rows[c]);
        }
      });
  out.set_colorspace(x.colorspace());
  return out;
}

PlanarImage weighted_downsample(const PlanarImage& x, const PlanarImage& c,
                                int s) {
  require_factor(s);
  require_same_size(x, c, "weighted_downsample");
  require_positive_weights(c, "weighted_downsample");
  const int nch = x.channels();
  const auto w = static_cast<std::size_t>(x.width());
  const auto& k = kernels::active();
  // Channels 0..nch-1 carry x * c, channel nch carries c.
  const PlanarImage sums = downsample_rows(
      x.width(), x.height(), s, nch + 1,
      [&](int y, std::span<double* const> rows) {
        const double* cw = c.row(0, y).data();
        for (int ch = 0; ch < nch; ++ch) {
          k.mul(rows[ch], x.row(ch, y).data(), cw, w);
        }
        std::copy_n(cw, w, rows[nch]);
      });
  PlanarImage out(sums.width(), sums.height(), nch, x.colorspace());
  const auto den = sums.plane(nch);
  for (int ch = 0; ch < nch; ++ch) {
    const auto num = sums.plane(ch);
    auto dst = out.plane(ch);
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = num[i] / den[i];
  }
  return out;
}

PlanarImage weighted_downsample(const PlanarImage& x, const ConfidenceMap& c,
                                int s) {
  return weighted_downsample(x, c.image(), s);
}

std::vector<int> upsample_stages(int s) {
  require_factor(s);
  std::vector<int> best;
  if (s == 1) return best;
  auto better = [](const std::vector<int>& cand, const std::vector<int>& cur) {
    if (cur.empty()) return true;
    const int cand_max = *std::ranges::max_element(cand);
    const int cur_max = *std::ranges::max_element(cur);
    if (cand_max != cur_max) return cand_max < cur_max;
    return cand.size() > cur.size();
  };
  // Non-increasing factor sequences f1 >= f2 >= f3 >= 2.
  for (int f1 = 2; f1 <= s; ++f1) {
    if (s % f1) continue;
    const int r1 = s / f1;
    if (r1 == 1) {
      if (better({f1}, best)) best = {f1};
      continue;
    }
    for (int f2 = 2; f2 <= std::min(f1, r1); ++f2) {
      if (r1 % f2) continue;
      const int r2 = r1 / f2;
      if (r2 == 1) {
        if (better({f1, f2}, best)) best = {f1, f2};
      } else if (r2 <= f2) {
        if (better({f1, f2, r2}, best)) best = {f1, f2, r2};
      }
    }
  }
  return best;
}

PlanarImage tent_upsample(const PlanarImage& x, int factor) {
  require_factor(factor);
  if (factor == 1) return x;
  const int in_w = x.width();
  const int in_h = x.height();
  const int out_w = in_w * factor;
  const int out_h = in_h * factor;

  struct Tap {
    int i0, i1;
    double w0, w1;
  };
  auto taps = [factor](int in, int out_n) {
    std::vector<Tap> t(out_n);
    for (int o = 0; o < out_n; ++o) {
      // Half-pixel centers: output o sits at input coordinate u.
      const double u = (o + 0.5) / factor - 0.5;
      const double fl = std::floor(u);
      const int i = static_cast<int>(fl);
      const double frac = u - fl;
      t[o] = {std::clamp(i, 0, in - 1), std::clamp(i + 1, 0, in - 1),
              1.0 - frac, frac};
    }
    return t;
  };
  const auto tx = taps(in_w, out_w);
  const auto ty = taps(in_h, out_h);
  const auto& k = kernels::active();

  PlanarImage out(out_w, out_h, x.channels(), x.colorspace());
  PlanarImage wide(out_w, in_h, x.channels());
  parallel_for(0, in_h, [&](int y) {
    for (int c = 0; c < x.channels(); ++c) {
      const auto src = x.row(c, y);
      auto dst = wide.row(c, y);
      for (int o = 0; o < out_w; ++o) {
        dst[o] = tx[o].w0 * src[tx[o].i0] + tx[o].w1 * src[tx[o].i1];
      }
    }
  });
  parallel_for(0, out_h, [&](int y) {
    for (int c = 0; c < x.channels(); ++c) {
      k.blend2(out.row(c, y).data(), wide.row(c, ty[y].i0).data(), ty[y].w0,
               wide.row(c, ty[y].i1).data(), ty[y].w1,
               static_cast<std::size_t>(out_w));
    }
  });
  return out;
}

PlanarImage smooth_upsample(const PlanarImage& x, int s) {
  PlanarImage out = x;
  for (int f : upsample_stages(s)) out = tent_upsample(out, f);
  return out;
}

PlanarImage solve_image_ldl3(const PlanarImage& a, const PlanarImage& b) {
  require_channels(a, 6, "solve_image_ldl3 (matrix)");
  require_channels(b, 3, "solve_image_ldl3 (rhs)");
  require_same_size(a, b, "solve_image_ldl3");
  PlanarImage x(a.width(), a.height(), 3);
  const auto& k = kernels::active();
  const int width = a.width();
  parallel_for(0, a.height(), [&](int y) {
    const double* ap[6];
    for (int c = 0; c < 6; ++c) ap[c] = a.row(c, y).data();
    const double* bp[3] = {b.row(0, y).data(), b.row(1, y).data(),
                           b.row(2, y).data()};
    double* xp[3] = {x.row(0, y).data(), x.row(1, y).data(),
                     x.row(2, y).data()};
    const auto fail = k.ldl3_solve(ap, bp, xp, static_cast<std::size_t>(width));
    if (fail.index < static_cast<std::size_t>(width)) {
      throw SingularSystem(static_cast<int>(fail.index), y, fail.pivot);
    }
  });
  return x;
}

GuidedFilterCoefficients guided_filter_coefficients(
    const PlanarImage& ref, const PlanarImage& p, const ConfidenceMap& c,
    const GuidedFilterParams& params, FilterProfile* profile) {
  params.validate();
  require_channels(ref, 3, "modified_guided_filter (reference)");
  require_mask(p, "modified_guided_filter (mask)");
  require_same_size(ref, p, "modified_guided_filter");
  require_same_size(ref, c.image(), "modified_guided_filter");

  const auto& k = kernels::active();
  const auto w = static_cast<std::size_t>(ref.width());
  const int s = params.s;
  auto t0 = Clock::now();

  // Moment channels, each multiplied by c before downsampling:
  //   0      c
  //   1..3   I
  //   4      P
  //   5..10  I (x) I   (outer3 order)
  //   11..13 I o P
  constexpr int kMoments = 14;
  const PlanarImage& conf = c.image();
  const PlanarImage sums = downsample_rows(
      ref.width(), ref.height(), s, kMoments,
      [&](int y, std::span<double* const> rows) {
        const double* cw = conf.row(0, y).data();
        const double* pr = p.row(0, y).data();
        const double* ir[3] = {ref.row(0, y).data(), ref.row(1, y).data(),
                               ref.row(2, y).data()};
        std::copy_n(cw, w, rows[0]);
        for (int ch = 0; ch < 3; ++ch) k.mul(rows[1 + ch], ir[ch], cw, w);
        k.mul(rows[4], pr, cw, w);
        for (int m = 0; m < 6; ++m) {
          k.mul(rows[5 + m], ir[kOuterRow[m]], ir[kOuterCol[m]], w);
          k.mul(rows[5 + m], rows[5 + m], cw, w);
        }
        for (int ch = 0; ch < 3; ++ch) {
          k.mul(rows[11 + ch], ir[ch], pr, w);
          k.mul(rows[11 + ch], rows[11 + ch], cw, w);
        }
      });

  const int lw = sums.width();
  const int lh = sums.height();
  const std::size_t n = sums.pixel_count();
  PlanarImage mean(lw, lh, kMoments - 1);
  {
    const auto den = sums.plane(0);
    for (int ch = 1; ch < kMoments; ++ch) {
      const auto num = sums.plane(ch);
      auto dst = mean.plane(ch - 1);
      for (std::size_t i = 0; i < n; ++i) dst[i] = num[i] / den[i];
    }
  }
  // mean channels: 0..2 I, 3 P, 4..9 I(x)I, 10..12 I o P
  const std::array<std::span<const double>, 3> im = {
      mean.plane(0), mean.plane(1), mean.plane(2)};
  const auto pm = mean.plane(3);
  if (profile) profile->downsample_ms = elapsed_ms(t0);
  t0 = Clock::now();

  PlanarImage sigma(lw, lh, 6);
  PlanarImage cov(lw, lh, 3);
  const double reg[6] = {params.eps_l * params.eps_l, 0.0, 0.0,
                         params.eps_c * params.eps_c, 0.0,
                         params.eps_c * params.eps_c};
  for (int m = 0; m < 6; ++m) {
    const auto ii = mean.plane(4 + m);
    const auto& ia = im[kOuterRow[m]];
    const auto& ib = im[kOuterCol[m]];
    auto dst = sigma.plane(m);
    for (std::size_t i = 0; i < n; ++i) {
      dst[i] = ii[i] - ia[i] * ib[i] + reg[m];
    }
  }
  for (int ch = 0; ch < 3; ++ch) {
    const auto ip = mean.plane(10 + ch);
    auto dst = cov.plane(ch);
    for (std::size_t i = 0; i < n; ++i) dst[i] = ip[i] - im[ch][i] * pm[i];
  }

  GuidedFilterCoefficients coeffs{solve_image_ldl3(sigma, cov),
                                  PlanarImage(lw, lh, 1)};
  auto bdst = coeffs.b.plane(0);
  const auto a0 = coeffs.a.plane(0), a1 = coeffs.a.plane(1),
             a2 = coeffs.a.plane(2);
  for (std::size_t i = 0; i < n; ++i) {
    bdst[i] = pm[i] - (a0[i] * im[0][i] + a1[i] * im[1][i] + a2[i] * im[2][i]);
  }
  if (profile) {
    profile->solve_ms = elapsed_ms(t0);
    profile->solves = n;
    profile->low_width = lw;
    profile->low_height = lh;
  }
  return coeffs;
}

PlanarImage modified_guided_filter(const PlanarImage& ref, const PlanarImage& p,
                                   const ConfidenceMap& c,
                                   const GuidedFilterParams& params,
                                   FilterProfile* profile) {
  params.validate();
  require_channels(ref, 3, "modified_guided_filter (reference)");
  require_channels(p, 1, "modified_guided_filter (mask)");
  require_same_size(p, c.image(), "modified_guided_filter (mask vs confidence)");

  auto t0 = Clock::now();
  const PlanarImage* mask = &p;
  const ConfidenceMap* conf = &c;
  PlanarImage mask_resized;
  std::optional<ConfidenceMap> conf_resized;
  if (!p.same_size(ref)) {
    mask_resized = to_mask(resize_bilinear(p, ref.width(), ref.height()));
    conf_resized.emplace(
        resize_bilinear(c.image(), ref.width(), ref.height()));
    mask = &mask_resized;
    conf = &*conf_resized;
  }
  if (profile) profile->resize_ms = elapsed_ms(t0);

  const GuidedFilterCoefficients coeffs =
      guided_filter_coefficients(ref, *mask, *conf, params, profile);

  t0 = Clock::now();
  const PlanarImage a =
      crop(smooth_upsample(coeffs.a, params.s), ref.width(), ref.height());
  const PlanarImage b =
      crop(smooth_upsample(coeffs.b, params.s), ref.width(), ref.height());
  if (profile) profile->upsample_ms = elapsed_ms(t0);

  t0 = Clock::now();
  PlanarImage out(ref.width(), ref.height(), 1, ColorSpace::kMask);
  const auto& k = kernels::active();
  parallel_for(0, ref.height(), [&](int y) {
    k.affine3_clamped(out.row(0, y).data(), a.row(0, y).data(),
                      a.row(1, y).data(), a.row(2, y).data(),
                      b.row(0, y).data(), ref.row(0, y).data(),
                      ref.row(1, y).data(), ref.row(2, y).data(),
                      static_cast<std::size_t>(ref.width()));
  });
  if (profile) profile->apply_ms = elapsed_ms(t0);
  return out;
}

}  // namespace skymatte
