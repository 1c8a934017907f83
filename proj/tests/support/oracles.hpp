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

// Independent reference implementations and fixtures shared by the unit and
// acceptance tests. Nothing here calls into the library's numeric code.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "skymatte/image.hpp"

namespace skymatte::testing {

inline double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline PlanarImage random_image(int w, int h, int c, std::uint64_t seed,
                                double lo = 0.0, double hi = 1.0,
                                ColorSpace cs = ColorSpace::kGeneric) {
  std::mt19937_64 rng(seed);
  PlanarImage img(w, h, c, cs);
  for (double& v : img.data()) v = lo + (hi - lo) * unit(rng);
  return img;
}

// Gaussian elimination with partial pivoting on an n x n system.
template <std::size_t N>
std::array<double, N> gauss_solve(std::array<std::array<double, N>, N> a,
                                  std::array<double, N> b) {
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < N; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    for (std::size_t r = col + 1; r < N; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t k = col; k < N; ++k) a[r][k] -= f * a[col][k];
      b[r] -= f * b[col];
    }
  }
  std::array<double, N> x{};
  for (std::size_t i = N; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < N; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

// Unnormalized tent weight of full-resolution coordinate x for low-res
// sample j at factor s, straight from the definition.
inline double tent_weight(double x, int j, int s) {
  const double center = (j + 0.5) * s - 0.5;
  return std::max(0.0, 1.0 - std::abs(x - center) / s);
}

// Direct 2-D evaluation of the normalized tent downsample. Taps outside the
// image read the nearest edge pixel.
inline PlanarImage brute_downsample(const PlanarImage& img, int s) {
  const int lw = (img.width() + s - 1) / s;
  const int lh = (img.height() + s - 1) / s;
  PlanarImage out(lw, lh, img.channels());
  for (int c = 0; c < img.channels(); ++c) {
    for (int j = 0; j < lh; ++j) {
      for (int i = 0; i < lw; ++i) {
        double num = 0.0, den = 0.0;
        for (int y = j * s - 2 * s; y <= j * s + 3 * s; ++y) {
          const double wy = tent_weight(y, j, s);
          if (wy == 0.0) continue;
          for (int x = i * s - 2 * s; x <= i * s + 3 * s; ++x) {
            const double wx = tent_weight(x, i, s);
            if (wx == 0.0) continue;
            const int cx = std::clamp(x, 0, img.width() - 1);
            const int cy = std::clamp(y, 0, img.height() - 1);
            num += wx * wy * img.at(cx, cy, c);
            den += wx * wy;
          }
        }
        out.at(i, j, c) = num / den;
      }
    }
  }
  return out;
}

// Dense matrix (out x in) of one half-pixel tent upsample stage along an
// axis with clamp-to-edge.
inline std::vector<std::vector<double>> tent_stage_matrix(int in, int f) {
  const int out = in * f;
  std::vector<std::vector<double>> m(out, std::vector<double>(in, 0.0));
  for (int o = 0; o < out; ++o) {
    const double u = (o + 0.5) / f - 0.5;
    for (int k = -1; k <= in; ++k) {
      const double w = std::max(0.0, 1.0 - std::abs(u - k));
      if (w > 0.0) m[o][std::clamp(k, 0, in - 1)] += w;
    }
  }
  return m;
}

inline std::vector<std::vector<double>> matmul(
    const std::vector<std::vector<double>>& a,
    const std::vector<std::vector<double>>& b) {
  const std::size_t n = a.size(), k = b.size(), m = b[0].size();
  std::vector<std::vector<double>> c(n, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < k; ++t) {
      if (a[i][t] == 0.0) continue;
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][t] * b[t][j];
    }
  }
  return c;
}

// Composition of tent stages as one (in*prod(f) x in) matrix.
inline std::vector<std::vector<double>> composed_upsample_matrix(
    int in, const std::vector<int>& factors) {
  std::vector<std::vector<double>> m(in, std::vector<double>(in, 0.0));
  for (int i = 0; i < in; ++i) m[i][i] = 1.0;
  int n = in;
  for (int f : factors) {
    m = matmul(tent_stage_matrix(n, f), m);
    n *= f;
  }
  return m;
}

// Weighted least squares fit of p ~ A.I + b over the tent window of low-res
// sample (i, j), with weights tent * c and ridge diag(eps_l^2, eps_c^2,
// eps_c^2) on A, solved through the 4x4 normal equations.
inline std::array<double, 4> brute_wls(const PlanarImage& ref,
                                       const PlanarImage& p,
                                       const PlanarImage& c, int s, int i,
                                       int j, double eps_l, double eps_c) {
  std::array<std::array<double, 4>, 4> m{};
  std::array<double, 4> rhs{};
  double total = 0.0;
  for (int y = j * s - 2 * s; y <= j * s + 3 * s; ++y) {
    const double wy = tent_weight(y, j, s);
    if (wy == 0.0) continue;
    for (int x = i * s - 2 * s; x <= i * s + 3 * s; ++x) {
      const double wx = tent_weight(x, i, s);
      if (wx == 0.0) continue;
      const int cx = std::clamp(x, 0, ref.width() - 1);
      const int cy = std::clamp(y, 0, ref.height() - 1);
      const double w = wx * wy * c.at(cx, cy, 0);
      const std::array<double, 4> f = {ref.at(cx, cy, 0), ref.at(cx, cy, 1),
                                       ref.at(cx, cy, 2), 1.0};
      for (int r = 0; r < 4; ++r) {
        for (int q = 0; q < 4; ++q) m[r][q] += w * f[r] * f[q];
        rhs[r] += w * f[r] * p.at(cx, cy, 0);
      }
      total += w;
    }
  }
  for (auto& row : m) for (double& v : row) v /= total;
  for (double& v : rhs) v /= total;
  m[0][0] += eps_l * eps_l;
  m[1][1] += eps_c * eps_c;
  m[2][2] += eps_c * eps_c;
  return gauss_solve<4>(m, rhs);
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("skymatte_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::vector<char> file_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace skymatte::testing
