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

#include <cmath>

#include "kernels_impl.hpp"

namespace skymatte::kernels {
namespace {

void axpy_scalar(double* y, const double* x, double w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += w * x[i];
}

void mul_scalar(double* out, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void blend2_scalar(double* out, const double* a, double wa, const double* b,
                   double wb, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = wa * a[i] + wb * b[i];
}

void lerp_scalar(double* out, const double* a, const double* b,
                 const double* t, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + t[i] * (b[i] - a[i]);
}

void affine3_clamped_scalar(double* out, const double* a0, const double* a1,
                            const double* a2, const double* bias,
                            const double* i0, const double* i1,
                            const double* i2, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double y = a0[i] * i0[i] + a1[i] * i1[i] + a2[i] * i2[i] + bias[i];
    // Same select semantics as maxpd/minpd, so NaN maps to 0.
    const double lo = y > 0.0 ? y : 0.0;
    out[i] = lo < 1.0 ? lo : 1.0;
  }
}

void bias_curve_scalar(double* out, const double* x, double k, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = x[i] / (k * (1.0 - x[i]) + 1.0);
  }
}

}  // namespace

int ldl3_solve_one(const double a[6], const double b[3], double x[3]) {
  const double d1 = a[0];
  if (!(d1 > 0.0)) return 1;
  const double l12 = a[1] / d1;
  const double d2 = a[3] - l12 * a[1];
  if (!(d2 > 0.0)) return 2;
  const double l13 = a[2] / d1;
  const double l23 = (a[4] - l13 * a[1]) / d2;
  const double d3 = a[5] - l13 * a[2] - l23 * l23 * d2;
  if (!(d3 > 0.0)) return 3;
  const double y1 = b[0];
  const double y2 = b[1] - l12 * y1;
  const double y3 = b[2] - l13 * y1 - l23 * y2;
  x[2] = y3 / d3;
  x[1] = y2 / d2 - l23 * x[2];
  x[0] = y1 / d1 - l12 * x[1] - l13 * x[2];
  return 0;
}

namespace {

Ldl3Failure ldl3_solve_scalar(const double* const a[6],
                              const double* const b[3], double* const x[3],
                              std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ai[6] = {a[0][i], a[1][i], a[2][i], a[3][i], a[4][i], a[5][i]};
    const double bi[3] = {b[0][i], b[1][i], b[2][i]};
    double xi[3];
    if (const int pivot = ldl3_solve_one(ai, bi, xi); pivot != 0) {
      return {i, pivot};
    }
    x[0][i] = xi[0];
    x[1][i] = xi[1];
    x[2][i] = xi[2];
  }
  return {n, 0};
}

double gaussian_sum_scalar(const double* sr, const double* sg, const double* sb,
                           std::size_t n, double r, double g, double b,
                           double neg_inv_two_var) {
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double dr = r - sr[j];
    const double dg = g - sg[j];
    const double db = b - sb[j];
    sum += std::exp(neg_inv_two_var * (dr * dr + dg * dg + db * db));
  }
  return sum;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{
      Isa::kScalar,         axpy_scalar,       mul_scalar,
      blend2_scalar,        lerp_scalar,       affine3_clamped_scalar,
      bias_curve_scalar,    ldl3_solve_scalar, gaussian_sum_scalar,
  };
  return table;
}

}  // namespace skymatte::kernels
