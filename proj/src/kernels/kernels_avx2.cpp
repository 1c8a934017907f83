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

// Compiled with -mavx2 only. FMA is deliberately not enabled so that products
// and sums round exactly as in the scalar reference.

#include <immintrin.h>

#include <cmath>

#include "kernels_impl.hpp"

namespace skymatte::kernels {
namespace {

constexpr std::size_t kLanes = 4;

void axpy_avx2(double* y, const double* x, double w, std::size_t n) {
  const __m256d vw = _mm256_set1_pd(w);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d prod = _mm256_mul_pd(vw, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] += w * x[i];
}

void mul_avx2(double* out, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                            _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void blend2_avx2(double* out, const double* a, double wa, const double* b,
                 double wb, std::size_t n) {
  const __m256d va = _mm256_set1_pd(wa);
  const __m256d vb = _mm256_set1_pd(wb);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d pa = _mm256_mul_pd(va, _mm256_loadu_pd(a + i));
    const __m256d pb = _mm256_mul_pd(vb, _mm256_loadu_pd(b + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(pa, pb));
  }
  for (; i < n; ++i) out[i] = wa * a[i] + wb * b[i];
}

void lerp_avx2(double* out, const double* a, const double* b, const double* t,
               std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d va = _mm256_loadu_pd(a + i);
    const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(b + i), va);
    _mm256_storeu_pd(
        out + i, _mm256_add_pd(va, _mm256_mul_pd(_mm256_loadu_pd(t + i), diff)));
  }
  for (; i < n; ++i) out[i] = a[i] + t[i] * (b[i] - a[i]);
}

void affine3_clamped_avx2(double* out, const double* a0, const double* a1,
                          const double* a2, const double* bias,
                          const double* i0, const double* i1, const double* i2,
                          std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256d y = _mm256_mul_pd(_mm256_loadu_pd(a0 + i), _mm256_loadu_pd(i0 + i));
    y = _mm256_add_pd(
        y, _mm256_mul_pd(_mm256_loadu_pd(a1 + i), _mm256_loadu_pd(i1 + i)));
    y = _mm256_add_pd(
        y, _mm256_mul_pd(_mm256_loadu_pd(a2 + i), _mm256_loadu_pd(i2 + i)));
    y = _mm256_add_pd(y, _mm256_loadu_pd(bias + i));
    _mm256_storeu_pd(out + i, _mm256_min_pd(_mm256_max_pd(y, zero), one));
  }
  for (; i < n; ++i) {
    const double y = a0[i] * i0[i] + a1[i] * i1[i] + a2[i] * i2[i] + bias[i];
    const double lo = y > 0.0 ? y : 0.0;
    out[i] = lo < 1.0 ? lo : 1.0;
  }
}

void bias_curve_avx2(double* out, const double* x, double k, std::size_t n) {
  const __m256d vk = _mm256_set1_pd(k);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d den =
        _mm256_add_pd(_mm256_mul_pd(vk, _mm256_sub_pd(one, vx)), one);
    _mm256_storeu_pd(out + i, _mm256_div_pd(vx, den));
  }
  for (; i < n; ++i) out[i] = x[i] / (k * (1.0 - x[i]) + 1.0);
}

Ldl3Failure ldl3_solve_avx2(const double* const a[6], const double* const b[3],
                            double* const x[3], std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d a11 = _mm256_loadu_pd(a[0] + i);
    const __m256d a12 = _mm256_loadu_pd(a[1] + i);
    const __m256d a13 = _mm256_loadu_pd(a[2] + i);
    const __m256d a22 = _mm256_loadu_pd(a[3] + i);
    const __m256d a23 = _mm256_loadu_pd(a[4] + i);
    const __m256d a33 = _mm256_loadu_pd(a[5] + i);

    const __m256d d1 = a11;
    const __m256d l12 = _mm256_div_pd(a12, d1);
    const __m256d d2 = _mm256_sub_pd(a22, _mm256_mul_pd(l12, a12));
    const __m256d l13 = _mm256_div_pd(a13, d1);
    const __m256d l23 =
        _mm256_div_pd(_mm256_sub_pd(a23, _mm256_mul_pd(l13, a12)), d2);
    const __m256d d3 = _mm256_sub_pd(
        _mm256_sub_pd(a33, _mm256_mul_pd(l13, a13)),
        _mm256_mul_pd(_mm256_mul_pd(l23, l23), d2));

    // _CMP_GT_OQ is false for NaN, matching !(d > 0) in the scalar path.
    const __m256d ok = _mm256_and_pd(
        _mm256_and_pd(_mm256_cmp_pd(d1, zero, _CMP_GT_OQ),
                      _mm256_cmp_pd(d2, zero, _CMP_GT_OQ)),
        _mm256_cmp_pd(d3, zero, _CMP_GT_OQ));
    if (_mm256_movemask_pd(ok) != 0xF) {
      // Let the scalar path locate the failing element and pivot.
      for (std::size_t j = i; j < n; ++j) {
        const double aj[6] = {a[0][j], a[1][j], a[2][j],
                              a[3][j], a[4][j], a[5][j]};
        const double bj[3] = {b[0][j], b[1][j], b[2][j]};
        double xj[3];
        if (const int pivot = ldl3_solve_one(aj, bj, xj); pivot != 0) {
          return {j, pivot};
        }
        x[0][j] = xj[0];
        x[1][j] = xj[1];
        x[2][j] = xj[2];
      }
      return {n, 0};
    }

    const __m256d y1 = _mm256_loadu_pd(b[0] + i);
    const __m256d y2 =
        _mm256_sub_pd(_mm256_loadu_pd(b[1] + i), _mm256_mul_pd(l12, y1));
    const __m256d y3 = _mm256_sub_pd(
        _mm256_sub_pd(_mm256_loadu_pd(b[2] + i), _mm256_mul_pd(l13, y1)),
        _mm256_mul_pd(l23, y2));
    const __m256d x3 = _mm256_div_pd(y3, d3);
    const __m256d x2 = _mm256_sub_pd(_mm256_div_pd(y2, d2), _mm256_mul_pd(l23, x3));
    const __m256d x1 = _mm256_sub_pd(
        _mm256_sub_pd(_mm256_div_pd(y1, d1), _mm256_mul_pd(l12, x2)),
        _mm256_mul_pd(l13, x3));
    _mm256_storeu_pd(x[0] + i, x1);
    _mm256_storeu_pd(x[1] + i, x2);
    _mm256_storeu_pd(x[2] + i, x3);
  }
  for (; i < n; ++i) {
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

// exp() for x <= 0 after Cephes: x = n*ln2 + r, exp(r) by a Pade form,
// scaled by 2^n assembled in the exponent bits. Results below 2^-1022 flush
// to zero.
__m256d exp_nonpositive(__m256d x) {
  const __m256d lo = _mm256_set1_pd(-708.0);
  const __m256d underflow = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
  x = _mm256_max_pd(x, lo);

  const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  x = _mm256_sub_pd(x, _mm256_mul_pd(n, _mm256_set1_pd(6.93145751953125E-1)));
  x = _mm256_sub_pd(x, _mm256_mul_pd(n, _mm256_set1_pd(1.42860682030941723212E-6)));

  const __m256d xx = _mm256_mul_pd(x, x);
  __m256d p = _mm256_set1_pd(1.26177193074810590878E-4);
  p = _mm256_add_pd(_mm256_mul_pd(p, xx), _mm256_set1_pd(3.02994407707441961300E-2));
  p = _mm256_add_pd(_mm256_mul_pd(p, xx), _mm256_set1_pd(9.99999999999999999910E-1));
  const __m256d px = _mm256_mul_pd(p, x);
  __m256d q = _mm256_set1_pd(3.00198505138664455042E-6);
  q = _mm256_add_pd(_mm256_mul_pd(q, xx), _mm256_set1_pd(2.52448340349684104192E-3));
  q = _mm256_add_pd(_mm256_mul_pd(q, xx), _mm256_set1_pd(2.27265548208155028766E-1));
  q = _mm256_add_pd(_mm256_mul_pd(q, xx), _mm256_set1_pd(2.00000000000000000009E0));
  __m256d e = _mm256_div_pd(px, _mm256_sub_pd(q, px));
  e = _mm256_add_pd(_mm256_set1_pd(1.0), _mm256_add_pd(e, e));

  // n + 1023 lands in the low mantissa bits after adding 2^52.
  const __m256d biased =
      _mm256_add_pd(n, _mm256_set1_pd(1023.0 + 4503599627370496.0));
  const __m256i bits = _mm256_slli_epi64(_mm256_castpd_si256(biased), 52);
  e = _mm256_mul_pd(e, _mm256_castsi256_pd(bits));
  return _mm256_andnot_pd(underflow, e);
}

double gaussian_sum_avx2(const double* sr, const double* sg, const double* sb,
                         std::size_t n, double r, double g, double b,
                         double neg_inv_two_var) {
  const __m256d vr = _mm256_set1_pd(r);
  const __m256d vg = _mm256_set1_pd(g);
  const __m256d vb = _mm256_set1_pd(b);
  const __m256d scale = _mm256_set1_pd(neg_inv_two_var);
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + kLanes <= n; j += kLanes) {
    const __m256d dr = _mm256_sub_pd(vr, _mm256_loadu_pd(sr + j));
    const __m256d dg = _mm256_sub_pd(vg, _mm256_loadu_pd(sg + j));
    const __m256d db = _mm256_sub_pd(vb, _mm256_loadu_pd(sb + j));
    __m256d d2 = _mm256_mul_pd(dr, dr);
    d2 = _mm256_add_pd(d2, _mm256_mul_pd(dg, dg));
    d2 = _mm256_add_pd(d2, _mm256_mul_pd(db, db));
    acc = _mm256_add_pd(acc, exp_nonpositive(_mm256_mul_pd(scale, d2)));
  }
  alignas(32) double lanes[kLanes];
  _mm256_store_pd(lanes, acc);
  double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; j < n; ++j) {
    const double dr = r - sr[j];
    const double dg = g - sg[j];
    const double db = b - sb[j];
    sum += std::exp(neg_inv_two_var * (dr * dr + dg * dg + db * db));
  }
  return sum;
}

}  // namespace

const KernelTable& avx2_table_unchecked() {
  static const KernelTable table{
      Isa::kAvx2,         axpy_avx2,       mul_avx2,
      blend2_avx2,        lerp_avx2,       affine3_clamped_avx2,
      bias_curve_avx2,    ldl3_solve_avx2, gaussian_sum_avx2,
  };
  return table;
}

}  // namespace skymatte::kernels
