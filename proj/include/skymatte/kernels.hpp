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

// Data-parallel inner loops. Every kernel has a portable scalar reference and,
// on x86-64, an AVX2 variant; the variant in use is chosen at runtime.
//
// The arithmetic kernels (everything except gaussian_sum) evaluate the same
// IEEE operations in the same order in both variants and therefore agree
// bit for bit. gaussian_sum uses a vectorized exp and lane-parallel partial
// sums, so its variants agree to a relative 1e-12.

#include <cstddef>
#include <optional>
#include <string_view>

namespace skymatte::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view to_string(Isa isa);
std::optional<Isa> parse_isa(std::string_view name);

struct Ldl3Failure {
  std::size_t index;  // first offending element, or n when all pivots > 0
  int pivot;          // 1, 2 or 3
};

struct KernelTable {
  Isa isa;

  // y[i] += w * x[i]
  void (*axpy)(double* y, const double* x, double w, std::size_t n);

  // out[i] = a[i] * b[i]
  void (*mul)(double* out, const double* a, const double* b, std::size_t n);

  // out[i] = wa * a[i] + wb * b[i]
  void (*blend2)(double* out, const double* a, double wa, const double* b,
                 double wb, std::size_t n);

  // out[i] = a[i] + t[i] * (b[i] - a[i])
  void (*lerp)(double* out, const double* a, const double* b, const double* t,
               std::size_t n);

  // out[i] = clamp(a0*i0 + a1*i1 + a2*i2 + bias, 0, 1)
  void (*affine3_clamped)(double* out, const double* a0, const double* a1,
                          const double* a2, const double* bias,
                          const double* i0, const double* i1, const double* i2,
                          std::size_t n);

  // out[i] = x / (k * (1 - x) + 1), the bias curve with k = 1/b - 2.
  void (*bias_curve)(double* out, const double* x, double k, std::size_t n);

  // Per-element LDL solve of a symmetric 3x3 system stored as its upper
  // triangle a[0..5] = (11,12,13,22,23,33) against b[0..2]. Solutions are
  // written to x[0..2]. Stops at the first element with a pivot <= 0 and
  // reports it; elements before it are solved.
  Ldl3Failure (*ldl3_solve)(const double* const a[6], const double* const b[3],
                            double* const x[3], std::size_t n);

  // sum_j exp(neg_inv_two_var * |(r,g,b) - (sr[j],sg[j],sb[j])|^2)
  double (*gaussian_sum)(const double* sr, const double* sg, const double* sb,
                         std::size_t n, double r, double g, double b,
                         double neg_inv_two_var);
};

const KernelTable& scalar_table();
// nullptr when the binary or the CPU lacks AVX2.
const KernelTable* avx2_table();

bool isa_supported(Isa isa);
Isa best_isa();

// The table used by the library. Defaults to best_isa(); the environment
// variable SKYMATTE_ISA=scalar|avx2 overrides the default.
const KernelTable& active();
Isa active_isa();
// Throws InvalidParameter if the ISA is unavailable on this machine.
void set_active_isa(Isa isa);

// RAII override used by tests and the benchmark harness.
class ScopedIsa {
 public:
  explicit ScopedIsa(Isa isa);
  ~ScopedIsa();
  ScopedIsa(const ScopedIsa&) = delete;
  ScopedIsa& operator=(const ScopedIsa&) = delete;

 private:
  Isa previous_;
};

}  // namespace skymatte::kernels
