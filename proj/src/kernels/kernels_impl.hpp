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

#include "skymatte/kernels.hpp"

namespace skymatte::kernels {

// Solves one system; returns 0 on success or the index of the failing pivot.
int ldl3_solve_one(const double a[6], const double b[3], double x[3]);

#if defined(SKYMATTE_HAVE_AVX2)
const KernelTable& avx2_table_unchecked();
#endif

}  // namespace skymatte::kernels
