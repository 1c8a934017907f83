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

#include <functional>

namespace skymatte {

// Worker count used by row-parallel loops. Defaults to 1. Results never
// depend on it: every parallel loop writes disjoint outputs per index.
void set_thread_count(int n);
int thread_count();

// Calls fn(i) for every i in [begin, end), split into contiguous chunks
// across thread_count() workers. Rethrows the first exception raised.
void parallel_for(int begin, int end, const std::function<void(int)>& fn);

}  // namespace skymatte
