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

#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels_impl.hpp"
#include "skymatte/errors.hpp"

namespace skymatte::kernels {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
  }
  return "unknown";
}

std::optional<Isa> parse_isa(std::string_view name) {
  if (name == "scalar") return Isa::kScalar;
  if (name == "avx2") return Isa::kAvx2;
  return std::nullopt;
}

const KernelTable* avx2_table() {
#if defined(SKYMATTE_HAVE_AVX2)
  static const bool cpu_has_avx2 = __builtin_cpu_supports("avx2");
  return cpu_has_avx2 ? &avx2_table_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

bool isa_supported(Isa isa) {
  return isa == Isa::kScalar || avx2_table() != nullptr;
}

Isa best_isa() { return avx2_table() ? Isa::kAvx2 : Isa::kScalar; }

namespace {

const KernelTable& table_for(Isa isa) {
  if (isa == Isa::kAvx2) {
    if (const KernelTable* t = avx2_table()) return *t;
    throw InvalidParameter("AVX2 kernels are not available on this machine");
  }
  return scalar_table();
}

Isa initial_isa() {
  if (const char* env = std::getenv("SKYMATTE_ISA")) {
    if (const auto isa = parse_isa(env); isa && isa_supported(*isa)) {
      return *isa;
    }
  }
  return best_isa();
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{&table_for(initial_isa())};
  return slot;
}

}  // namespace

const KernelTable& active() {
  return *active_slot().load(std::memory_order_acquire);
}

Isa active_isa() { return active().isa; }

void set_active_isa(Isa isa) {
  active_slot().store(&table_for(isa), std::memory_order_release);
}

ScopedIsa::ScopedIsa(Isa isa) : previous_(active_isa()) { set_active_isa(isa); }

ScopedIsa::~ScopedIsa() { set_active_isa(previous_); }

}  // namespace skymatte::kernels
