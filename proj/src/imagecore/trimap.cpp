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

#include "skymatte/trimap.hpp"

#include <algorithm>

#include "skymatte/errors.hpp"

namespace skymatte {

Trimap::Trimap(int width, int height, Label fill)
    : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw InvalidInput("trimap dimensions must be positive");
  }
  labels_.assign(static_cast<std::size_t>(width) * height, fill);
}

Trimap Trimap::from_mask(const BinaryMask& mask) {
  Trimap t(mask.width, mask.height, Label::kNotSky);
  for (std::size_t i = 0; i < mask.bits.size(); ++i) {
    if (mask.bits[i]) t.labels_[i] = Label::kSky;
  }
  return t;
}

std::size_t Trimap::count(Label l) const {
  return static_cast<std::size_t>(std::ranges::count(labels_, l));
}

BinaryMask Trimap::sky() const {
  BinaryMask m(width_, height_);
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    m.bits[i] = labels_[i] == Label::kSky;
  }
  return m;
}

}  // namespace skymatte
