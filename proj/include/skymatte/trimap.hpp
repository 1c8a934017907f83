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
#include <cstdint>
#include <vector>

#include "skymatte/image.hpp"

namespace skymatte {

// Label values double as the serialized gray/palette values.
enum class Label : std::uint8_t {
  kNotSky = 0,
  kUndetermined = 128,
  kSky = 255,
};

class Trimap {
 public:
  Trimap() = default;
  Trimap(int width, int height, Label fill = Label::kUndetermined);

  // SKY where the mask is set, NOT_SKY elsewhere.
  static Trimap from_mask(const BinaryMask& mask);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return labels_.size(); }

  Label at(int x, int y) const { return labels_[index(x, y)]; }
  void set(int x, int y, Label l) { labels_[index(x, y)] = l; }
  Label operator[](std::size_t i) const { return labels_[i]; }
  Label& operator[](std::size_t i) { return labels_[i]; }

  std::size_t count(Label l) const;
  // 1 where SKY.
  BinaryMask sky() const;

  bool operator==(const Trimap&) const = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<Label> labels_;
};

}  // namespace skymatte
