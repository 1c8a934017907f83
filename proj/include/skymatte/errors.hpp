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

#include <stdexcept>
#include <string>

namespace skymatte {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape, channel-count, colorspace or value-domain violations of an input.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A scalar hyperparameter outside its documented domain.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

// A per-pixel 3x3 system whose LDL pivot is not strictly positive.
class SingularSystem : public Error {
 public:
  SingularSystem(int x, int y, int pivot)
      : Error("singular system at pixel (" + std::to_string(x) + ", " +
              std::to_string(y) + "): pivot d" + std::to_string(pivot) +
              " <= 0"),
        x_(x), y_(y), pivot_(pivot) {}

  int x() const { return x_; }
  int y() const { return y_; }
  int pivot() const { return pivot_; }

 private:
  int x_;
  int y_;
  int pivot_;
};

// Density estimation requested with no annotated sky pixels.
class EmptyReference : public Error {
 public:
  using Error::Error;
};

// Malformed configuration, manifest, preset or LUT.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace skymatte
