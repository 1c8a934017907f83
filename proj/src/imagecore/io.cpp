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

#include "skymatte/io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "skymatte/color.hpp"
#include "skymatte/errors.hpp"

namespace skymatte {
namespace {

namespace fs = std::filesystem;

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const fs::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw IoError("cannot open " + path.string());
  return f;
}

std::string lower_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::ranges::transform(ext, ext.begin(),
                         [](unsigned char c) { return std::tolower(c); });
  return ext;
}

// Decoded PNG samples, 8 or 16 bits, interleaved. Filled by decode_png,
// which owns the setjmp frame and holds no objects with destructors.
struct DecodedPng {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int channels = 0;
  int bit_depth = 0;
  bool palette_indices = false;
  std::vector<png_byte> pixels;
  std::vector<png_bytep> rows;
  char error[256] = {};
};

void on_png_error(png_structp png, png_const_charp msg) {
  auto* out = static_cast<DecodedPng*>(png_get_error_ptr(png));
  std::snprintf(out->error, sizeof(out->error), "%s", msg);
  png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

// keep_indices: leave 8-bit palette images as raw indices.
bool decode_png(std::FILE* fp, DecodedPng& out, bool keep_indices) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &out,
                                           on_png_error, on_png_warning);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    return false;
  }
  png_init_io(png, fp);
  png_read_info(png, info);
  const int color_type = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);

  if (color_type == PNG_COLOR_TYPE_PALETTE) {
    if (keep_indices) {
      if (depth < 8) png_set_packing(png);
      out.palette_indices = true;
    } else {
      png_set_palette_to_rgb(png);
    }
  }
  if (color_type == PNG_COLOR_TYPE_GRAY && depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);

  out.width = png_get_image_width(png, info);
  out.height = png_get_image_height(png, info);
  out.channels = png_get_channels(png, info);
  out.bit_depth = png_get_bit_depth(png, info);
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  out.pixels.resize(rowbytes * out.height);
  out.rows.resize(out.height);
  for (png_uint_32 y = 0; y < out.height; ++y) {
    out.rows[y] = out.pixels.data() + y * rowbytes;
  }
  png_read_image(png, out.rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

DecodedPng load_png(const fs::path& path, bool keep_indices) {
  FilePtr fp = open_file(path, "rb");
  png_byte sig[8];
  if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw IoError(path.string() + " is not a PNG file");
  }
  DecodedPng out;
  std::rewind(fp.get());
  if (!decode_png(fp.get(), out, keep_indices)) {
    throw IoError("cannot decode " + path.string() + ": " + out.error);
  }
  return out;
}

struct EncodedPng {
  char error[256] = {};
};

void on_png_write_error(png_structp png, png_const_charp msg) {
  auto* out = static_cast<EncodedPng*>(png_get_error_ptr(png));
  std::snprintf(out->error, sizeof(out->error), "%s", msg);
  png_longjmp(png, 1);
}

// rows must stay alive for the call; palette may be null.
bool encode_png(std::FILE* fp, EncodedPng& state, png_uint_32 width,
                png_uint_32 height, int color_type, int bit_depth,
                png_bytep* rows, const png_color* palette, int palette_size) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &state,
                                            on_png_write_error, on_png_warning);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, info ? &info : nullptr);
    return false;
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, width, height, bit_depth, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  if (palette) png_set_PLTE(png, info, palette, palette_size);
  png_write_info(png, info);
  png_write_image(png, rows);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

void save_png(const fs::path& path, png_uint_32 width, png_uint_32 height,
              int color_type, int bit_depth, std::vector<png_byte>& pixels,
              std::size_t rowbytes, const png_color* palette = nullptr,
              int palette_size = 0) {
  std::vector<png_bytep> rows(height);
  for (png_uint_32 y = 0; y < height; ++y) {
    rows[y] = pixels.data() + y * rowbytes;
  }
  FilePtr fp = open_file(path, "wb");
  EncodedPng state;
  if (!encode_png(fp.get(), state, width, height, color_type, bit_depth,
                  rows.data(), palette, palette_size)) {
    throw IoError("cannot encode " + path.string() + ": " + state.error);
  }
}

ColorSpace tag_for(const PlanarImage& img) {
  if (img.channels() == 3) return ColorSpace::kRgb;
  if (img.channels() == 1) {
    const auto p = img.plane(0);
    const bool unit =
        std::ranges::all_of(p, [](double v) { return v >= 0.0 && v <= 1.0; });
    return unit ? ColorSpace::kMask : ColorSpace::kGeneric;
  }
  return ColorSpace::kGeneric;
}

void write_le_float(std::ostream& os, float v) {
  auto bits = std::bit_cast<std::uint32_t>(v);
  char bytes[4];
  for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
  os.write(bytes, 4);
}

}  // namespace

PlanarImage read_png(const fs::path& path, ImageReadOptions opts) {
  const DecodedPng d = load_png(path, false);
  if (d.channels != 1 && d.channels != 3) {
    throw IoError(path.string() + ": unsupported channel count " +
                  std::to_string(d.channels));
  }
  PlanarImage img(static_cast<int>(d.width), static_cast<int>(d.height),
                  d.channels);
  const double maxval = d.bit_depth == 16 ? 65535.0 : 255.0;
  for (png_uint_32 y = 0; y < d.height; ++y) {
    const png_byte* row = d.rows[y];
    for (png_uint_32 x = 0; x < d.width; ++x) {
      for (int c = 0; c < d.channels; ++c) {
        const std::size_t s = static_cast<std::size_t>(x) * d.channels + c;
        const unsigned v = d.bit_depth == 16
                               ? (unsigned{row[2 * s]} << 8) | row[2 * s + 1]
                               : row[s];
        double value = v / maxval;
        if (opts.srgb_to_linear) value = srgb_to_linear(value);
        img.at(static_cast<int>(x), static_cast<int>(y), c) = value;
      }
    }
  }
  img.set_colorspace(tag_for(img));
  return img;
}

void write_png(const fs::path& path, const PlanarImage& img,
               ImageWriteOptions opts) {
  if (img.channels() != 1 && img.channels() != 3) {
    throw InvalidInput("write_png: only 1- or 3-channel images are supported");
  }
  if (opts.png_bit_depth != 8 && opts.png_bit_depth != 16) {
    throw InvalidParameter("PNG bit depth must be 8 or 16");
  }
  const int bytes = opts.png_bit_depth / 8;
  const double maxval = bytes == 2 ? 65535.0 : 255.0;
  const std::size_t rowbytes =
      static_cast<std::size_t>(img.width()) * img.channels() * bytes;
  std::vector<png_byte> pixels(rowbytes * img.height());
  for (int y = 0; y < img.height(); ++y) {
    png_byte* row = pixels.data() + y * rowbytes;
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < img.channels(); ++c) {
        double v = img.at(x, y, c);
        v = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
        if (opts.linear_to_srgb) v = linear_to_srgb(v);
        const auto q = static_cast<unsigned>(std::lround(v * maxval));
        const std::size_t s = static_cast<std::size_t>(x) * img.channels() + c;
        if (bytes == 2) {
          row[2 * s] = static_cast<png_byte>(q >> 8);
          row[2 * s + 1] = static_cast<png_byte>(q & 0xFF);
        } else {
          row[s] = static_cast<png_byte>(q);
        }
      }
    }
  }
  save_png(path, static_cast<png_uint_32>(img.width()),
           static_cast<png_uint_32>(img.height()),
           img.channels() == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
           opts.png_bit_depth, pixels, rowbytes);
}

PlanarImage read_pfm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string magic;
  int width = 0, height = 0;
  double scale = 0.0;
  in >> magic >> width >> height >> scale;
  in.get();  // single whitespace byte before the raster
  if (!in || (magic != "Pf" && magic != "PF") || width < 1 || height < 1 ||
      scale == 0.0) {
    throw IoError(path.string() + ": malformed PFM header");
  }
  const int channels = magic == "PF" ? 3 : 1;
  const bool little = scale < 0.0;
  const std::size_t count =
      static_cast<std::size_t>(width) * height * channels;
  std::vector<unsigned char> raw(count * 4);
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
    throw IoError(path.string() + ": truncated PFM raster");
  }
  PlanarImage img(width, height, channels);
  std::size_t k = 0;
  for (int row = 0; row < height; ++row) {
    const int y = height - 1 - row;
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < channels; ++c, k += 4) {
        std::uint32_t bits = 0;
        for (int b = 0; b < 4; ++b) {
          const int shift = little ? 8 * b : 8 * (3 - b);
          bits |= std::uint32_t{raw[k + b]} << shift;
        }
        img.at(x, y, c) = std::bit_cast<float>(bits);
      }
    }
  }
  img.set_colorspace(tag_for(img));
  return img;
}

void write_pfm(const fs::path& path, const PlanarImage& img) {
  if (img.channels() != 1 && img.channels() != 3) {
    throw InvalidInput("write_pfm: only 1- or 3-channel images are supported");
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << (img.channels() == 3 ? "PF" : "Pf") << '\n'
     << img.width() << ' ' << img.height() << '\n'
     << "-1.0\n";
  for (int row = 0; row < img.height(); ++row) {
    const int y = img.height() - 1 - row;
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < img.channels(); ++c) {
        write_le_float(os, static_cast<float>(img.at(x, y, c)));
      }
    }
  }
  if (!os) throw IoError("failed writing " + path.string());
}

PlanarImage read_image(const fs::path& path, ImageReadOptions opts) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") return read_png(path, opts);
  if (ext == ".pfm") return read_pfm(path);
  throw IoError(path.string() + ": unsupported image extension '" + ext + "'");
}

void write_image(const fs::path& path, const PlanarImage& img,
                 ImageWriteOptions opts) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") return write_png(path, img, opts);
  if (ext == ".pfm") return write_pfm(path, img);
  throw IoError(path.string() + ": unsupported image extension '" + ext + "'");
}

Trimap read_trimap(const fs::path& path) {
  const DecodedPng d = load_png(path, true);
  if (d.channels != 1 || d.bit_depth != 8) {
    throw InvalidInput(path.string() +
                       ": trimaps must be 8-bit palette or gray PNGs");
  }
  Trimap t(static_cast<int>(d.width), static_cast<int>(d.height));
  for (png_uint_32 y = 0; y < d.height; ++y) {
    for (png_uint_32 x = 0; x < d.width; ++x) {
      const png_byte v = d.rows[y][x];
      if (v != 0 && v != 128 && v != 255) {
        throw InvalidInput(path.string() + ": value " + std::to_string(v) +
                      " at (" + std::to_string(x) + ", " + std::to_string(y) +
                      ") is not a trimap label");
      }
      t.set(static_cast<int>(x), static_cast<int>(y), static_cast<Label>(v));
    }
  }
  return t;
}

void write_trimap(const fs::path& path, const Trimap& trimap) {
  std::vector<png_color> palette(256);
  for (int i = 0; i < 256; ++i) {
    const auto g = static_cast<png_byte>(i);
    palette[i] = {g, g, g};
  }
  const auto rowbytes = static_cast<std::size_t>(trimap.width());
  std::vector<png_byte> pixels(rowbytes * trimap.height());
  for (std::size_t i = 0; i < trimap.pixel_count(); ++i) {
    pixels[i] = static_cast<png_byte>(trimap[i]);
  }
  save_png(path, static_cast<png_uint_32>(trimap.width()),
           static_cast<png_uint_32>(trimap.height()), PNG_COLOR_TYPE_PALETTE,
           8, pixels, rowbytes, palette.data(), 256);
}

}  // namespace skymatte
