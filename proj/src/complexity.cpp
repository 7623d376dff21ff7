/*
 * Copyright 2026 The pixood Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "pixood/complexity.hpp"

#include <png.h>
#include <zlib.h>

#include <cstring>

#include "pixood/error.hpp"

namespace pixood {

const char* CodecName(Codec codec) { return codec == Codec::kPng ? "png" : "deflate-raw"; }

Codec ParseCodec(const std::string& name) {
  if (name == "png") return Codec::kPng;
  if (name == "deflate-raw") return Codec::kDeflateRaw;
  throw Error(ErrorKind::kConfig, "unknown codec '" + name + "'");
}

namespace {

struct PngWriteContext {
  std::vector<uint8_t>* out;
};

void PngWriteCallback(png_structp png, png_bytep data, png_size_t length) {
  auto* ctx = static_cast<PngWriteContext*>(png_get_io_ptr(png));
  ctx->out->insert(ctx->out->end(), data, data + length);
}

void PngFlushCallback(png_structp) {}

struct PngReadContext {
  std::span<const uint8_t> bytes;
  size_t offset = 0;
};

void PngReadCallback(png_structp png, png_bytep data, png_size_t length) {
  auto* ctx = static_cast<PngReadContext*>(png_get_io_ptr(png));
  if (ctx->offset + length > ctx->bytes.size()) png_error(png, "truncated PNG stream");
  std::memcpy(data, ctx->bytes.data() + ctx->offset, length);
  ctx->offset += length;
}

[[noreturn]] void PngErrorCallback(png_structp, png_const_charp message) {
  throw Error(ErrorKind::kCodec, std::string("libpng: ") + message);
}

void PngWarningCallback(png_structp, png_const_charp) {}

}  // namespace

std::vector<uint8_t> EncodePng(const ImageTensor& image) {
  std::vector<uint8_t> out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, PngErrorCallback,
                                            PngWarningCallback);
  if (png == nullptr) throw Error(ErrorKind::kCodec, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw Error(ErrorKind::kCodec, "png_create_info_struct failed");
  }
  try {
    PngWriteContext ctx{&out};
    png_set_write_fn(png, &ctx, PngWriteCallback, PngFlushCallback);
    png_set_compression_level(png, kCompressionLevel);
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.width()),
                 static_cast<png_uint_32>(image.height()), 8,
                 image.channels() == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    const size_t stride = static_cast<size_t>(image.width()) * image.channels();
    for (int r = 0; r < image.height(); ++r) {
      // libpng's row pointer is non-const but is not written through.
      png_write_row(png, const_cast<png_bytep>(image.data().data() + r * stride));
    }
    png_write_end(png, nullptr);
  } catch (...) {
    png_destroy_write_struct(&png, &info);
    throw;
  }
  png_destroy_write_struct(&png, &info);
  return out;
}

ImageTensor DecodePng(std::span<const uint8_t> bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    throw Error(ErrorKind::kFormat, "not a PNG stream");
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, PngErrorCallback,
                                           PngWarningCallback);
  if (png == nullptr) throw Error(ErrorKind::kCodec, "png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error(ErrorKind::kCodec, "png_create_info_struct failed");
  }
  try {
    PngReadContext ctx{bytes, 0};
    png_set_read_fn(png, &ctx, PngReadCallback);
    png_read_info(png, info);
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    png_set_packing(png);
    png_set_palette_to_rgb(png);
    png_set_expand_gray_1_2_4_to_8(png);
    png_read_update_info(png, info);
    const int width = static_cast<int>(png_get_image_width(png, info));
    const int height = static_cast<int>(png_get_image_height(png, info));
    const int channels = png_get_channels(png, info);
    if (channels != 1 && channels != 3) {
      throw Error(ErrorKind::kUnsupportedType, "PNG with " + std::to_string(channels) + " channels");
    }
    ImageTensor image(Shape{height, width, channels});
    const size_t stride = static_cast<size_t>(width) * channels;
    for (int r = 0; r < height; ++r) {
      png_read_row(png, image.mutable_data().data() + r * stride, nullptr);
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return image;
  } catch (...) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw;
  }
}

std::vector<uint8_t> DeflateRaw(std::span<const uint8_t> bytes) {
  z_stream stream{};
  if (deflateInit2(&stream, kCompressionLevel, Z_DEFLATED, -15, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
    throw Error(ErrorKind::kCodec, "deflateInit2 failed");
  }
  std::vector<uint8_t> out(deflateBound(&stream, static_cast<uLong>(bytes.size())));
  stream.next_in = const_cast<Bytef*>(bytes.data());
  stream.avail_in = static_cast<uInt>(bytes.size());
  stream.next_out = out.data();
  stream.avail_out = static_cast<uInt>(out.size());
  const int status = deflate(&stream, Z_FINISH);
  deflateEnd(&stream);
  if (status != Z_STREAM_END) throw Error(ErrorKind::kCodec, "deflate did not finish");
  out.resize(stream.total_out);
  return out;
}

ComplexityEstimate CompressedLengthBits(const ImageTensor& image, Codec codec) {
  const size_t bytes =
      codec == Codec::kPng ? EncodePng(image).size() : DeflateRaw(image.data()).size();
  ComplexityEstimate estimate;
  estimate.codec = codec;
  estimate.bits = 8.0 * static_cast<double>(bytes);
  estimate.normalized_bpd = estimate.bits / static_cast<double>(image.shape().size());
  return estimate;
}

ComplexityEstimate BestLength(const ImageTensor& image, const std::set<Codec>& codecs) {
  if (codecs.empty()) throw Error(ErrorKind::kConfig, "best_length needs at least one codec");
  ComplexityEstimate best;
  bool first = true;
  for (Codec codec : codecs) {
    const auto estimate = CompressedLengthBits(image, codec);
    if (first || estimate.bits < best.bits) best = estimate;
    first = false;
  }
  return best;
}

}  // namespace pixood
