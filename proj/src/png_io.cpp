#include "protproj/png_io.hpp"

#include <csetjmp>
#include <cstdio>
#include <memory>
#include <string>

#include <png.h>

#include "protproj/dataset.hpp"
#include "protproj/error.hpp"

namespace protproj {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void png_warning_handler(png_structp, png_const_charp) {}

void append_bytes(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::string*>(png_get_io_ptr(png));
  out->append(reinterpret_cast<const char*>(data), length);
}

void flush_nothing(png_structp) {}

}  // namespace

nlohmann::json png_encoder_settings() {
  return {{"library", "libpng"},
          {"color_type", "RGB"},
          {"bit_depth", 8},
          {"interlace", "none"},
          {"filter", "none"},
          {"zlib_level", 9}};
}

void write_png(const std::filesystem::path& path, const RasterImage& image) {
  if (image.width <= 0 || image.height <= 0 ||
      image.pixels.size() != std::size_t(image.width) * image.height * 3)
    fail(ErrorCode::InvalidArgument, "raster buffer does not match its dimensions");

  std::string encoded;
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, png_warning_handler);
  if (!png)
    fail(ErrorCode::Io, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  struct Cleanup {
    png_structp* png;
    png_infop* info;
    ~Cleanup() { png_destroy_write_struct(png, info); }
  } cleanup{&png, &info};
  if (!info)
    fail(ErrorCode::Io, "png_create_info_struct failed");
  // libpng reports errors by longjmp; nothing below owns resources.
  if (setjmp(png_jmpbuf(png)))
    fail(ErrorCode::Io, "libpng failed to encode " + path.string());

  png_set_write_fn(png, &encoded, append_bytes, flush_nothing);
  png_set_IHDR(png, info, image.width, image.height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_filter(png, PNG_FILTER_TYPE_BASE, PNG_FILTER_NONE);
  png_set_compression_level(png, 9);
  png_write_info(png, info);
  for (int y = 0; y < image.height; ++y) {
    auto row = const_cast<png_bytep>(image.pixels.data() + std::size_t(y) * image.width * 3);
    png_write_row(png, row);
  }
  png_write_end(png, nullptr);

  write_file_atomic(path, encoded);
}

RasterImage read_png(const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.string().c_str(), "rb"));
  if (!file)
    fail(ErrorCode::Io, "cannot open " + path.string());

  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, png_warning_handler);
  if (!png)
    fail(ErrorCode::Io, "png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  struct Cleanup {
    png_structp* png;
    png_infop* info;
    ~Cleanup() { png_destroy_read_struct(png, info, nullptr); }
  } cleanup{&png, &info};
  if (!info)
    fail(ErrorCode::Io, "png_create_info_struct failed");
  RasterImage image;
  if (setjmp(png_jmpbuf(png)))
    fail(ErrorCode::Io, "libpng failed to decode " + path.string());

  png_init_io(png, file.get());
  png_read_info(png, info);
  const int color_type = png_get_color_type(png, info);
  if (png_get_bit_depth(png, info) == 16)
    png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE)
    png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(png);
  if (color_type & PNG_COLOR_MASK_ALPHA)
    png_set_strip_alpha(png);
  png_read_update_info(png, info);

  image = RasterImage(static_cast<int>(png_get_image_width(png, info)),
                      static_cast<int>(png_get_image_height(png, info)));
  if (png_get_rowbytes(png, info) != std::size_t(image.width) * 3)
    fail(ErrorCode::Io, "unsupported PNG layout in " + path.string());
  for (int y = 0; y < image.height; ++y)
    png_read_row(png, image.pixels.data() + std::size_t(y) * image.width * 3, nullptr);
  png_read_end(png, nullptr);
  return image;
}

}  // namespace protproj
