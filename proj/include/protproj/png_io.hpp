#pragma once

#include <filesystem>

#include <json.hpp>

#include "protproj/render.hpp"

namespace protproj {

// 8-bit RGB, no alpha, non-interlaced, zlib level 9, no row filtering.
// The file is written next to its destination and renamed into place.
void write_png(const std::filesystem::path& path, const RasterImage& image);

// Decodes any 8-bit RGB/RGBA/grey PNG into RGB. Throws Error{Io}.
RasterImage read_png(const std::filesystem::path& path);

// The encoder settings above, as recorded in dataset manifests.
nlohmann::json png_encoder_settings();

}  // namespace protproj
