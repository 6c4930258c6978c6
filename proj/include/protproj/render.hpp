// Multiview orthographic rendering of grid points into a fixed-size image.
//
// Every residue becomes one dot in each of three axis-aligned views:
//
//   +------+
//   |  XZ  |
//   +------+ +----+
//   |  XY  | | YZ |
//   +------+ +----+
//
// Each view is cropped to its occupied bounding box, the panels are packed
// with a gutter between them, and the whole composite is shrunk by a single
// rational factor until it fits the target square. Shrinking bins every
// source cell into exactly one output pixel, so no new colors are created.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "protproj/grid.hpp"
#include "protproj/palette.hpp"

namespace protproj {

enum class Plane { XY, XZ, YZ };

enum class PanelLayout { ThreePanel };

enum class DepthRule { NearestWins };

struct RenderConfig {
  int target_size = 299;
  PanelLayout layout = PanelLayout::ThreePanel;
  int gutter_px = 4;
  DepthRule depth_rule = DepthRule::NearestWins;

  bool operator==(const RenderConfig&) const = default;
};

// Throws Error{InvalidArgument} for a target that cannot hold three panels.
void validate(const RenderConfig& cfg);

struct RasterImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major RGB

  RasterImage() = default;
  RasterImage(int w, int h) : width(w), height(h), pixels(std::size_t(w) * h * 3, 0) {}

  Rgb at(int x, int y) const {
    const std::size_t i = (std::size_t(y) * width + x) * 3;
    return Rgb{pixels[i], pixels[i + 1], pixels[i + 2]};
  }
  void set(int x, int y, Rgb c) {
    const std::size_t i = (std::size_t(y) * width + x) * 3;
    pixels[i] = c.r;
    pixels[i + 1] = c.g;
    pixels[i + 2] = c.b;
  }

  bool operator==(const RasterImage&) const = default;
};

// A dot competing for one pixel. Lower depth wins; equal depths fall back to
// (chain_id, seq_num) ascending, then color.
struct ViewCell {
  Rgb color;
  int depth = 0;
  std::string chain_id;
  int seq_num = 0;

  bool operator==(const ViewCell&) const = default;
};

bool wins_over(const ViewCell& candidate, const ViewCell& incumbent);

// Keyed by (u, v) in the 0..3200 view frame. XY keeps (x, y) with depth z,
// XZ keeps (x, z) with depth y, YZ keeps (y, z) with depth x.
using ProjectedView = std::map<std::pair<int, int>, ViewCell>;

ProjectedView project_view(std::span<const GridPoint> points, Plane plane,
                           const AminoAcidPalette& palette);

struct MultiviewViews {
  ProjectedView xy;
  ProjectedView xz;
  ProjectedView yz;
};

struct PanelRect {
  int x = 0;
  int y = 0;
  int width = 0;  // zero for an empty view
  int height = 0;

  bool contains(int px, int py) const {
    return px >= x && px < x + width && py >= y && py < y + height;
  }
};

// Placement of the three panels in the final image. Source offsets inside a
// panel map to pixels as floor(offset * scale_num / scale_den), with the
// vertical axis pointing up.
struct MultiviewLayout {
  PanelRect xy;
  PanelRect xz;
  PanelRect yz;
  std::int64_t scale_num = 1;
  std::int64_t scale_den = 1;
};

MultiviewLayout plan_layout(const MultiviewViews& views, const RenderConfig& cfg);

// Throws Error{EmptyProjection} when all three views are empty.
RasterImage compose_multiview(const MultiviewViews& views, const RenderConfig& cfg);

struct RenderResult {
  RasterImage image;
  MultiviewLayout layout;
  std::size_t clamped_points = 0;
};

RenderResult render_protein_detailed(const ProteinStructure& structure,
                                     const AminoAcidPalette& palette,
                                     const GridTransform& transform,
                                     const RenderConfig& cfg);

// Propagates Error{EmptyStructure} / Error{EmptyProjection}.
RasterImage render_protein(const ProteinStructure& structure, const AminoAcidPalette& palette,
                           const GridTransform& transform, const RenderConfig& cfg);

}  // namespace protproj
