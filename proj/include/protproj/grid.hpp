// Integer grid mapping of residue coordinates into D = [0, 3200]^3.

#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "protproj/structure.hpp"

namespace protproj {

inline constexpr int kDomainExtent = 3200;
inline constexpr double kBaseScale = 10.0;  // grid units per Å

struct GridTransform {
  Vec3 translation{};
  double scale = kBaseScale;
  int domain_extent = kDomainExtent;

  bool operator==(const GridTransform&) const = default;
};

using GridCoords = std::array<int, 3>;

struct GridPoint {
  GridCoords xyz{};
  AminoAcid amino_acid = AminoAcid::Unknown;
  std::string chain_id;
  int seq_num = 0;

  bool operator==(const GridPoint&) const = default;
};

struct MappedPoint {
  GridCoords xyz{};
  int clamped_axes = 0;
};

struct GridMapping {
  std::vector<GridPoint> points;
  std::size_t clamped_points = 0;  // points with at least one clamped axis
};

// Throws Error{InvalidArgument} unless scale > 0 and the extent is 3200.
void validate(const GridTransform& transform);

// Min corner goes to the origin. Scale is 10 units/Å unless the largest
// extent would overflow the domain, in which case scale = 3200 / extent.
// Throws Error{EmptyStructure}.
GridTransform fit_transform(const ProteinStructure& structure);

// round((p - t) * scale) with halves away from zero, clamped to [0, 3200].
MappedPoint map_point(const Vec3& position, const GridTransform& transform);

GridMapping map_structure(const ProteinStructure& structure, const GridTransform& transform);

}  // namespace protproj
