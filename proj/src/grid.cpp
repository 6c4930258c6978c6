#include "protproj/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "protproj/error.hpp"

namespace protproj {

void validate(const GridTransform& transform) {
  if (!(transform.scale > 0.0) || !std::isfinite(transform.scale))
    fail(ErrorCode::InvalidArgument, "grid scale must be positive");
  if (transform.domain_extent != kDomainExtent)
    fail(ErrorCode::InvalidArgument, "grid domain extent must be 3200");
}

GridTransform fit_transform(const ProteinStructure& structure) {
  if (structure.residues.empty())
    fail(ErrorCode::EmptyStructure, "structure " + structure.id + " has no residues");

  Vec3 lo, hi;
  lo.fill(std::numeric_limits<double>::infinity());
  hi.fill(-std::numeric_limits<double>::infinity());
  for (const ResidueRecord& r : structure.residues)
    for (int i = 0; i < 3; ++i) {
      lo[i] = std::min(lo[i], r.position[i]);
      hi[i] = std::max(hi[i], r.position[i]);
    }

  double extent = 0.0;
  for (int i = 0; i < 3; ++i)
    extent = std::max(extent, hi[i] - lo[i]);

  GridTransform t;
  t.translation = lo;
  if (extent * kBaseScale > kDomainExtent)
    t.scale = kDomainExtent / extent;
  return t;
}

MappedPoint map_point(const Vec3& position, const GridTransform& transform) {
  MappedPoint m;
  for (int i = 0; i < 3; ++i) {
    // std::round rounds halves away from zero.
    const double v = std::round((position[i] - transform.translation[i]) * transform.scale);
    if (v < 0.0) {
      m.xyz[i] = 0;
      ++m.clamped_axes;
    } else if (v > transform.domain_extent) {
      m.xyz[i] = transform.domain_extent;
      ++m.clamped_axes;
    } else {
      m.xyz[i] = static_cast<int>(v);
    }
  }
  return m;
}

GridMapping map_structure(const ProteinStructure& structure, const GridTransform& transform) {
  validate(transform);
  GridMapping out;
  out.points.reserve(structure.residues.size());
  for (const ResidueRecord& r : structure.residues) {
    const MappedPoint m = map_point(r.position, transform);
    if (m.clamped_axes > 0)
      ++out.clamped_points;
    out.points.push_back(GridPoint{m.xyz, r.amino_acid, r.chain_id, r.seq_num});
  }
  return out;
}

}  // namespace protproj
