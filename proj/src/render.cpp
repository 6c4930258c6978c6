#include "protproj/render.hpp"

#include <algorithm>
#include <array>
#include <initializer_list>
#include <optional>
#include <tuple>

#include "protproj/error.hpp"

namespace protproj {

namespace {

struct Bounds {
  int u_min = 0;
  int v_min = 0;
  int width = 0;  // source cells, zero when empty
  int height = 0;
};

Bounds bounds_of(const ProjectedView& view) {
  if (view.empty())
    return {};
  int u_min = view.begin()->first.first;
  int u_max = view.rbegin()->first.first;
  int v_min = view.begin()->first.second;
  int v_max = v_min;
  for (const auto& [uv, cell] : view) {
    v_min = std::min(v_min, uv.second);
    v_max = std::max(v_max, uv.second);
  }
  return {u_min, v_min, u_max - u_min + 1, v_max - v_min + 1};
}

struct Ratio {
  std::int64_t num;
  std::int64_t den;

  bool operator<(const Ratio& o) const { return num * o.den < o.num * den; }
};

// Pixels spanned by `cells` source cells: floor((cells - 1) * k) + 1.
int scaled_extent(int cells, const Ratio& k) {
  return cells == 0 ? 0 : static_cast<int>((cells - 1) * k.num / k.den) + 1;
}

// Largest k such that the panels along one direction (with one gutter)
// fit in `target` pixels; nullopt when the direction imposes no limit.
std::optional<Ratio> fit_ratio(std::initializer_list<int> cells, int target, int gutter) {
  std::int64_t spans = 0;
  std::int64_t occupied = 0;
  for (int c : cells) {
    if (c == 0)
      continue;
    spans += c - 1;
    ++occupied;
  }
  if (spans == 0)
    return std::nullopt;
  return Ratio{target - occupied - gutter, spans};
}

struct PlannedLayout {
  MultiviewLayout layout;
  Bounds xy, xz, yz;
};

PlannedLayout plan(const MultiviewViews& views, const RenderConfig& cfg) {
  validate(cfg);
  PlannedLayout p;
  p.xy = bounds_of(views.xy);
  p.xz = bounds_of(views.xz);
  p.yz = bounds_of(views.yz);

  const int left_cells = std::max(p.xz.width, p.xy.width);
  const int bottom_cells = std::max(p.xy.height, p.yz.height);
  const int g = cfg.gutter_px;
  const int t = cfg.target_size;

  Ratio k{1, 1};  // never enlarge
  if (auto h = fit_ratio({left_cells, p.yz.width}, t, g); h && *h < k)
    k = *h;
  if (auto v = fit_ratio({p.xz.height, bottom_cells}, t, g); v && *v < k)
    k = *v;

  MultiviewLayout& l = p.layout;
  l.scale_num = k.num;
  l.scale_den = k.den;
  l.xz.width = scaled_extent(p.xz.width, k);
  l.xz.height = scaled_extent(p.xz.height, k);
  l.xy.width = scaled_extent(p.xy.width, k);
  l.xy.height = scaled_extent(p.xy.height, k);
  l.yz.width = scaled_extent(p.yz.width, k);
  l.yz.height = scaled_extent(p.yz.height, k);

  const int left_px = std::max(l.xz.width, l.xy.width);
  const int top_px = l.xz.height;
  const int bottom_px = std::max(l.xy.height, l.yz.height);
  const int composite_w = left_px + g + scaled_extent(p.yz.width, k);
  const int composite_h = top_px + g + bottom_px;
  const int ox = (t - composite_w) / 2;
  const int oy = (t - composite_h) / 2;

  l.xz.x = ox;
  l.xz.y = oy;
  l.xy.x = ox;
  l.xy.y = oy + top_px + g;
  l.yz.x = ox + left_px + g;
  l.yz.y = oy + top_px + g;
  return p;
}

std::array<int, 3> project(const GridCoords& p, Plane plane) {
  switch (plane) {
    case Plane::XY: return {p[0], p[1], p[2]};
    case Plane::XZ: return {p[0], p[2], p[1]};
    case Plane::YZ: return {p[1], p[2], p[0]};
  }
  return {p[0], p[1], p[2]};
}

}  // namespace

void validate(const RenderConfig& cfg) {
  if (cfg.gutter_px < 0)
    fail(ErrorCode::InvalidArgument, "gutter_px must be >= 0");
  if (cfg.target_size < cfg.gutter_px + 2)
    fail(ErrorCode::InvalidArgument, "target_size too small for three panels and a gutter");
}

bool wins_over(const ViewCell& candidate, const ViewCell& incumbent) {
  return std::tie(candidate.depth, candidate.chain_id, candidate.seq_num, candidate.color) <
         std::tie(incumbent.depth, incumbent.chain_id, incumbent.seq_num, incumbent.color);
}

ProjectedView project_view(std::span<const GridPoint> points, Plane plane,
                           const AminoAcidPalette& palette) {
  ProjectedView view;
  for (const GridPoint& p : points) {
    const auto [u, v, depth] = project(p.xyz, plane);
    ViewCell cell{palette.encode(p.amino_acid), depth, p.chain_id, p.seq_num};
    auto [it, inserted] = view.try_emplace({u, v}, cell);
    if (!inserted && wins_over(cell, it->second))
      it->second = std::move(cell);
  }
  return view;
}

MultiviewLayout plan_layout(const MultiviewViews& views, const RenderConfig& cfg) {
  return plan(views, cfg).layout;
}

RasterImage compose_multiview(const MultiviewViews& views, const RenderConfig& cfg) {
  if (views.xy.empty() && views.xz.empty() && views.yz.empty())
    fail(ErrorCode::EmptyProjection, "all three views are empty");
  const PlannedLayout p = plan(views, cfg);
  const MultiviewLayout& l = p.layout;
  const int t = cfg.target_size;

  std::vector<const ViewCell*> winners(std::size_t(t) * t, nullptr);
  auto bin = [&](const ProjectedView& view, const Bounds& b, const PanelRect& rect) {
    for (const auto& [uv, cell] : view) {
      const std::int64_t du = uv.first - b.u_min;
      const std::int64_t dv = uv.second - b.v_min;
      const int px = rect.x + static_cast<int>(du * l.scale_num / l.scale_den);
      const int py = rect.y + rect.height - 1 - static_cast<int>(dv * l.scale_num / l.scale_den);
      const ViewCell*& slot = winners[std::size_t(py) * t + px];
      if (!slot || wins_over(cell, *slot))
        slot = &cell;
    }
  };
  bin(views.xz, p.xz, l.xz);
  bin(views.xy, p.xy, l.xy);
  bin(views.yz, p.yz, l.yz);

  RasterImage image(t, t);
  for (int y = 0; y < t; ++y)
    for (int x = 0; x < t; ++x)
      if (const ViewCell* c = winners[std::size_t(y) * t + x])
        image.set(x, y, c->color);
  return image;
}

RenderResult render_protein_detailed(const ProteinStructure& structure,
                                     const AminoAcidPalette& palette,
                                     const GridTransform& transform, const RenderConfig& cfg) {
  validate(cfg);
  if (structure.residues.empty())
    fail(ErrorCode::EmptyStructure, "structure " + structure.id + " has no residues");
  const GridMapping mapping = map_structure(structure, transform);

  MultiviewViews views;
  views.xy = project_view(mapping.points, Plane::XY, palette);
  views.xz = project_view(mapping.points, Plane::XZ, palette);
  views.yz = project_view(mapping.points, Plane::YZ, palette);

  RenderResult result;
  result.image = compose_multiview(views, cfg);
  result.layout = plan_layout(views, cfg);
  result.clamped_points = mapping.clamped_points;
  return result;
}

RasterImage render_protein(const ProteinStructure& structure, const AminoAcidPalette& palette,
                           const GridTransform& transform, const RenderConfig& cfg) {
  return render_protein_detailed(structure, palette, transform, cfg).image;
}

}  // namespace protproj
