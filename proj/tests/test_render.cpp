#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <tuple>

#include "protproj/error.hpp"
#include "protproj/render.hpp"
#include "support.hpp"

using namespace protproj;
using namespace protproj::testing;

namespace {

const AminoAcidPalette kPalette = AminoAcidPalette::default_palette();

GridPoint point(GridCoords xyz, AminoAcid aa, std::string chain = "A", int seq = 1) {
  return GridPoint{xyz, aa, std::move(chain), seq};
}

MultiviewViews views_of(const std::vector<GridPoint>& pts) {
  return {project_view(pts, Plane::XY, kPalette), project_view(pts, Plane::XZ, kPalette),
          project_view(pts, Plane::YZ, kPalette)};
}

std::size_t non_black(const RasterImage& img, const PanelRect* only = nullptr) {
  std::size_t n = 0;
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      if (img.at(x, y) != kBackground && (!only || only->contains(x, y)))
        ++n;
  return n;
}

RasterImage render(const ProteinStructure& s, RenderConfig cfg = {}) {
  return render_protein(s, kPalette, fit_transform(s), cfg);
}

// Integer-Å coordinates map to exact multiples of 10 grid units.
ProteinStructure lattice_structure(std::mt19937_64& rng, int count, int span) {
  std::uniform_int_distribution<int> c(0, span), aa(0, 19);
  ProteinStructure s;
  s.id = "LAT";
  for (int i = 0; i < count; ++i)
    s.residues.push_back(residue("A", i + 1, static_cast<AminoAcid>(aa(rng)),
                                 {double(c(rng)), double(c(rng)), double(c(rng))}));
  return s;
}

ProteinStructure mirrored_x(ProteinStructure s) {
  for (ResidueRecord& r : s.residues)
    r.position[0] = -r.position[0];
  return s;
}

}  // namespace

TEST_CASE("project_view drops the plane normal into depth") {
  const std::vector<GridPoint> pts = {point({10, 20, 30}, AminoAcid::Ala)};
  const ProjectedView xy = project_view(pts, Plane::XY, kPalette);
  REQUIRE(xy.size() == 1);
  CHECK(xy.begin()->first == std::pair(10, 20));
  CHECK(xy.begin()->second.depth == 30);
  CHECK(xy.begin()->second.color == Rgb{0, 0, 128});
  CHECK(project_view(pts, Plane::XZ, kPalette).begin()->first == std::pair(10, 30));
  CHECK(project_view(pts, Plane::XZ, kPalette).begin()->second.depth == 20);
  CHECK(project_view(pts, Plane::YZ, kPalette).begin()->first == std::pair(20, 30));
  CHECK(project_view(pts, Plane::YZ, kPalette).begin()->second.depth == 10);
}

TEST_CASE("nearest dot wins a collision") {
  std::vector<GridPoint> pts = {point({5, 5, 9}, AminoAcid::Gly, "A", 1),
                                point({5, 5, 1}, AminoAcid::Lys, "A", 2)};
  for (int pass = 0; pass < 2; ++pass) {
    const ProjectedView xy = project_view(pts, Plane::XY, kPalette);
    REQUIRE(xy.size() == 1);
    CHECK(xy.at({5, 5}).color == kPalette.encode(AminoAcid::Lys));
    CHECK(xy.at({5, 5}).depth == 1);
    std::reverse(pts.begin(), pts.end());
  }
}

TEST_CASE("collision winner matches a brute-force scan over the candidates") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> z(0, 3), seq(1, 4), aa(0, 19);
  const char* chains[] = {"A", "B"};
  for (int round = 0; round < 200; ++round) {
    std::vector<GridPoint> pts;
    for (int i = 0; i < 4; ++i)
      pts.push_back(point({7, 7, z(rng)}, static_cast<AminoAcid>(aa(rng)), chains[i % 2], seq(rng)));
    const auto best = *std::min_element(pts.begin(), pts.end(), [](auto& a, auto& b) {
      const auto ca = kPalette.code(a.amino_acid), cb = kPalette.code(b.amino_acid);
      return std::tie(a.xyz[2], a.chain_id, a.seq_num, ca) <
             std::tie(b.xyz[2], b.chain_id, b.seq_num, cb);
    });
    const ProjectedView xy = project_view(pts, Plane::XY, kPalette);
    REQUIRE(xy.size() == 1);
    CHECK(xy.at({7, 7}).color == kPalette.encode(best.amino_acid));
    CHECK(xy.at({7, 7}).depth == best.xyz[2]);
  }
}

TEST_CASE("a single residue becomes three pixels") {
  ProteinStructure s;
  s.residues = {residue("A", 1, AminoAcid::Gly, {3, 4, 5})};
  const RenderResult r = render_protein_detailed(s, kPalette, fit_transform(s), {});
  CHECK(r.image.width == 299);
  CHECK(r.image.height == 299);
  CHECK(r.image.pixels.size() == 299u * 299u * 3u);
  CHECK(non_black(r.image) == 3);
  for (const PanelRect* p : {&r.layout.xy, &r.layout.xz, &r.layout.yz}) {
    CHECK(p->width == 1);
    CHECK(non_black(r.image, p) == 1);
  }
}

TEST_CASE("residues sharing one grid point give exactly three pixels") {
  ProteinStructure s;
  for (int i = 0; i < 10; ++i)
    s.residues.push_back(residue("A", i + 1, kStandardAminoAcids[i], {1.0, 1.0, 1.0}));
  const RasterImage img = render(s);
  CHECK(non_black(img) == 3);
  // Equal depths: the lowest seq_num (ALA) wins everywhere.
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      if (img.at(x, y) != kBackground)
        CHECK(kPalette.decode(img.at(x, y)) == AminoAcid::Ala);
}

TEST_CASE("panels are placed XZ over XY with YZ to the right, separated by the gutter") {
  std::mt19937_64 rng(4);
  const ProteinStructure s = random_structure(rng, 200, 60.0);
  const RenderConfig cfg;
  const RenderResult r = render_protein_detailed(s, kPalette, fit_transform(s), cfg);
  const MultiviewLayout& l = r.layout;
  CHECK(l.xz.x == l.xy.x);
  CHECK(l.xz.y + l.xz.height + cfg.gutter_px == l.xy.y);
  CHECK(l.xy.y == l.yz.y);
  CHECK(std::max(l.xz.width, l.xy.width) + cfg.gutter_px + l.xy.x == l.yz.x);
  for (const PanelRect* p : {&l.xy, &l.xz, &l.yz}) {
    CHECK(p->x >= 0);
    CHECK(p->y >= 0);
    CHECK(p->x + p->width <= cfg.target_size);
    CHECK(p->y + p->height <= cfg.target_size);
    CHECK(non_black(r.image, p) > 0);
  }
  CHECK(non_black(r.image) ==
        non_black(r.image, &l.xy) + non_black(r.image, &l.xz) + non_black(r.image, &l.yz));
  // Fitted tightly: one of the two directions is within a few pixels of full.
  const int used_w = l.yz.x + l.yz.width - l.xy.x;
  const int used_h = l.xy.y + std::max(l.xy.height, l.yz.height) - l.xz.y;
  CHECK(std::max(used_w, used_h) >= cfg.target_size - 3);
}

TEST_CASE("binning agrees with a per-pixel brute-force scan") {
  std::mt19937_64 rng(12);
  for (int round = 0; round < 10; ++round) {
    const ProteinStructure s = random_structure(rng, 400, 90.0);
    const GridMapping m = map_structure(s, fit_transform(s));
    const MultiviewViews v = views_of(m.points);
    const RenderConfig cfg;
    const MultiviewLayout l = plan_layout(v, cfg);
    const RasterImage img = compose_multiview(v, cfg);

    auto check_panel = [&](const ProjectedView& view, const PanelRect& rect) {
      int u0 = 1 << 30, v0 = 1 << 30;
      for (const auto& [uv, cell] : view) {
        u0 = std::min(u0, uv.first);
        v0 = std::min(v0, uv.second);
      }
      std::map<std::pair<int, int>, std::vector<ViewCell>> buckets;
      for (const auto& [uv, cell] : view) {
        const int px = int((uv.first - u0) * l.scale_num / l.scale_den);
        const int py = int((uv.second - v0) * l.scale_num / l.scale_den);
        buckets[{rect.x + px, rect.y + rect.height - 1 - py}].push_back(cell);
      }
      std::size_t painted = 0;
      for (int y = rect.y; y < rect.y + rect.height; ++y)
        for (int x = rect.x; x < rect.x + rect.width; ++x) {
          auto it = buckets.find({x, y});
          if (it == buckets.end()) {
            CHECK(img.at(x, y) == kBackground);
            continue;
          }
          ++painted;
          const auto& cells = it->second;
          const ViewCell& winner = *std::min_element(cells.begin(), cells.end(), [](auto& a, auto& b) {
            return std::tie(a.depth, a.chain_id, a.seq_num, a.color) <
                   std::tie(b.depth, b.chain_id, b.seq_num, b.color);
          });
          CHECK(img.at(x, y) == winner.color);
        }
      CHECK(painted == buckets.size());
    };
    check_panel(v.xy, l.xy);
    check_panel(v.xz, l.xz);
    check_panel(v.yz, l.yz);
  }
}

TEST_CASE("render output size, purity, determinism and order invariance") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> size(1, 600);
  std::uniform_real_distribution<double> extent(1.0, 450.0);
  for (int round = 0; round < 40; ++round) {
    ProteinStructure s = random_structure(rng, size(rng), extent(rng));
    const RasterImage a = render(s);
    CHECK(a.width == 299);
    CHECK(a.height == 299);
    CHECK(a.pixels.size() == 299u * 299u * 3u);
    const std::size_t lit = non_black(a);
    CHECK(lit >= 3);
    CHECK(lit <= 3 * s.residues.size());
    for (int y = 0; y < a.height; ++y)
      for (int x = 0; x < a.width; ++x)
        if (a.at(x, y) != kBackground)
          CHECK(kPalette.decode(a.at(x, y)).has_value());
    CHECK(render(s) == a);
    std::shuffle(s.residues.begin(), s.residues.end(), rng);
    CHECK(render(s) == a);
  }
}

TEST_CASE("two-residue structure renders byte-identically twice") {
  ProteinStructure s;
  s.residues = {residue("A", 1, AminoAcid::Trp, {0, 0, 0}),
                residue("A", 2, AminoAcid::Cys, {3.8, 0.4, -1.2})};
  CHECK(render(s).pixels == render(s).pixels);
}

TEST_CASE("small structures are not enlarged") {
  ProteinStructure s;
  s.residues = {residue("A", 1, AminoAcid::Ala, {0, 0, 0}),
                residue("A", 2, AminoAcid::Gly, {5, 3, 2})};
  const RenderResult r = render_protein_detailed(s, kPalette, fit_transform(s), {});
  CHECK(r.layout.scale_num == r.layout.scale_den);
  CHECK(r.layout.xy.width == 51);
  CHECK(r.layout.xy.height == 31);
}

TEST_CASE("mirroring x mirrors the XY and XZ panels") {
  auto check_mirror = [](const ProteinStructure& s, int tolerance) {
    const ProteinStructure m = mirrored_x(s);
    const RenderResult a = render_protein_detailed(s, kPalette, fit_transform(s), {});
    const RenderResult b = render_protein_detailed(m, kPalette, fit_transform(m), {});
    for (auto rect : {&MultiviewLayout::xy, &MultiviewLayout::xz}) {
      const PanelRect& ra = a.layout.*rect;
      const PanelRect& rb = b.layout.*rect;
      REQUIRE(ra.width == rb.width);
      REQUIRE(ra.height == rb.height);
      std::size_t lit_a = 0, lit_b = 0;
      for (int y = 0; y < ra.height; ++y)
        for (int x = 0; x < ra.width; ++x) {
          const Rgb ca = a.image.at(ra.x + x, ra.y + y);
          lit_b += b.image.at(rb.x + x, rb.y + y) != kBackground;
          if (ca == kBackground)
            continue;
          ++lit_a;
          bool found = false;
          const int mx = ra.width - 1 - x;
          for (int dx = -tolerance; dx <= tolerance && !found; ++dx)
            if (mx + dx >= 0 && mx + dx < rb.width)
              found = b.image.at(rb.x + mx + dx, rb.y + y) == ca;
          CHECK(found);
        }
      CHECK(lit_a == lit_b);
    }
  };
  std::mt19937_64 rng(31);
  // Fits without shrinking: exact mirror images.
  for (int i = 0; i < 10; ++i)
    check_mirror(lattice_structure(rng, 40, 14), 0);
  // Shrunk: binning may shift a dot by one pixel.
  for (int i = 0; i < 10; ++i)
    check_mirror(lattice_structure(rng, 25, 120), 1);
}

TEST_CASE("custom target sizes and invalid configurations") {
  std::mt19937_64 rng(9);
  const ProteinStructure s = random_structure(rng, 100, 50.0);
  RenderConfig cfg;
  cfg.target_size = 64;
  cfg.gutter_px = 0;
  const RasterImage img = render(s, cfg);
  CHECK(img.width == 64);
  CHECK(img.pixels.size() == 64u * 64u * 3u);

  cfg.target_size = 5;
  cfg.gutter_px = 4;
  CHECK_THROWS_AS(render(s, cfg), Error);
  cfg.gutter_px = -1;
  CHECK_THROWS_AS(render(s, cfg), Error);
}

TEST_CASE("empty inputs") {
  try {
    compose_multiview(MultiviewViews{}, RenderConfig{});
    FAIL("expected EmptyProjection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyProjection);
  }
  try {
    render_protein(ProteinStructure{}, kPalette, GridTransform{}, RenderConfig{});
    FAIL("expected EmptyStructure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyStructure);
  }
}
