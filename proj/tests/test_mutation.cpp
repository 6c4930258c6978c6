#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "protproj/error.hpp"
#include "protproj/hashing.hpp"
#include "protproj/mutation.hpp"
#include "protproj/render.hpp"
#include "support.hpp"

using namespace protproj;
using namespace protproj::testing;

namespace {

ProteinStructure synthetic(std::size_t n, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  return random_structure(rng, n);
}

// Replays the documented stream layout straight from std::mt19937_64.
MutationLog expected_log(const ProteinStructure& s, double p, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  auto unit = [&] { return std::ldexp(static_cast<double>(engine() >> 11), -53); };
  MutationLog log;
  log.total_residues = s.residues.size();
  for (const ResidueRecord& r : s.residues) {
    if (!(unit() < p))
      continue;
    const int k = static_cast<int>(std::floor(unit() * 19.0));
    std::vector<AminoAcid> others;
    for (AminoAcid aa : kStandardAminoAcids)
      if (aa != r.amino_acid)
        others.push_back(aa);
    log.entries.push_back({r.chain_id, r.seq_num, r.amino_acid, others.at(k)});
  }
  return log;
}

}  // namespace

TEST_CASE("probability 0 leaves the structure untouched") {
  const ProteinStructure s = synthetic(500);
  const MutationResult m = mutate(s, {0.0, 42});
  CHECK(m.structure == s);
  CHECK(m.log.entries.empty());
  CHECK(m.log.total_residues == 500);
}

TEST_CASE("probability 1 mutates every residue") {
  const ProteinStructure s = synthetic(500);
  const MutationResult m = mutate(s, {1.0, 42});
  REQUIRE(m.log.entries.size() == s.residues.size());
  for (std::size_t i = 0; i < s.residues.size(); ++i) {
    CHECK(m.log.entries[i].original != m.log.entries[i].mutated);
    CHECK(m.structure.residues[i].amino_acid != s.residues[i].amino_acid);
    CHECK(m.structure.residues[i].position == s.residues[i].position);
  }
}

TEST_CASE("mutated count at p = 0.05 stays within three binomial standard deviations") {
  const std::size_t n = 10000;
  const double p = 0.05;
  const double mean = n * p;
  const double sigma = std::sqrt(n * p * (1 - p));
  CHECK(sigma == doctest::Approx(21.79).epsilon(1e-3));
  const ProteinStructure s = synthetic(n);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto count = static_cast<double>(mutate(s, {p, seed}).log.entries.size());
    CHECK(std::fabs(count - mean) <= 3 * sigma);
  }
}

TEST_CASE("draw stream follows the documented layout") {
  const ProteinStructure s = synthetic(3000, 9);
  for (double p : {0.05, 0.3, 1.0})
    for (std::uint64_t seed : {0ULL, 1ULL, 0xdeadbeefULL})
      CHECK(mutate(s, {p, seed}).log == expected_log(s, p, seed));
}

TEST_CASE("replacements are uniform over the other nineteen amino acids") {
  ProteinStructure s;
  for (int i = 0; i < 19000; ++i)
    s.residues.push_back(residue("A", i, AminoAcid::Met, {0, 0, 0}));
  const MutationResult m = mutate(s, {1.0, 5});
  std::array<int, kStandardAminoAcidCount> counts{};
  for (const MutationEntry& e : m.log.entries)
    ++counts[index_of(e.mutated)];
  CHECK(counts[index_of(AminoAcid::Met)] == 0);
  double chi2 = 0.0;
  for (AminoAcid aa : kStandardAminoAcids) {
    if (aa == AminoAcid::Met)
      continue;
    const double d = counts[index_of(aa)] - 1000.0;
    chi2 += d * d / 1000.0;
  }
  CHECK(chi2 < 42.31);  // chi-square, 18 dof, p = 0.001
}

TEST_CASE("mutation is deterministic and independent of record order") {
  std::mt19937_64 rng(3);
  ProteinStructure s = synthetic(800, 4);
  const MutationResult a = mutate(s, {0.2, 77});
  const MutationResult b = mutate(s, {0.2, 77});
  CHECK(a.structure == b.structure);
  CHECK(a.log == b.log);
  std::shuffle(s.residues.begin(), s.residues.end(), rng);
  CHECK(mutate(s, {0.2, 77}).log == a.log);
  CHECK(mutate(s, {0.2, 78}).log != a.log);
}

TEST_CASE("replay applies logged substitutions") {
  ProteinStructure s;
  s.residues = {residue("A", 1, AminoAcid::Ala, {0, 0, 0}),
                residue("A", 2, AminoAcid::Ser, {1, 0, 0})};
  CHECK(replay(s, {}) == s);

  MutationLog log{{{"A", 1, AminoAcid::Ala, AminoAcid::Gly}}, 2};
  const ProteinStructure r = replay(s, log);
  CHECK(r.residues[0].amino_acid == AminoAcid::Gly);
  CHECK(r.residues[1] == s.residues[1]);

  const ProteinStructure big = synthetic(2000, 6);
  const MutationResult m = mutate(big, {0.05, 1234});
  CHECK(replay(big, m.log) == m.structure);
}

TEST_CASE("replay rejects logs that do not match the structure") {
  ProteinStructure s;
  s.residues = {residue("A", 1, AminoAcid::Ala, {0, 0, 0})};
  for (const MutationLog& bad : {MutationLog{{{"B", 1, AminoAcid::Ala, AminoAcid::Gly}}, 1},
                                 MutationLog{{{"A", 1, AminoAcid::Trp, AminoAcid::Gly}}, 1}}) {
    try {
      replay(s, bad);
      FAIL("expected UnknownResidueReference");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnknownResidueReference);
    }
  }
}

TEST_CASE("mutation logs round-trip through JSON") {
  const MutationResult m = mutate(synthetic(400, 2), {0.1, 8});
  CHECK(mutation_log_from_json(to_json(m.log)) == m.log);

  nlohmann::json noop = to_json(m.log);
  noop["entries"][0]["mutated"] = noop["entries"][0]["original"];
  CHECK_THROWS_AS(mutation_log_from_json(noop), Error);
}

TEST_CASE("invalid probabilities are rejected") {
  const ProteinStructure s = synthetic(3);
  CHECK_THROWS_AS(mutate(s, {-0.1, 1}), Error);
  CHECK_THROWS_AS(mutate(s, {1.5, 1}), Error);
  CHECK_THROWS_AS(mutate(s, {std::nan(""), 1}), Error);
}

TEST_CASE("hash primitives match published test vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
}

TEST_CASE("per-protein seeds") {
  CHECK(derive_protein_seed(7, "5AFR") == splitmix64(7 ^ fnv1a64("5AFR")));
  CHECK(derive_protein_seed(7, "5AFR") != derive_protein_seed(7, "5AGU"));
  CHECK(derive_protein_seed(7, "5AFR") != derive_protein_seed(8, "5AFR"));
}

TEST_CASE("a visible mutation changes the rendered image") {
  const AminoAcidPalette palette = AminoAcidPalette::default_palette();
  ProteinStructure s;
  s.residues = {residue("A", 1, AminoAcid::Ala, {0, 0, 0}),
                residue("A", 2, AminoAcid::Gly, {8, 8, 8})};
  const GridTransform t = fit_transform(s);
  const MutationResult m = mutate(s, {1.0, 3});
  REQUIRE_FALSE(m.log.entries.empty());
  const RasterImage a = render_protein(s, palette, t, {});
  const RasterImage b = render_protein(m.structure, palette, t, {});
  CHECK(a != b);
  std::size_t lit_a = 0, lit_b = 0, differing = 0;
  for (int y = 0; y < a.height; ++y)
    for (int x = 0; x < a.width; ++x) {
      lit_a += a.at(x, y) != kBackground;
      lit_b += b.at(x, y) != kBackground;
      differing += a.at(x, y) != b.at(x, y);
    }
  CHECK(lit_a == lit_b);  // same geometry, only colors change
  CHECK(differing == 6);
}
