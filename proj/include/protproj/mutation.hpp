// "False protein" generation: seeded recoloring of residues.

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "protproj/structure.hpp"

namespace protproj {

// Identifier recorded in manifests and logs. Draws come from std::mt19937_64
// (bit-exact by the C++ standard) and become doubles in [0, 1) from the top
// 53 bits: u = (x >> 11) * 2^-53.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64/u53";

// Stream layout, in canonical (chain_id, seq_num) order: one draw per
// residue; when it is below `probability` a second draw u picks
// floor(u * 19) among the other nineteen amino acids in canonical order.
struct MutationSpec {
  double probability = 0.05;
  std::uint64_t seed = 0;

  bool operator==(const MutationSpec&) const = default;
};

// Throws Error{InvalidArgument} unless probability is in [0, 1].
void validate(const MutationSpec& spec);

class UnitDraws {
 public:
  explicit UnitDraws(std::uint64_t seed) : engine_(seed) {}

  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

struct MutationEntry {
  std::string chain_id;
  int seq_num = 0;
  AminoAcid original = AminoAcid::Unknown;
  AminoAcid mutated = AminoAcid::Unknown;

  bool operator==(const MutationEntry&) const = default;
};

struct MutationLog {
  std::vector<MutationEntry> entries;
  std::size_t total_residues = 0;

  bool operator==(const MutationLog&) const = default;
};

struct MutationResult {
  ProteinStructure structure;
  MutationLog log;
};

MutationResult mutate(const ProteinStructure& structure, const MutationSpec& spec);

// Applies a log without touching the RNG. Throws Error{UnknownResidueReference}
// when an entry names a residue that is absent or holds a different amino acid.
ProteinStructure replay(const ProteinStructure& structure, const MutationLog& log);

// splitmix64(dataset_seed ^ fnv1a64(protein_id))
std::uint64_t derive_protein_seed(std::uint64_t dataset_seed, std::string_view protein_id);

nlohmann::json to_json(const MutationLog& log);
MutationLog mutation_log_from_json(const nlohmann::json& doc);

}  // namespace protproj
