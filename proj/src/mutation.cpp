#include "protproj/mutation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "protproj/error.hpp"
#include "protproj/hashing.hpp"

namespace protproj {

namespace {

AminoAcid replacement_for(AminoAcid original, double u) {
  constexpr std::size_t kChoices = kStandardAminoAcidCount - 1;
  auto k = static_cast<std::size_t>(u * kChoices);
  k = std::min(k, kChoices - 1);
  // Skip over the original in canonical order.
  if (k >= index_of(original))
    ++k;
  return static_cast<AminoAcid>(k);
}

}  // namespace

void validate(const MutationSpec& spec) {
  if (!(spec.probability >= 0.0 && spec.probability <= 1.0))
    fail(ErrorCode::InvalidArgument, "mutation probability must lie in [0, 1]");
}

MutationResult mutate(const ProteinStructure& structure, const MutationSpec& spec) {
  validate(spec);
  MutationResult out{structure, {}};
  out.log.total_residues = structure.residues.size();

  std::vector<std::size_t> order(structure.residues.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return canonical_less(structure.residues[a], structure.residues[b]);
  });

  UnitDraws draws(spec.seed);
  for (std::size_t i : order) {
    ResidueRecord& r = out.structure.residues[i];
    if (draws.next() >= spec.probability)
      continue;
    const double pick = draws.next();
    if (!is_standard(r.amino_acid))
      continue;  // the draw is still consumed so the stream layout is fixed
    const AminoAcid replacement = replacement_for(r.amino_acid, pick);
    out.log.entries.push_back({r.chain_id, r.seq_num, r.amino_acid, replacement});
    r.amino_acid = replacement;
  }
  return out;
}

ProteinStructure replay(const ProteinStructure& structure, const MutationLog& log) {
  ProteinStructure out = structure;
  std::map<std::pair<std::string, int>, std::size_t> index;
  for (std::size_t i = 0; i < out.residues.size(); ++i)
    index.try_emplace({out.residues[i].chain_id, out.residues[i].seq_num}, i);

  for (const MutationEntry& e : log.entries) {
    const std::string where = e.chain_id + ":" + std::to_string(e.seq_num);
    auto it = index.find({e.chain_id, e.seq_num});
    if (it == index.end())
      fail(ErrorCode::UnknownResidueReference, "no residue " + where);
    ResidueRecord& r = out.residues[it->second];
    if (r.amino_acid != e.original)
      fail(ErrorCode::UnknownResidueReference,
           "residue " + where + " is " + std::string(three_letter_code(r.amino_acid)) +
               ", log expects " + std::string(three_letter_code(e.original)));
    r.amino_acid = e.mutated;
  }
  return out;
}

std::uint64_t derive_protein_seed(std::uint64_t dataset_seed, std::string_view protein_id) {
  return splitmix64(dataset_seed ^ fnv1a64(protein_id));
}

nlohmann::json to_json(const MutationLog& log) {
  nlohmann::json entries = nlohmann::json::array();
  for (const MutationEntry& e : log.entries)
    entries.push_back({{"chain_id", e.chain_id},
                       {"seq_num", e.seq_num},
                       {"original", three_letter_code(e.original)},
                       {"mutated", three_letter_code(e.mutated)}});
  return {{"total_residues", log.total_residues}, {"entries", entries}};
}

MutationLog mutation_log_from_json(const nlohmann::json& doc) {
  try {
    MutationLog log;
    log.total_residues = doc.at("total_residues").get<std::size_t>();
    for (const auto& e : doc.at("entries")) {
      MutationEntry entry{e.at("chain_id").get<std::string>(), e.at("seq_num").get<int>(),
                          amino_acid_from_code(e.at("original").get<std::string>()),
                          amino_acid_from_code(e.at("mutated").get<std::string>())};
      if (!is_standard(entry.original) || !is_standard(entry.mutated) ||
          entry.original == entry.mutated)
        fail(ErrorCode::InvalidArgument, "mutation log entry is not a substitution");
      log.entries.push_back(std::move(entry));
    }
    return log;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("mutation log: ") + e.what());
  }
}

}  // namespace protproj
