// Residue-level protein structures read from PDBx/XML files.

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "protproj/amino_acid.hpp"

namespace protproj {

using Vec3 = std::array<double, 3>;

struct ResidueRecord {
  std::string chain_id;
  int seq_num = 0;  // author residue number
  AminoAcid amino_acid = AminoAcid::Unknown;
  Vec3 position{};  // Å
  double occupancy = 1.0;
  std::optional<char> alt_loc;
  int model_num = 1;

  bool operator==(const ResidueRecord&) const = default;
};

// Counters collected while reading a file. They survive deduplication so the
// dataset builder can report them.
struct ParseStats {
  std::size_t atom_sites = 0;
  std::size_t non_polymer_atoms = 0;
  std::size_t unknown_residues = 0;  // polymer residues dropped for a non-standard name

  bool operator==(const ParseStats&) const = default;
};

struct ProteinStructure {
  std::string id;
  std::vector<ResidueRecord> residues;
  std::string source_path;
  ParseStats stats;

  bool operator==(const ProteinStructure&) const = default;
};

// Canonical residue order: (chain_id, seq_num), then the fields that separate
// duplicates, so sorting is a total order independent of input order.
bool canonical_less(const ResidueRecord& a, const ResidueRecord& b);

// Parses a PDBx/XML document. Gzip-compressed input is detected from the
// magic bytes and inflated first.
//
// One record is produced per polymer residue and per alternate location of
// its alpha carbon. Residues without a CA atom are placed at the centroid of
// their atoms. Non-polymer atoms (water, ligands, ions) are skipped and
// residues with non-standard names are dropped and counted in `stats`. The
// result is sorted canonically but not deduplicated.
//
// Throws Error{MalformedXml} for unparseable input or unusable atom records
// and Error{NoAtomSites} when the document has no atom_site records.
ProteinStructure parse_structure(std::string_view bytes, std::string id);
ProteinStructure parse_structure(std::istream& input, std::string id);

// Reads and parses a file; the id defaults to the upper-cased file name up to
// the first dot ("5afr.xml.gz" -> "5AFR").
ProteinStructure read_structure_file(const std::filesystem::path& path,
                                     std::optional<std::string> id = std::nullopt);

std::string protein_id_from_path(const std::filesystem::path& path);

// Keeps model 1 only and resolves alternate locations: for every
// (chain_id, seq_num) the record with the highest occupancy survives, ties
// going to the smallest alt_loc (no alt_loc sorts first). Unknown residues
// are removed. Idempotent.
ProteinStructure deduplicate(const ProteinStructure& structure);

}  // namespace protproj
