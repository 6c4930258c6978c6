#include "protproj/amino_acid.hpp"

namespace protproj {

namespace {

constexpr std::array<std::string_view, kStandardAminoAcidCount + 1> kCodes = {
    "ALA", "ARG", "ASN", "ASP", "CYS", "GLN", "GLU", "GLY", "HIS", "ILE",
    "LEU", "LYS", "MET", "PHE", "PRO", "SER", "THR", "TRP", "TYR", "VAL",
    "UNK",
};

}  // namespace

std::string_view three_letter_code(AminoAcid aa) {
  return kCodes[index_of(aa)];
}

AminoAcid amino_acid_from_code(std::string_view code) {
  for (std::size_t i = 0; i < kStandardAminoAcidCount; ++i)
    if (kCodes[i] == code)
      return static_cast<AminoAcid>(i);
  return AminoAcid::Unknown;
}

}  // namespace protproj
