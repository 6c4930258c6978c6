// The twenty standard amino acids and their three-letter names.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace protproj {

// Alphabetical by three-letter code; the numeric order is the canonical
// order used wherever amino acids are enumerated (palettes, mutation draws).
enum class AminoAcid : std::uint8_t {
  Ala, Arg, Asn, Asp, Cys, Gln, Glu, Gly, His, Ile,
  Leu, Lys, Met, Phe, Pro, Ser, Thr, Trp, Tyr, Val,
  Unknown,
};

inline constexpr std::size_t kStandardAminoAcidCount = 20;

inline constexpr std::array<AminoAcid, kStandardAminoAcidCount> kStandardAminoAcids = {
    AminoAcid::Ala, AminoAcid::Arg, AminoAcid::Asn, AminoAcid::Asp, AminoAcid::Cys,
    AminoAcid::Gln, AminoAcid::Glu, AminoAcid::Gly, AminoAcid::His, AminoAcid::Ile,
    AminoAcid::Leu, AminoAcid::Lys, AminoAcid::Met, AminoAcid::Phe, AminoAcid::Pro,
    AminoAcid::Ser, AminoAcid::Thr, AminoAcid::Trp, AminoAcid::Tyr, AminoAcid::Val,
};

constexpr bool is_standard(AminoAcid aa) { return aa != AminoAcid::Unknown; }

constexpr std::size_t index_of(AminoAcid aa) { return static_cast<std::size_t>(aa); }

// "ALA", "ARG", ... ; "UNK" for Unknown.
std::string_view three_letter_code(AminoAcid aa);

// Case-sensitive match against the PDB component ids; anything else is Unknown.
AminoAcid amino_acid_from_code(std::string_view code);

}  // namespace protproj
