// Bijective amino acid <-> RGB palette.

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "protproj/amino_acid.hpp"

namespace protproj {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  auto operator<=>(const Rgb&) const = default;
};

inline constexpr Rgb kBackground{0, 0, 0};

// 0xRRGGBB
constexpr Rgb rgb_from_code(std::uint32_t code) {
  return Rgb{static_cast<std::uint8_t>((code >> 16) & 0xFF),
             static_cast<std::uint8_t>((code >> 8) & 0xFF),
             static_cast<std::uint8_t>(code & 0xFF)};
}

constexpr std::uint32_t code_from_rgb(Rgb c) {
  return (std::uint32_t{c.r} << 16) | (std::uint32_t{c.g} << 8) | std::uint32_t{c.b};
}

class AminoAcidPalette {
 public:
  using CodeTable = std::array<std::uint32_t, kStandardAminoAcidCount>;

  // Built-in table. Alanine, glycine and lysine carry the published codes
  // 128, 65280 and 8421376; the other seventeen are fixed here.
  static AminoAcidPalette default_palette();

  // Validates that every code is a nonzero 24-bit value and that no two
  // amino acids share one. Throws Error{InvalidArgument}.
  static AminoAcidPalette from_codes(const CodeTable& codes);

  // Accepts the same shape `to_json` produces (an "entries" array of
  // {"amino_acid", "code"} objects covering all twenty amino acids).
  static AminoAcidPalette from_json(const nlohmann::json& doc);

  std::uint32_t code(AminoAcid aa) const;  // throws Error{UnknownAminoAcid}
  Rgb encode(AminoAcid aa) const;          // throws Error{UnknownAminoAcid}
  std::optional<AminoAcid> decode(Rgb color) const;  // nullopt: not in palette

  const CodeTable& codes() const { return codes_; }

  // FNV-1a 64 over the canonical "ALA=000080;ARG=..." table, hex encoded.
  std::string fingerprint() const;

  nlohmann::json to_json() const;

  bool operator==(const AminoAcidPalette&) const = default;

 private:
  explicit AminoAcidPalette(const CodeTable& codes) : codes_(codes) {}

  CodeTable codes_;
};

}  // namespace protproj
