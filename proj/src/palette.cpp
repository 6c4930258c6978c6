#include "protproj/palette.hpp"

#include <cstdio>
#include <set>

#include "protproj/error.hpp"
#include "protproj/hashing.hpp"

namespace protproj {

namespace {

// Sixteen of these are the classic VGA/HTML named colors, which the three
// published codes (navy, lime, olive) already belong to.
constexpr AminoAcidPalette::CodeTable kDefaultCodes = {
    0x000080,  // ALA navy (128)
    0x0000FF,  // ARG blue
    0x008000,  // ASN green
    0x008080,  // ASP teal
    0xFFFF00,  // CYS yellow
    0x00FFFF,  // GLN aqua
    0x800000,  // GLU maroon
    0x00FF00,  // GLY lime (65280)
    0x800080,  // HIS purple
    0xFF0000,  // ILE red
    0xFF00FF,  // LEU fuchsia
    0x808000,  // LYS olive (8421376)
    0x808080,  // MET gray
    0xC0C0C0,  // PHE silver
    0xFFFFFF,  // PRO white
    0xFF8000,  // SER orange
    0x0080FF,  // THR azure
    0x80FF00,  // TRP chartreuse
    0xFF0080,  // TYR rose
    0x00FF80,  // VAL spring green
};

std::string hex_code(std::uint32_t code) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%06X", static_cast<unsigned>(code));
  return buf;
}

}  // namespace

AminoAcidPalette AminoAcidPalette::default_palette() {
  return AminoAcidPalette(kDefaultCodes);
}

AminoAcidPalette AminoAcidPalette::from_codes(const CodeTable& codes) {
  std::set<std::uint32_t> seen;
  for (std::size_t i = 0; i < codes.size(); ++i) {
    const std::string name(three_letter_code(static_cast<AminoAcid>(i)));
    if (codes[i] == 0)
      fail(ErrorCode::InvalidArgument, name + " uses the reserved background color");
    if (codes[i] > 0xFFFFFF)
      fail(ErrorCode::InvalidArgument, name + " code exceeds 24 bits");
    if (!seen.insert(codes[i]).second)
      fail(ErrorCode::InvalidArgument, name + " shares its color with another amino acid");
  }
  return AminoAcidPalette(codes);
}

AminoAcidPalette AminoAcidPalette::from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array())
    fail(ErrorCode::InvalidArgument, "palette JSON needs an \"entries\" array");
  CodeTable codes{};
  std::array<bool, kStandardAminoAcidCount> present{};
  for (const auto& e : doc["entries"]) {
    if (!e.is_object() || !e.contains("amino_acid") || !e.contains("code") ||
        !e["amino_acid"].is_string() || !e["code"].is_number_unsigned())
      fail(ErrorCode::InvalidArgument, "palette entry needs amino_acid and unsigned code");
    const AminoAcid aa = amino_acid_from_code(e["amino_acid"].get<std::string>());
    if (!is_standard(aa))
      fail(ErrorCode::InvalidArgument,
           "unknown amino acid " + e["amino_acid"].get<std::string>());
    if (present[index_of(aa)])
      fail(ErrorCode::InvalidArgument, "duplicate palette entry " + std::string(three_letter_code(aa)));
    present[index_of(aa)] = true;
    codes[index_of(aa)] = e["code"].get<std::uint32_t>();
  }
  for (std::size_t i = 0; i < present.size(); ++i)
    if (!present[i])
      fail(ErrorCode::InvalidArgument,
           "palette is missing " + std::string(three_letter_code(static_cast<AminoAcid>(i))));
  return from_codes(codes);
}

std::uint32_t AminoAcidPalette::code(AminoAcid aa) const {
  if (!is_standard(aa))
    fail(ErrorCode::UnknownAminoAcid, "no color for a non-standard amino acid");
  return codes_[index_of(aa)];
}

Rgb AminoAcidPalette::encode(AminoAcid aa) const {
  return rgb_from_code(code(aa));
}

std::optional<AminoAcid> AminoAcidPalette::decode(Rgb color) const {
  const std::uint32_t c = code_from_rgb(color);
  for (std::size_t i = 0; i < codes_.size(); ++i)
    if (codes_[i] == c)
      return static_cast<AminoAcid>(i);
  return std::nullopt;
}

std::string AminoAcidPalette::fingerprint() const {
  std::string canonical;
  for (std::size_t i = 0; i < codes_.size(); ++i) {
    canonical += three_letter_code(static_cast<AminoAcid>(i));
    canonical += '=';
    canonical += hex_code(codes_[i]);
    canonical += ';';
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical)));
  return std::string("fnv1a64:") + buf;
}

nlohmann::json AminoAcidPalette::to_json() const {
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t i = 0; i < codes_.size(); ++i) {
    const Rgb c = rgb_from_code(codes_[i]);
    entries.push_back({{"amino_acid", three_letter_code(static_cast<AminoAcid>(i))},
                       {"code", codes_[i]},
                       {"hex", "#" + hex_code(codes_[i])},
                       {"rgb", {c.r, c.g, c.b}}});
  }
  return {{"background", 0}, {"fingerprint", fingerprint()}, {"entries", entries}};
}

}  // namespace protproj
