// Test-only helpers: PDBx/XML fixture builder, random structure generators
// and independent oracles. Nothing here calls into the code under test.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "protproj/structure.hpp"

namespace protproj::testing {

inline std::filesystem::path data_dir() { return PROTPROJ_TEST_DATA; }

inline std::filesystem::path standin_dir() {
  if (const char* real = std::getenv("PROTPROJ_FIXTURE_DIR"))
    return real;
  return data_dir() / "standin";
}

struct AtomSpec {
  std::string comp;
  std::string atom;
  std::string chain;
  int seq = 1;
  double x = 0, y = 0, z = 0;
  std::optional<std::string> alt;
  double occupancy = 1.0;
  int model = 1;
  bool polymer = true;
};

// Minimal PDBML document in the layout served by the PDB.
inline std::string pdbx_xml(const std::vector<AtomSpec>& atoms) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\" ?>\n"
         "<PDBx:datablock datablockName=\"TEST\" "
         "xmlns:PDBx=\"http://pdbml.pdb.org/schema/pdbx-v50.xsd\" "
         "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\">\n"
         "<PDBx:atom_siteCategory>\n";
  int id = 0;
  for (const AtomSpec& a : atoms) {
    out << "<PDBx:atom_site id=\"" << ++id << "\">\n"
        << "<PDBx:Cartn_x>" << a.x << "</PDBx:Cartn_x>\n"
        << "<PDBx:Cartn_y>" << a.y << "</PDBx:Cartn_y>\n"
        << "<PDBx:Cartn_z>" << a.z << "</PDBx:Cartn_z>\n"
        << "<PDBx:auth_asym_id>" << a.chain << "</PDBx:auth_asym_id>\n"
        << "<PDBx:auth_atom_id>" << a.atom << "</PDBx:auth_atom_id>\n"
        << "<PDBx:auth_comp_id>" << a.comp << "</PDBx:auth_comp_id>\n"
        << "<PDBx:auth_seq_id>" << a.seq << "</PDBx:auth_seq_id>\n"
        << "<PDBx:group_PDB>" << (a.polymer ? "ATOM" : "HETATM") << "</PDBx:group_PDB>\n";
    if (a.alt)
      out << "<PDBx:label_alt_id>" << *a.alt << "</PDBx:label_alt_id>\n";
    else
      out << "<PDBx:label_alt_id xsi:nil=\"true\" />\n";
    if (a.polymer)
      out << "<PDBx:label_seq_id>" << a.seq << "</PDBx:label_seq_id>\n";
    else
      out << "<PDBx:label_seq_id xsi:nil=\"true\" />\n";
    out << "<PDBx:occupancy>" << a.occupancy << "</PDBx:occupancy>\n"
        << "<PDBx:pdbx_PDB_model_num>" << a.model << "</PDBx:pdbx_PDB_model_num>\n"
        << "</PDBx:atom_site>\n";
  }
  out << "</PDBx:atom_siteCategory>\n</PDBx:datablock>\n";
  return out.str();
}

inline ResidueRecord residue(std::string chain, int seq, AminoAcid aa, Vec3 pos,
                             double occupancy = 1.0, std::optional<char> alt = std::nullopt,
                             int model = 1) {
  ResidueRecord r;
  r.chain_id = std::move(chain);
  r.seq_num = seq;
  r.amino_acid = aa;
  r.position = pos;
  r.occupancy = occupancy;
  r.alt_loc = alt;
  r.model_num = model;
  return r;
}

// Deduplicated structure with `count` residues spread over up to three
// chains, coordinates uniform in [-extent/2, extent/2) around `center`.
inline ProteinStructure random_structure(std::mt19937_64& rng, std::size_t count,
                                         double extent = 80.0, Vec3 center = {0, 0, 0}) {
  std::uniform_real_distribution<double> coord(-extent / 2, extent / 2);
  std::uniform_int_distribution<int> aa(0, 19);
  ProteinStructure s;
  s.id = "RAND";
  const char* chains[] = {"A", "B", "C"};
  for (std::size_t i = 0; i < count; ++i) {
    s.residues.push_back(residue(chains[i % 3], static_cast<int>(i / 3) + 1,
                                 static_cast<AminoAcid>(aa(rng)),
                                 {center[0] + coord(rng), center[1] + coord(rng),
                                  center[2] + coord(rng)}));
  }
  std::sort(s.residues.begin(), s.residues.end(), [](const auto& a, const auto& b) {
    return std::pair(a.chain_id, a.seq_num) < std::pair(b.chain_id, b.seq_num);
  });
  return s;
}

// Round half away from zero by explicit case analysis.
inline long long round_half_away_oracle(double v) {
  const double f = std::floor(std::fabs(v));
  const double frac = std::fabs(v) - f;
  const long long mag = static_cast<long long>(f) + (frac >= 0.5 ? 1 : 0);
  return v < 0 ? -mag : mag;
}

}  // namespace protproj::testing
