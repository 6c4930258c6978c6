#include "protproj/structure.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <memory>
#include <sstream>
#include <tuple>
#include <utility>

#include <expat.h>
#include <zlib.h>

#include "protproj/error.hpp"

namespace protproj {

namespace {

bool is_gzip(std::string_view bytes) {
  return bytes.size() >= 2 && static_cast<unsigned char>(bytes[0]) == 0x1f &&
         static_cast<unsigned char>(bytes[1]) == 0x8b;
}

std::string gunzip(std::string_view bytes) {
  z_stream zs{};
  if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK)
    fail(ErrorCode::Io, "cannot initialise zlib");
  std::unique_ptr<z_stream, int (*)(z_stream*)> guard(&zs, inflateEnd);

  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(bytes.data()));
  zs.avail_in = static_cast<uInt>(bytes.size());
  std::string out;
  char buf[1 << 16];
  int ret = Z_OK;
  while (ret != Z_STREAM_END) {
    zs.next_out = reinterpret_cast<Bytef*>(buf);
    zs.avail_out = sizeof buf;
    ret = inflate(&zs, Z_NO_FLUSH);
    if (ret != Z_OK && ret != Z_STREAM_END)
      fail(ErrorCode::MalformedXml, "corrupt gzip stream");
    out.append(buf, sizeof buf - zs.avail_out);
    if (ret == Z_OK && zs.avail_in == 0 && zs.avail_out != 0)
      fail(ErrorCode::MalformedXml, "truncated gzip stream");
  }
  return out;
}

std::string_view local_name(const XML_Char* name) {
  std::string_view s(name);
  if (auto colon = s.rfind(':'); colon != std::string_view::npos)
    s.remove_prefix(colon + 1);
  return s;
}

// Text of one atom_site child element; nullopt when absent or xsi:nil.
using Field = std::optional<std::string>;

struct RawAtomSite {
  Field id, group_pdb, cartn_x, cartn_y, cartn_z;
  Field auth_asym_id, label_asym_id, auth_seq_id, label_seq_id;
  Field auth_comp_id, label_comp_id, auth_atom_id, label_atom_id;
  Field label_alt_id, occupancy, model_num, ins_code;
  bool has_label_seq_id = false;
};

Field RawAtomSite::*field_slot(std::string_view name) {
  static const std::map<std::string_view, Field RawAtomSite::*> slots = {
      {"group_PDB", &RawAtomSite::group_pdb},
      {"Cartn_x", &RawAtomSite::cartn_x},
      {"Cartn_y", &RawAtomSite::cartn_y},
      {"Cartn_z", &RawAtomSite::cartn_z},
      {"auth_asym_id", &RawAtomSite::auth_asym_id},
      {"label_asym_id", &RawAtomSite::label_asym_id},
      {"auth_seq_id", &RawAtomSite::auth_seq_id},
      {"label_seq_id", &RawAtomSite::label_seq_id},
      {"auth_comp_id", &RawAtomSite::auth_comp_id},
      {"label_comp_id", &RawAtomSite::label_comp_id},
      {"auth_atom_id", &RawAtomSite::auth_atom_id},
      {"label_atom_id", &RawAtomSite::label_atom_id},
      {"label_alt_id", &RawAtomSite::label_alt_id},
      {"occupancy", &RawAtomSite::occupancy},
      {"pdbx_PDB_model_num", &RawAtomSite::model_num},
      {"pdbx_PDB_ins_code", &RawAtomSite::ins_code},
  };
  auto it = slots.find(name);
  return it == slots.end() ? nullptr : it->second;
}

// Collects <atom_site> elements (any namespace prefix) with expat.
class AtomSiteReader {
 public:
  std::vector<RawAtomSite> read(std::string_view xml) {
    std::unique_ptr<std::remove_pointer_t<XML_Parser>, void (*)(XML_Parser)> parser(
        XML_ParserCreate(nullptr), XML_ParserFree);
    if (!parser)
      fail(ErrorCode::Io, "cannot create XML parser");
    XML_SetUserData(parser.get(), this);
    XML_SetElementHandler(parser.get(), &AtomSiteReader::on_start, &AtomSiteReader::on_end);
    XML_SetCharacterDataHandler(parser.get(), &AtomSiteReader::on_text);

    constexpr std::size_t kChunk = 1 << 20;
    std::size_t pos = 0;
    do {
      const std::size_t n = std::min(kChunk, xml.size() - pos);
      const bool last = pos + n == xml.size();
      if (XML_Parse(parser.get(), xml.data() + pos, static_cast<int>(n), last) ==
          XML_STATUS_ERROR) {
        std::ostringstream msg;
        msg << XML_ErrorString(XML_GetErrorCode(parser.get())) << " at line "
            << XML_GetCurrentLineNumber(parser.get());
        fail(ErrorCode::MalformedXml, msg.str());
      }
      pos += n;
    } while (pos < xml.size());
    return std::move(sites_);
  }

 private:
  static void on_start(void* self, const XML_Char* name, const XML_Char** attrs) {
    static_cast<AtomSiteReader*>(self)->start(local_name(name), attrs);
  }
  static void on_end(void* self, const XML_Char* name) {
    static_cast<AtomSiteReader*>(self)->end(local_name(name));
  }
  static void on_text(void* self, const XML_Char* s, int len) {
    auto* r = static_cast<AtomSiteReader*>(self);
    if (r->slot_)
      r->text_.append(s, static_cast<std::size_t>(len));
  }

  void start(std::string_view name, const XML_Char** attrs) {
    ++depth_;
    if (site_depth_ == 0) {
      if (name == "atom_site") {
        site_depth_ = depth_;
        current_ = RawAtomSite{};
        for (auto a = attrs; *a; a += 2)
          if (local_name(a[0]) == "id")
            current_.id = a[1];
      }
      return;
    }
    if (depth_ != site_depth_ + 1)
      return;
    if (name == "label_seq_id")
      current_.has_label_seq_id = true;
    slot_ = field_slot(name);
    nil_ = false;
    text_.clear();
    for (auto a = attrs; *a; a += 2)
      if (local_name(a[0]) == "nil" && std::string_view(a[1]) == "true")
        nil_ = true;
  }

  void end(std::string_view name) {
    if (site_depth_ != 0 && depth_ == site_depth_ + 1 && slot_) {
      if (!nil_)
        current_.*slot_ = trim(text_);
      slot_ = nullptr;
    } else if (depth_ == site_depth_ && name == "atom_site") {
      sites_.push_back(std::move(current_));
      site_depth_ = 0;
    }
    --depth_;
  }

  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
      return {};
    return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
  }

  std::vector<RawAtomSite> sites_;
  RawAtomSite current_;
  int depth_ = 0;
  int site_depth_ = 0;
  Field RawAtomSite::*slot_ = nullptr;
  bool nil_ = false;
  std::string text_;
};

// mmCIF placeholders for "missing" and "inapplicable".
bool is_placeholder(const Field& f) {
  return !f || f->empty() || *f == "." || *f == "?";
}

const Field& first_present(const Field& a, const Field& b) {
  return is_placeholder(a) ? b : a;
}

std::string site_label(const RawAtomSite& s) {
  return "atom_site " + s.id.value_or("(no id)");
}

double parse_real(const Field& f, const RawAtomSite& site, std::string_view what) {
  double value = 0.0;
  if (!is_placeholder(f)) {
    const char* b = f->data();
    const char* e = b + f->size();
    auto [p, ec] = std::from_chars(b, e, value);
    if (ec == std::errc() && p == e && std::isfinite(value))
      return value;
  }
  fail(ErrorCode::MalformedXml, site_label(site) + ": bad or missing " + std::string(what));
}

int parse_int(const Field& f, const RawAtomSite& site, std::string_view what) {
  int value = 0;
  if (!is_placeholder(f)) {
    const char* b = f->data();
    const char* e = b + f->size();
    auto [p, ec] = std::from_chars(b, e, value);
    if (ec == std::errc() && p == e)
      return value;
  }
  fail(ErrorCode::MalformedXml, site_label(site) + ": bad or missing " + std::string(what));
}

bool is_polymer(const RawAtomSite& s) {
  if (s.has_label_seq_id)
    return !is_placeholder(s.label_seq_id);
  return !s.group_pdb || *s.group_pdb == "ATOM";
}

struct Atom {
  std::string name;
  Vec3 position;
  double occupancy;
  std::optional<char> alt_loc;
};

struct ResidueKey {
  int model;
  std::string chain;
  int seq;
  std::string ins_code;
  std::string comp;

  auto operator<=>(const ResidueKey&) const = default;
};

ResidueRecord make_record(const ResidueKey& key, AminoAcid aa) {
  ResidueRecord r;
  r.chain_id = key.chain;
  r.seq_num = key.seq;
  r.amino_acid = aa;
  r.model_num = key.model;
  return r;
}

// One record per CA alternate location, or a single centroid record.
void emit_residue(const ResidueKey& key, AminoAcid aa, std::vector<Atom>& atoms,
                  std::vector<ResidueRecord>& out) {
  bool has_ca = false;
  for (const Atom& a : atoms) {
    if (a.name != "CA")
      continue;
    has_ca = true;
    ResidueRecord r = make_record(key, aa);
    r.position = a.position;
    r.occupancy = a.occupancy;
    r.alt_loc = a.alt_loc;
    out.push_back(std::move(r));
  }
  if (has_ca)
    return;

  // Centroid over the shared atoms plus the first alternate location.
  std::optional<char> first_alt;
  for (const Atom& a : atoms)
    if (a.alt_loc && (!first_alt || *a.alt_loc < *first_alt))
      first_alt = a.alt_loc;
  std::vector<Vec3> points;
  double occupancy = 0.0;
  for (const Atom& a : atoms) {
    if (a.alt_loc && a.alt_loc != first_alt)
      continue;
    points.push_back(a.position);
    occupancy = std::max(occupancy, a.occupancy);
  }
  // Summation order fixed so atom order in the file cannot change the bits.
  std::sort(points.begin(), points.end());
  Vec3 sum{};
  for (const Vec3& p : points)
    for (int i = 0; i < 3; ++i)
      sum[i] += p[i];
  ResidueRecord r = make_record(key, aa);
  for (int i = 0; i < 3; ++i)
    r.position[i] = sum[i] / static_cast<double>(points.size());
  r.occupancy = occupancy;
  r.alt_loc = first_alt;
  out.push_back(std::move(r));
}

auto canonical_tuple(const ResidueRecord& r) {
  return std::tie(r.chain_id, r.seq_num, r.model_num, r.alt_loc, r.amino_acid, r.occupancy,
                  r.position);
}

}  // namespace

bool canonical_less(const ResidueRecord& a, const ResidueRecord& b) {
  return canonical_tuple(a) < canonical_tuple(b);
}

ProteinStructure parse_structure(std::string_view bytes, std::string id) {
  std::string inflated;
  if (is_gzip(bytes)) {
    inflated = gunzip(bytes);
    bytes = inflated;
  }
  if (bytes.empty())
    fail(ErrorCode::MalformedXml, "empty input");

  std::vector<RawAtomSite> sites = AtomSiteReader().read(bytes);
  if (sites.empty())
    fail(ErrorCode::NoAtomSites, "no atom_site records in " + id);

  ProteinStructure structure;
  structure.id = std::move(id);
  structure.stats.atom_sites = sites.size();

  std::map<ResidueKey, std::vector<Atom>> residues;
  for (const RawAtomSite& s : sites) {
    if (!is_polymer(s)) {
      ++structure.stats.non_polymer_atoms;
      continue;
    }
    ResidueKey key;
    key.model = is_placeholder(s.model_num) ? 1 : parse_int(s.model_num, s, "pdbx_PDB_model_num");
    key.chain = first_present(s.auth_asym_id, s.label_asym_id).value_or("");
    key.seq = parse_int(first_present(s.auth_seq_id, s.label_seq_id), s, "residue number");
    key.ins_code = is_placeholder(s.ins_code) ? "" : *s.ins_code;
    key.comp = first_present(s.auth_comp_id, s.label_comp_id).value_or("");

    Atom atom;
    atom.name = first_present(s.auth_atom_id, s.label_atom_id).value_or("");
    atom.position = {parse_real(s.cartn_x, s, "Cartn_x"), parse_real(s.cartn_y, s, "Cartn_y"),
                     parse_real(s.cartn_z, s, "Cartn_z")};
    atom.occupancy = is_placeholder(s.occupancy) ? 1.0 : parse_real(s.occupancy, s, "occupancy");
    if (!is_placeholder(s.label_alt_id))
      atom.alt_loc = s.label_alt_id->front();
    residues[std::move(key)].push_back(std::move(atom));
  }

  for (auto& [key, atoms] : residues) {
    const AminoAcid aa = amino_acid_from_code(key.comp);
    if (!is_standard(aa)) {
      ++structure.stats.unknown_residues;
      continue;
    }
    emit_residue(key, aa, atoms, structure.residues);
  }
  std::sort(structure.residues.begin(), structure.residues.end(), canonical_less);
  return structure;
}

ProteinStructure parse_structure(std::istream& input, std::string id) {
  std::string bytes{std::istreambuf_iterator<char>(input), std::istreambuf_iterator<char>()};
  if (input.bad())
    fail(ErrorCode::Io, "read error for " + id);
  return parse_structure(std::string_view(bytes), std::move(id));
}

std::string protein_id_from_path(const std::filesystem::path& path) {
  std::string name = path.filename().string();
  name = name.substr(0, name.find('.'));
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return name;
}

ProteinStructure read_structure_file(const std::filesystem::path& path,
                                     std::optional<std::string> id) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    fail(ErrorCode::Io, "cannot open " + path.string());
  ProteinStructure s = parse_structure(in, id ? *id : protein_id_from_path(path));
  s.source_path = path.string();
  return s;
}

ProteinStructure deduplicate(const ProteinStructure& structure) {
  ProteinStructure out;
  out.id = structure.id;
  out.source_path = structure.source_path;
  out.stats = structure.stats;

  // Best record per (chain_id, seq_num).
  auto better = [](const ResidueRecord& a, const ResidueRecord& b) {
    if (a.occupancy != b.occupancy)
      return a.occupancy > b.occupancy;
    return canonical_less(a, b);
  };
  std::map<std::pair<std::string, int>, const ResidueRecord*> best;
  for (const ResidueRecord& r : structure.residues) {
    if (r.model_num != 1 || !is_standard(r.amino_acid))
      continue;
    auto [it, inserted] = best.try_emplace({r.chain_id, r.seq_num}, &r);
    if (!inserted && better(r, *it->second))
      it->second = &r;
  }
  out.residues.reserve(best.size());
  for (const auto& [key, r] : best)
    out.residues.push_back(*r);
  return out;
}

}  // namespace protproj
