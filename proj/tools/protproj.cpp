// protproj: command line front end for the protein projection toolkit.
//
// Exit codes: 0 success, 1 partial failures recorded, 2 fatal error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "protproj/dataset.hpp"
#include "protproj/error.hpp"
#include "protproj/grid.hpp"
#include "protproj/mutation.hpp"
#include "protproj/palette.hpp"
#include "protproj/png_io.hpp"
#include "protproj/render.hpp"
#include "protproj/structure.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace protproj;

namespace {

enum ExitCode { kOk = 0, kPartial = 1, kFatal = 2 };

struct Options {
  std::string format = "text";
  fs::path out = ".";
  std::uint64_t seed = 0;
  double prob = 0.05;
  int size = 299;
  int gutter = 4;
  unsigned jobs = 1;
  std::string palette_file;
  double fraction = 0.2;
  std::vector<std::string> inputs;
  std::string inputs_list;
  std::string manifest;
  std::string manifest_out;
};

AminoAcidPalette load_palette(const Options& o) {
  if (o.palette_file.empty())
    return AminoAcidPalette::default_palette();
  std::ifstream in(o.palette_file);
  if (!in)
    fail(ErrorCode::Io, "cannot open " + o.palette_file);
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded())
    fail(ErrorCode::InvalidArgument, "palette file is not JSON");
  return AminoAcidPalette::from_json(doc);
}

RenderConfig render_config(const Options& o) {
  RenderConfig cfg;
  cfg.target_size = o.size;
  cfg.gutter_px = o.gutter;
  validate(cfg);
  return cfg;
}

void emit(const Options& o, const json& doc, const std::string& text) {
  if (o.format == "json")
    std::cout << doc.dump(2) << "\n";
  else
    std::cout << text;
}

int run_ingest(const Options& o) {
  const ProteinStructure raw = read_structure_file(o.inputs.at(0));
  const ProteinStructure clean = deduplicate(raw);

  std::map<std::string, std::size_t> chains;
  std::map<std::string, std::size_t> composition;
  for (const ResidueRecord& r : clean.residues) {
    ++chains[r.chain_id];
    ++composition[std::string(three_letter_code(r.amino_acid))];
  }
  json doc = {{"protein_id", clean.id},
              {"source", clean.source_path},
              {"atom_sites", raw.stats.atom_sites},
              {"non_polymer_atoms", raw.stats.non_polymer_atoms},
              {"unknown_residues", raw.stats.unknown_residues},
              {"raw_records", raw.residues.size()},
              {"residues", clean.residues.size()},
              {"chains", chains},
              {"composition", composition}};
  std::ostringstream text;
  text << clean.id << ": " << clean.residues.size() << " residues (" << raw.residues.size()
       << " raw records, " << raw.stats.unknown_residues << " unknown dropped, "
       << raw.stats.non_polymer_atoms << " non-polymer atoms skipped)\n";
  for (const auto& [chain, n] : chains)
    text << "  chain " << (chain.empty() ? "-" : chain) << ": " << n << "\n";
  emit(o, doc, text.str());
  return kOk;
}

struct Prepared {
  ProteinStructure structure;
  GridTransform transform;
};

Prepared prepare(const std::string& path) {
  Prepared p{deduplicate(read_structure_file(path)), {}};
  p.transform = fit_transform(p.structure);
  return p;
}

json layout_json(const MultiviewLayout& l) {
  auto rect = [](const PanelRect& r) {
    return json{{"x", r.x}, {"y", r.y}, {"width", r.width}, {"height", r.height}};
  };
  return {{"xy", rect(l.xy)}, {"xz", rect(l.xz)}, {"yz", rect(l.yz)},
          {"scale", std::to_string(l.scale_num) + "/" + std::to_string(l.scale_den)}};
}

int run_render(const Options& o) {
  const Prepared p = prepare(o.inputs.at(0));
  const RenderResult r =
      render_protein_detailed(p.structure, load_palette(o), p.transform, render_config(o));
  fs::create_directories(o.out);
  const fs::path image = o.out / (p.structure.id + "_real.png");
  write_png(image, r.image);
  emit(o,
       {{"protein_id", p.structure.id},
        {"image", image.string()},
        {"residues", p.structure.residues.size()},
        {"layout", layout_json(r.layout)}},
       image.string() + "\n");
  return kOk;
}

int run_mutate(const Options& o) {
  const Prepared p = prepare(o.inputs.at(0));
  const MutationSpec spec{o.prob, derive_protein_seed(o.seed, p.structure.id)};
  const MutationResult m = mutate(p.structure, spec);
  const RenderResult r =
      render_protein_detailed(m.structure, load_palette(o), p.transform, render_config(o));

  fs::create_directories(o.out);
  const fs::path image = o.out / (p.structure.id + "_mutated.png");
  const fs::path log_path = o.out / (p.structure.id + "_mutated.json");
  json log = to_json(m.log);
  log["protein_id"] = p.structure.id;
  log["seed"] = spec.seed;
  log["probability"] = spec.probability;
  log["rng_algorithm"] = kRngAlgorithm;
  write_png(image, r.image);
  write_file_atomic(log_path, log.dump(2) + "\n");

  std::ostringstream text;
  text << image.string() << "\n"
       << log_path.string() << " (" << m.log.entries.size() << " of " << m.log.total_residues
       << " residues mutated, seed " << spec.seed << ")\n";
  emit(o,
       {{"protein_id", p.structure.id},
        {"image", image.string()},
        {"log", log_path.string()},
        {"mutated", m.log.entries.size()},
        {"total_residues", m.log.total_residues},
        {"seed", spec.seed}},
       text.str());
  return kOk;
}

int run_build(const Options& o) {
  std::vector<fs::path> inputs(o.inputs.begin(), o.inputs.end());
  if (!o.inputs_list.empty()) {
    std::ifstream in(o.inputs_list);
    if (!in)
      fail(ErrorCode::Io, "cannot open " + o.inputs_list);
    for (std::string line; std::getline(in, line);)
      if (!line.empty() && line.front() != '#')
        inputs.emplace_back(line);
  }
  BuildConfig cfg;
  cfg.output_dir = o.out;
  cfg.seed = o.seed;
  cfg.probability = o.prob;
  cfg.render = render_config(o);
  cfg.palette = load_palette(o);
  cfg.jobs = o.jobs;
  const DatasetManifest m = build_dataset(inputs, cfg);

  std::ostringstream text;
  text << (o.out / kManifestFileName).string() << ": " << m.entries.size() << " images, "
       << m.failures.size() << " failures\n";
  for (const BuildFailure& f : m.failures)
    text << "  failed " << f.source_path << ": " << f.error << "\n";
  emit(o, to_json(stats(m)), text.str());
  if (m.entries.empty())
    return kFatal;
  return m.failures.empty() ? kOk : kPartial;
}

int run_split(const Options& o) {
  const DatasetManifest m = split(read_manifest(o.manifest), o.fraction, o.seed);
  const fs::path target = o.manifest_out.empty() ? fs::path(o.manifest) : fs::path(o.manifest_out);
  write_manifest(target, m);
  const StatsReport s = stats(m);
  emit(o, to_json(s),
       target.string() + ": train " + std::to_string(s.train) + ", test " +
           std::to_string(s.test) + "\n");
  return kOk;
}

int run_stats(const Options& o) {
  const StatsReport s = stats(read_manifest(o.manifest));
  emit(o, to_json(s), to_text(s));
  return kOk;
}

int run_palette(const Options& o) {
  const AminoAcidPalette palette = load_palette(o);
  const json doc = palette.to_json();
  std::ostringstream text;
  for (const auto& e : doc["entries"])
    text << e["amino_acid"].get<std::string>() << "  " << e["hex"].get<std::string>() << "  "
         << e["code"].get<std::uint32_t>() << "\n";
  text << "fingerprint " << palette.fingerprint() << "\n";
  emit(o, doc, text.str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Render protein structures as multiview projection images and build "
               "real/mutated classification datasets."};
  app.require_subcommand(1);
  Options o;

  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();
  };
  auto add_render_flags = [&](CLI::App* cmd) {
    cmd->add_option("--size", o.size, "Output image edge in pixels")->capture_default_str();
    cmd->add_option("--gutter", o.gutter, "Pixels between panels")->capture_default_str();
    cmd->add_option("--palette", o.palette_file, "Palette override (JSON, same shape as `palette --format json`)");
  };
  auto add_mutation_flags = [&](CLI::App* cmd) {
    cmd->add_option("--seed", o.seed, "Dataset seed")->capture_default_str();
    cmd->add_option("--prob", o.prob, "Per-residue mutation probability")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
  };

  auto* ingest = app.add_subcommand("ingest", "Parse and validate one PDBx/XML file");
  ingest->add_option("file", o.inputs, "Structure file")->required()->expected(1);
  add_format(ingest);

  auto* render = app.add_subcommand("render", "Render one structure to <id>_real.png");
  render->add_option("file", o.inputs, "Structure file")->required()->expected(1);
  render->add_option("--out", o.out, "Output directory")->capture_default_str();
  add_render_flags(render);
  add_format(render);

  auto* mut = app.add_subcommand("mutate", "Write <id>_mutated.png and its mutation log");
  mut->add_option("file", o.inputs, "Structure file")->required()->expected(1);
  mut->add_option("--out", o.out, "Output directory")->capture_default_str();
  add_render_flags(mut);
  add_mutation_flags(mut);
  add_format(mut);

  auto* build = app.add_subcommand("build", "Build a paired real/mutated dataset");
  build->add_option("files", o.inputs, "Structure files");
  build->add_option("--inputs", o.inputs_list, "File with one structure path per line");
  build->add_option("--out", o.out, "Output directory")->required();
  build->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str();
  add_render_flags(build);
  add_mutation_flags(build);
  add_format(build);

  auto* split_cmd = app.add_subcommand("split", "Assign train/test partitions by protein");
  split_cmd->add_option("manifest", o.manifest, "manifest.json")->required();
  split_cmd->add_option("--fraction", o.fraction, "Test fraction")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  split_cmd->add_option("--seed", o.seed, "Split seed")->capture_default_str();
  split_cmd->add_option("--out", o.manifest_out, "Write here instead of in place");
  add_format(split_cmd);

  auto* stats_cmd = app.add_subcommand("stats", "Summarise a manifest");
  stats_cmd->add_option("manifest", o.manifest, "manifest.json")->required();
  add_format(stats_cmd);

  auto* palette = app.add_subcommand("palette", "Dump the amino acid color table");
  palette->add_option("--palette", o.palette_file, "Palette override to validate and print");
  add_format(palette);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kFatal;
  }

  try {
    if (*ingest) return run_ingest(o);
    if (*render) return run_render(o);
    if (*mut) return run_mutate(o);
    if (*build) return run_build(o);
    if (*split_cmd) return run_split(o);
    if (*stats_cmd) return run_stats(o);
    if (*palette) return run_palette(o);
  } catch (const std::exception& e) {
    std::cerr << "protproj: " << e.what() << "\n";
    return kFatal;
  }
  return kFatal;
}
