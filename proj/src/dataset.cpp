#include "protproj/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "protproj/error.hpp"
#include "protproj/png_io.hpp"
#include "protproj/structure.hpp"

namespace protproj {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view label_name(Label label) {
  return label == Label::Real ? "real" : "mutated";
}

std::string_view partition_name(Partition partition) {
  return partition == Partition::Train ? "train" : "test";
}

namespace {

constexpr std::string_view kSeedDerivation = "splitmix64(dataset_seed ^ fnv1a64(protein_id))";
constexpr std::string_view kReplacementRule = "uniform over the other 19 amino acids";
constexpr std::string_view kSplitRounding = "round half up, clamped to [1, n-1] proteins";

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Label parse_label(const std::string& s) {
  if (s == "real")
    return Label::Real;
  if (s == "mutated")
    return Label::Mutated;
  fail(ErrorCode::InvalidManifest, "unknown label " + s);
}

Partition parse_partition(const std::string& s) {
  if (s == "train")
    return Partition::Train;
  if (s == "test")
    return Partition::Test;
  fail(ErrorCode::InvalidManifest, "unknown split " + s);
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

void check_writable(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    fail(ErrorCode::OutputNotWritable, "cannot create " + dir.string());
  const fs::path probe = dir / ".protproj-write-test";
  {
    std::ofstream out(probe);
    if (!out)
      fail(ErrorCode::OutputNotWritable, "cannot write into " + dir.string());
  }
  fs::remove(probe, ec);
}

struct WorkItem {
  fs::path source;
  std::string protein_id;
};

struct WorkResult {
  std::vector<ManifestEntry> entries;
  std::optional<BuildFailure> failure;
};

std::vector<ManifestEntry> build_one(const WorkItem& item, const BuildConfig& cfg) {
  const ProteinStructure structure =
      deduplicate(read_structure_file(item.source, item.protein_id));
  const GridTransform transform = fit_transform(structure);
  const RenderResult real = render_protein_detailed(structure, cfg.palette, transform, cfg.render);

  const MutationSpec spec{cfg.probability, derive_protein_seed(cfg.seed, item.protein_id)};
  const MutationResult mutant = mutate(structure, spec);
  const RenderResult fake =
      render_protein_detailed(mutant.structure, cfg.palette, transform, cfg.render);

  const std::string real_png = item.protein_id + "_real.png";
  const std::string fake_png = item.protein_id + "_mutated.png";
  const std::string log_file = item.protein_id + "_mutated.json";

  json log = to_json(mutant.log);
  log["protein_id"] = item.protein_id;
  log["seed"] = spec.seed;
  log["probability"] = spec.probability;
  log["rng_algorithm"] = kRngAlgorithm;

  write_png(cfg.output_dir / real_png, real.image);
  write_png(cfg.output_dir / fake_png, fake.image);
  write_file_atomic(cfg.output_dir / log_file, log.dump(2) + "\n");

  ManifestEntry r;
  r.protein_id = item.protein_id;
  r.label = Label::Real;
  r.image_path = real_png;
  r.source_path = item.source.string();
  r.residue_count = structure.residues.size();
  r.unknown_residues = structure.stats.unknown_residues;
  r.clamped_points = real.clamped_points;

  ManifestEntry m = r;
  m.label = Label::Mutated;
  m.image_path = fake_png;
  m.seed = spec.seed;
  m.mutation_log_path = log_file;
  m.mutated_residues = mutant.log.entries.size();
  m.clamped_points = fake.clamped_points;
  return {std::move(r), std::move(m)};
}

}  // namespace

void write_file_atomic(const fs::path& path, std::string_view bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      fail(ErrorCode::OutputNotWritable, "cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out)
      fail(ErrorCode::OutputNotWritable, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec)
    fail(ErrorCode::OutputNotWritable, "cannot move " + tmp.string() + " into place");
}

json to_json(const RenderConfig& cfg) {
  return {{"target_size", cfg.target_size},
          {"layout", "ThreePanel"},
          {"gutter_px", cfg.gutter_px},
          {"depth_rule", "NearestWins"},
          {"collision_tiebreak", "chain_id,seq_num"}};
}

RenderConfig render_config_from_json(const json& doc) {
  RenderConfig cfg;
  cfg.target_size = doc.at("target_size").get<int>();
  cfg.gutter_px = doc.at("gutter_px").get<int>();
  if (doc.value("layout", "ThreePanel") != "ThreePanel")
    fail(ErrorCode::InvalidManifest, "unsupported layout");
  if (doc.value("depth_rule", "NearestWins") != "NearestWins")
    fail(ErrorCode::InvalidManifest, "unsupported depth rule");
  return cfg;
}

json to_json(const DatasetManifest& manifest) {
  json entries = json::array();
  for (const ManifestEntry& e : manifest.entries) {
    entries.push_back({
        {"protein_id", e.protein_id},
        {"label", label_name(e.label)},
        {"image", e.image_path},
        {"source", e.source_path},
        {"residue_count", e.residue_count},
        {"seed", optional_json(e.seed)},
        {"mutation_log", optional_json(e.mutation_log_path)},
        {"mutated_residues", e.mutated_residues},
        {"unknown_residues", e.unknown_residues},
        {"clamped_points", e.clamped_points},
        {"split", e.partition ? json(partition_name(*e.partition)) : json(nullptr)},
    });
  }
  json failures = json::array();
  for (const BuildFailure& f : manifest.failures)
    failures.push_back({{"source", f.source_path}, {"error", f.error}});

  json split = nullptr;
  if (manifest.split)
    split = {{"test_fraction", manifest.split->test_fraction},
             {"seed", manifest.split->seed},
             {"rounding", kSplitRounding},
             {"unit", "protein (real and mutated images stay together)"}};

  const StatsReport s = stats(manifest);
  return {
      {"schema_version", kManifestSchemaVersion},
      {"version", manifest.version},
      {"created_at", manifest.created_at},
      {"palette_fingerprint", manifest.palette_fingerprint},
      {"render_config", to_json(manifest.render)},
      {"png_encoder", png_encoder_settings()},
      {"mutation",
       {{"probability", manifest.mutation.probability},
        {"seed", manifest.mutation.seed},
        {"rng_algorithm", kRngAlgorithm},
        {"seed_derivation", kSeedDerivation},
        {"replacement", kReplacementRule}}},
      {"split", split},
      {"entries", entries},
      {"failures", failures},
      {"summary",
       {{"real", s.real},
        {"mutated", s.mutated},
        {"failures", s.failures},
        {"train", s.train},
        {"test", s.test}}},
  };
}

DatasetManifest manifest_from_json(const json& doc) {
  try {
    if (doc.at("schema_version").get<int>() != kManifestSchemaVersion)
      fail(ErrorCode::InvalidManifest, "unsupported schema_version");
    DatasetManifest m;
    m.version = doc.at("version").get<std::string>();
    m.created_at = doc.value("created_at", "");
    m.palette_fingerprint = doc.at("palette_fingerprint").get<std::string>();
    m.render = render_config_from_json(doc.at("render_config"));
    m.mutation.probability = doc.at("mutation").at("probability").get<double>();
    m.mutation.seed = doc.at("mutation").at("seed").get<std::uint64_t>();
    for (const json& e : doc.at("entries")) {
      ManifestEntry entry;
      entry.protein_id = e.at("protein_id").get<std::string>();
      entry.label = parse_label(e.at("label").get<std::string>());
      entry.image_path = e.at("image").get<std::string>();
      entry.source_path = e.at("source").get<std::string>();
      entry.residue_count = e.at("residue_count").get<std::size_t>();
      if (!e.at("seed").is_null())
        entry.seed = e.at("seed").get<std::uint64_t>();
      if (!e.at("mutation_log").is_null())
        entry.mutation_log_path = e.at("mutation_log").get<std::string>();
      entry.mutated_residues = e.value("mutated_residues", std::size_t{0});
      entry.unknown_residues = e.value("unknown_residues", std::size_t{0});
      entry.clamped_points = e.value("clamped_points", std::size_t{0});
      if (e.contains("split") && !e.at("split").is_null())
        entry.partition = parse_partition(e.at("split").get<std::string>());
      m.entries.push_back(std::move(entry));
    }
    for (const json& f : doc.at("failures"))
      m.failures.push_back({f.at("source").get<std::string>(), f.at("error").get<std::string>()});
    if (doc.contains("split") && !doc.at("split").is_null())
      m.split = SplitSettings{doc.at("split").at("test_fraction").get<double>(),
                              doc.at("split").at("seed").get<std::uint64_t>()};
    return m;
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidManifest, e.what());
  }
}

void write_manifest(const fs::path& path, const DatasetManifest& manifest) {
  write_file_atomic(path, to_json(manifest).dump(2) + "\n");
}

DatasetManifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in)
    fail(ErrorCode::Io, "cannot open " + path.string());
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded())
    fail(ErrorCode::InvalidManifest, "not valid JSON: " + path.string());
  return manifest_from_json(doc);
}

DatasetManifest build_dataset(std::span<const fs::path> inputs, const BuildConfig& config) {
  if (inputs.empty())
    fail(ErrorCode::AllInputsFailed, "no input files");
  validate(config.render);
  validate(MutationSpec{config.probability, config.seed});
  check_writable(config.output_dir);

  // The lexicographically first source claims each protein id.
  std::vector<WorkItem> items;
  std::vector<BuildFailure> failures;
  {
    std::vector<fs::path> sorted(inputs.begin(), inputs.end());
    std::sort(sorted.begin(), sorted.end());
    std::set<std::string> claimed;
    for (const fs::path& p : sorted) {
      std::string id = protein_id_from_path(p);
      if (id.empty())
        failures.push_back({p.string(), "InvalidArgument: cannot derive a protein id"});
      else if (!claimed.insert(id).second)
        failures.push_back({p.string(), "InvalidArgument: duplicate protein id " + id});
      else
        items.push_back({p, std::move(id)});
    }
  }

  std::vector<WorkResult> results(items.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      try {
        results[i].entries = build_one(items[i], config);
      } catch (const std::exception& e) {
        results[i].failure = BuildFailure{items[i].source.string(), e.what()};
      }
    }
  };
  {
    const unsigned jobs = std::clamp<unsigned>(config.jobs, 1, std::max<std::size_t>(items.size(), 1));
    std::vector<std::jthread> pool;
    for (unsigned j = 1; j < jobs; ++j)
      pool.emplace_back(worker);
    worker();
  }

  DatasetManifest manifest;
  manifest.created_at = utc_timestamp();
  manifest.palette_fingerprint = config.palette.fingerprint();
  manifest.render = config.render;
  manifest.mutation = MutationSpec{config.probability, config.seed};
  for (WorkResult& r : results) {
    for (ManifestEntry& e : r.entries)
      manifest.entries.push_back(std::move(e));
    if (r.failure)
      failures.push_back(std::move(*r.failure));
  }
  std::sort(manifest.entries.begin(), manifest.entries.end(), [](const auto& a, const auto& b) {
    return std::tie(a.protein_id, a.label) < std::tie(b.protein_id, b.label);
  });
  std::sort(failures.begin(), failures.end(), [](const auto& a, const auto& b) {
    return a.source_path < b.source_path;
  });
  manifest.failures = std::move(failures);

  for (const ManifestEntry& e : manifest.entries) {
    if (!fs::exists(config.output_dir / e.image_path))
      fail(ErrorCode::OutputNotWritable, "missing output " + e.image_path);
    if (e.mutation_log_path && !fs::exists(config.output_dir / *e.mutation_log_path))
      fail(ErrorCode::OutputNotWritable, "missing output " + *e.mutation_log_path);
  }
  write_manifest(config.output_dir / kManifestFileName, manifest);
  return manifest;
}

DatasetManifest split(DatasetManifest manifest, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    fail(ErrorCode::InvalidArgument, "test fraction must lie strictly between 0 and 1");

  std::vector<std::string> proteins;
  for (const ManifestEntry& e : manifest.entries)
    if (proteins.empty() || proteins.back() != e.protein_id)
      proteins.push_back(e.protein_id);
  std::sort(proteins.begin(), proteins.end());
  proteins.erase(std::unique(proteins.begin(), proteins.end()), proteins.end());
  const std::size_t n = proteins.size();
  if (n < 2)
    fail(ErrorCode::TooFewEntries, "need at least two proteins to split, have " + std::to_string(n));

  auto test_count = static_cast<std::size_t>(std::floor(static_cast<double>(n) * test_fraction + 0.5));
  test_count = std::clamp<std::size_t>(test_count, 1, n - 1);

  // Fisher-Yates with the same portable draws as the mutation generator.
  UnitDraws draws(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    auto j = static_cast<std::size_t>(draws.next() * static_cast<double>(i + 1));
    std::swap(proteins[i], proteins[std::min(j, i)]);
  }
  const std::set<std::string> test(proteins.begin(), proteins.begin() + static_cast<std::ptrdiff_t>(test_count));
  for (ManifestEntry& e : manifest.entries)
    e.partition = test.count(e.protein_id) ? Partition::Test : Partition::Train;
  manifest.split = SplitSettings{test_fraction, seed};
  return manifest;
}

StatsReport stats(const DatasetManifest& manifest) {
  StatsReport s;
  s.entries = manifest.entries.size();
  s.failures = manifest.failures.size();
  std::vector<std::size_t> sizes;
  for (const ManifestEntry& e : manifest.entries) {
    (e.label == Label::Real ? s.real : s.mutated)++;
    if (!e.partition)
      ++s.unassigned;
    else
      (*e.partition == Partition::Train ? s.train : s.test)++;
    s.total_residues += e.residue_count;
    s.mutated_residues += e.mutated_residues;
    s.clamped_points += e.clamped_points;
    if (e.label == Label::Real) {
      s.real_residues += e.residue_count;
      s.unknown_residues += e.unknown_residues;
      sizes.push_back(e.residue_count);
    }
  }
  if (!sizes.empty()) {
    std::sort(sizes.begin(), sizes.end());
    s.min_residues = sizes.front();
    s.max_residues = sizes.back();
    s.mean_residues = static_cast<double>(s.real_residues) / static_cast<double>(sizes.size());
    const std::size_t mid = sizes.size() / 2;
    s.median_residues = sizes.size() % 2 ? static_cast<double>(sizes[mid])
                                         : (static_cast<double>(sizes[mid - 1]) + sizes[mid]) / 2.0;
  }
  return s;
}

json to_json(const StatsReport& s) {
  return {
      {"entries", {{"total", s.entries}, {"real", s.real}, {"mutated", s.mutated}}},
      {"splits", {{"train", s.train}, {"test", s.test}, {"unassigned", s.unassigned}}},
      {"failures", s.failures},
      {"residues",
       {{"total", s.total_residues},
        {"real", s.real_residues},
        {"min", s.min_residues},
        {"max", s.max_residues},
        {"mean", s.mean_residues},
        {"median", s.median_residues},
        {"mutated", s.mutated_residues}}},
      {"clamped_points", s.clamped_points},
      {"unknown_residues", s.unknown_residues},
  };
}

std::string to_text(const StatsReport& s) {
  std::ostringstream out;
  out << "entries:           " << s.entries << " (real " << s.real << ", mutated " << s.mutated
      << ")\n"
      << "splits:            train " << s.train << ", test " << s.test << ", unassigned "
      << s.unassigned << "\n"
      << "failures:          " << s.failures << "\n"
      << "residues (all):    " << s.total_residues << "\n"
      << "residues (real):   " << s.real_residues << " (min " << s.min_residues << ", max "
      << s.max_residues << ", mean " << s.mean_residues << ", median " << s.median_residues
      << ")\n"
      << "mutated residues:  " << s.mutated_residues << "\n"
      << "clamped points:    " << s.clamped_points << "\n"
      << "unknown residues:  " << s.unknown_residues << "\n";
  return out.str();
}

}  // namespace protproj
