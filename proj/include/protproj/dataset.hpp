// Corpus orchestration: ingest -> render -> mutate, plus the manifest that
// describes the resulting labelled image set.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "protproj/mutation.hpp"
#include "protproj/palette.hpp"
#include "protproj/render.hpp"

namespace protproj {

inline constexpr int kManifestSchemaVersion = 1;
inline constexpr std::string_view kManifestFileName = "manifest.json";

enum class Label { Real, Mutated };
enum class Partition { Train, Test };

std::string_view label_name(Label label);
std::string_view partition_name(Partition partition);

struct ManifestEntry {
  std::string protein_id;
  Label label = Label::Real;
  std::string image_path;  // relative to the manifest directory
  std::string source_path;
  std::size_t residue_count = 0;
  std::optional<std::uint64_t> seed;            // mutated entries only
  std::optional<std::string> mutation_log_path;  // mutated entries only
  std::size_t mutated_residues = 0;
  std::size_t unknown_residues = 0;
  std::size_t clamped_points = 0;
  std::optional<Partition> partition;

  bool operator==(const ManifestEntry&) const = default;
};

struct BuildFailure {
  std::string source_path;
  std::string error;

  bool operator==(const BuildFailure&) const = default;
};

struct SplitSettings {
  double test_fraction = 0.2;
  std::uint64_t seed = 0;

  bool operator==(const SplitSettings&) const = default;
};

struct DatasetManifest {
  std::string version = "1.0";
  std::string created_at;  // excluded from reproducibility comparisons
  std::string palette_fingerprint;
  RenderConfig render;
  MutationSpec mutation;  // seed is the dataset seed; per-protein seeds are derived
  std::vector<ManifestEntry> entries;  // sorted by (protein_id, label)
  std::vector<BuildFailure> failures;  // sorted by source_path
  std::optional<SplitSettings> split;

  bool operator==(const DatasetManifest&) const = default;
};

struct BuildConfig {
  std::filesystem::path output_dir;
  std::uint64_t seed = 0;
  double probability = 0.05;
  RenderConfig render;
  AminoAcidPalette palette = AminoAcidPalette::default_palette();
  unsigned jobs = 1;
};

// Renders every input and its mutant into `output_dir` as <id>_real.png and
// <id>_mutated.png (+ <id>_mutated.json log), then writes manifest.json last.
// Per-input failures are recorded, never fatal. Entry order depends only on
// protein ids, not on scheduling, and reruns overwrite outputs with identical
// content.
//
// Throws Error{AllInputsFailed} for an empty input list and
// Error{OutputNotWritable} when the output directory cannot be used.
DatasetManifest build_dataset(std::span<const std::filesystem::path> inputs,
                              const BuildConfig& config);

// Pair-aware split: all entries of a protein share a partition. The number of
// test proteins is round(n * test_fraction) (halves up), kept within
// [1, n - 1]. Throws Error{TooFewEntries} for fewer than two proteins and
// Error{InvalidArgument} for a fraction outside (0, 1).
DatasetManifest split(DatasetManifest manifest, double test_fraction, std::uint64_t seed);

struct StatsReport {
  std::size_t entries = 0;
  std::size_t real = 0;
  std::size_t mutated = 0;
  std::size_t train = 0;
  std::size_t test = 0;
  std::size_t unassigned = 0;
  std::size_t failures = 0;
  std::size_t total_residues = 0;  // over all entries
  std::size_t real_residues = 0;   // over real entries, i.e. distinct proteins
  std::size_t min_residues = 0;
  std::size_t max_residues = 0;
  double mean_residues = 0.0;
  double median_residues = 0.0;
  std::size_t mutated_residues = 0;
  std::size_t clamped_points = 0;
  std::size_t unknown_residues = 0;

  bool operator==(const StatsReport&) const = default;
};

// Residue-count distribution is taken over real entries (one per protein).
StatsReport stats(const DatasetManifest& manifest);

nlohmann::json to_json(const StatsReport& report);
std::string to_text(const StatsReport& report);

nlohmann::json to_json(const DatasetManifest& manifest);
DatasetManifest manifest_from_json(const nlohmann::json& doc);  // throws Error{InvalidManifest}

// Atomic write (temporary file + rename).
void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);
DatasetManifest read_manifest(const std::filesystem::path& path);

nlohmann::json to_json(const RenderConfig& cfg);
RenderConfig render_config_from_json(const nlohmann::json& doc);

// Writes bytes to a sibling temporary file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace protproj
