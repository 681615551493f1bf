#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "amrtext/linearize.hpp"
#include "amrtext/penman.hpp"

namespace amrtext {

enum class Provenance { GoldAmr, SilverAmr, SilverSent };
std::string to_string(Provenance p);
Provenance provenance_from_string(std::string_view s);

// One training/eval instance. `amr` holds normalized Penman text;
// `linearized_input` is always recomputable as make_task_input(amr, language).
struct ExampleRecord {
  std::string id;
  std::string language;
  std::string amr;
  std::vector<std::string> linearized_input;
  std::string target_sentence;
  Provenance provenance = Provenance::GoldAmr;
  std::string genre;             // empty = absent
  std::string english_sentence;  // empty = absent
};

void to_json(nlohmann::json& j, const ExampleRecord& r);
void from_json(const nlohmann::json& j, ExampleRecord& r);

// Empty list iff the record satisfies its invariants (valid AMR, linearized
// input recomputes, provenance-specific fields present).
std::vector<std::string> record_problems(const ExampleRecord& r);

struct ParallelPair {
  std::string english;
  std::string foreign;
  std::string language;
  std::string corpus;  // europarl | tatoeba | ted2020 | um
  std::string id;      // optional; defaults to a content hash of `english`
};

// Stable id used to join pairs with external parse sidecars.
std::string pair_id(const ParallelPair& p);

// Longest-prefix genre lookup over document ids, e.g. "wb." -> weblog.
struct GenreMap {
  std::vector<std::pair<std::string, std::string>> entries;
  std::string lookup(std::string_view id) const;
  static GenreMap defaults();
  // TSV "id-prefix<TAB>genre"; file entries take precedence over defaults.
  static GenreMap load(const std::filesystem::path& path);
};

struct IngestStats {
  std::size_t read = 0;
  std::size_t kept = 0;
  std::size_t skipped = 0;
  std::vector<std::string> notes;
};

struct IngestResult {
  std::vector<ExampleRecord> records;
  IngestStats stats;
};

// Reads an AMR release file (blank-line-separated blocks with "# ::id" /
// "# ::snt" metadata). Graphs that fail validation are skipped and counted.
// Throws when the file is unreadable or yields zero valid records.
IngestResult ingest_gold_amr(const std::filesystem::path& amr_file,
                             std::string_view language = "en",
                             const GenreMap& genres = GenreMap::defaults());

// Joins parallel pairs with externally produced silver AMR parses keyed by
// pair id. Exact duplicate pairs and empty-sided pairs are dropped first.
IngestResult build_silver_amr(const std::vector<ParallelPair>& pairs,
                              const std::unordered_map<std::string, std::string>& silver_parses,
                              std::string_view language, bool strict = false);

// Pairs every gold record's AMR (byte-identical) with an external translation
// keyed by the gold id.
IngestResult build_silver_sent(const std::vector<ExampleRecord>& gold,
                               const std::unordered_map<std::string, std::string>& translations,
                               std::string_view language, bool strict = false);

// --- JSONL files -----------------------------------------------------------

std::vector<ExampleRecord> read_records_jsonl(const std::filesystem::path& path);
void write_records_jsonl(const std::filesystem::path& path, std::span<const ExampleRecord> records);
// Sidecar files of {id, text}: translations, silver parses, hypotheses.
std::unordered_map<std::string, std::string> read_id_text_jsonl(const std::filesystem::path& path);
std::vector<ParallelPair> read_pairs_jsonl(const std::filesystem::path& path);

// --- Manifests --------------------------------------------------------------

// A phase source. `provenance` selects how records are produced:
//   records      — pre-built ExampleRecord JSONL at `path`
//   gold_amr     — AMR release file at `path`
//   silver_amr   — `pairs` JSONL + `parses` sidecar
//   silver_sent  — gold AMR file at `gold` + `translations` sidecar
struct SourceSpec {
  std::string provenance;
  std::string path;
  std::string gold;
  std::string pairs;
  std::string parses;
  std::string translations;
  std::string language;
};

struct ManifestPhase {
  std::string name = "phase";
  std::string mixing = "concat-shuffle";  // or "sequential"
  std::vector<std::string> languages;     // non-empty: keep only these
  std::vector<SourceSpec> sources;
};

struct DatasetManifest {
  std::vector<ManifestPhase> phases;
  std::size_t max_source = kMaxSourceTokens;
  std::size_t max_target = kMaxTargetTokens;
  std::uint64_t seed = 13;
  std::filesystem::path base_dir;  // relative source paths resolve against this

  static DatasetManifest load(const std::filesystem::path& path);
};

struct MixPhaseSummary {
  std::string name;
  std::string file;
  std::size_t total = 0;
  std::size_t skipped = 0;
  std::size_t filtered = 0;  // dropped by the phase language list
  std::vector<std::pair<std::string, std::size_t>> per_source;
};

struct MixSummary {
  std::vector<MixPhaseSummary> phases;
};

nlohmann::json to_json(const MixSummary& s);

// Materializes one JSONL file per phase in declared order. concat-shuffle
// phases are permuted with a generator seeded from (manifest seed, phase
// index); byte-identical across runs for fixed inputs.
MixSummary mix(const DatasetManifest& manifest, const std::filesystem::path& out_dir,
               bool strict = false);

}  // namespace amrtext
