#include "amrtext/dataset.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "amrtext/util.hpp"

namespace amrtext {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::GoldAmr: return "gold_amr";
    case Provenance::SilverAmr: return "silver_amr";
    case Provenance::SilverSent: return "silver_sent";
  }
  return "gold_amr";
}

Provenance provenance_from_string(std::string_view s) {
  if (s == "gold_amr") return Provenance::GoldAmr;
  if (s == "silver_amr") return Provenance::SilverAmr;
  if (s == "silver_sent") return Provenance::SilverSent;
  throw std::invalid_argument("unknown provenance: " + std::string(s));
}

void to_json(nlohmann::json& j, const ExampleRecord& r) {
  j = nlohmann::json{{"id", r.id},
                     {"language", r.language},
                     {"amr", r.amr},
                     {"linearized_input", r.linearized_input},
                     {"target_sentence", r.target_sentence},
                     {"provenance", to_string(r.provenance)}};
  if (!r.genre.empty()) j["genre"] = r.genre;
  if (!r.english_sentence.empty()) j["english_sentence"] = r.english_sentence;
}

void from_json(const nlohmann::json& j, ExampleRecord& r) {
  r.id = j.at("id").get<std::string>();
  r.language = j.at("language").get<std::string>();
  r.amr = j.at("amr").get<std::string>();
  r.linearized_input = j.at("linearized_input").get<std::vector<std::string>>();
  r.target_sentence = j.at("target_sentence").get<std::string>();
  r.provenance = provenance_from_string(j.at("provenance").get<std::string>());
  r.genre = j.value("genre", "");
  r.english_sentence = j.value("english_sentence", "");
}

std::vector<std::string> record_problems(const ExampleRecord& r) {
  std::vector<std::string> problems;
  ParseResult parsed = parse_penman(r.amr);
  if (!parsed.ok()) {
    problems.push_back("unparseable AMR");
    return problems;
  }
  for (const auto& d : validate(*parsed.graph)) problems.push_back(d.message);
  try {
    LinearizedInput in = make_task_input(*parsed.graph, r.language);
    if (in.all_tokens() != r.linearized_input)
      problems.push_back("linearized_input does not recompute from the AMR");
  } catch (const std::invalid_argument& e) {
    problems.push_back(e.what());
  }
  if (r.provenance != Provenance::GoldAmr && r.english_sentence.empty())
    problems.push_back("silver record is missing english_sentence");
  return problems;
}

std::string pair_id(const ParallelPair& p) {
  return p.id.empty() ? fnv1a64_hex(p.english) : p.id;
}

// ---------------------------------------------------------------------------
// Genre map

std::string GenreMap::lookup(std::string_view id) const {
  std::size_t best_len = 0;
  std::string genre;
  for (const auto& [prefix, g] : entries) {
    if (prefix.size() > best_len && id.substr(0, prefix.size()) == prefix) {
      best_len = prefix.size();
      genre = g;
    }
  }
  return genre;
}

GenreMap GenreMap::defaults() {
  GenreMap m;
  m.entries = {{"wb", "weblog"}, {"wsj", "wsj"}, {"nw", "newswire"},
               {"bc", "broadcast"}, {"bolt", "discussion-forum"}};
  return m;
}

GenreMap GenreMap::load(const std::filesystem::path& path) {
  GenreMap m;
  for (const auto& line : read_lines(path)) {
    if (line.empty() || line[0] == '#') continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("genre map line without a tab: " + line);
    m.entries.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  std::unordered_set<std::string> have;
  for (const auto& [prefix, g] : m.entries) have.insert(prefix);
  for (const auto& [prefix, g] : defaults().entries)
    if (!have.count(prefix)) m.entries.emplace_back(prefix, g);
  return m;
}

// ---------------------------------------------------------------------------
// Gold ingestion

namespace {

struct AmrBlock {
  std::string id;
  std::string snt;
  std::string body;
};

std::vector<AmrBlock> read_amr_blocks(const std::filesystem::path& path) {
  std::vector<std::string> lines = read_lines(path);
  std::vector<AmrBlock> blocks;
  AmrBlock current;
  bool any_content = false;
  auto flush = [&] {
    if (any_content) blocks.push_back(std::move(current));
    current = AmrBlock{};
    any_content = false;
  };
  for (const auto& line : lines) {
    std::string stripped = line;
    while (!stripped.empty() && (stripped.back() == ' ' || stripped.back() == '\t'))
      stripped.pop_back();
    if (stripped.empty()) {
      flush();
      continue;
    }
    if (stripped[0] == '#') {
      auto meta = [&](std::string_view key) -> std::string {
        std::size_t at = stripped.find(key);
        if (at == std::string::npos) return "";
        std::size_t start = at + key.size();
        while (start < stripped.size() && stripped[start] == ' ') ++start;
        return stripped.substr(start);
      };
      if (stripped.find("::id") != std::string::npos) {
        std::string value = meta("::id");
        current.id = split_ws(value).empty() ? "" : split_ws(value)[0];
        any_content = true;
      } else if (stripped.find("::snt") != std::string::npos) {
        current.snt = meta("::snt");
        any_content = true;
      }
      continue;
    }
    current.body += stripped;
    current.body += "\n";
    any_content = true;
  }
  flush();
  return blocks;
}

}  // namespace

IngestResult ingest_gold_amr(const std::filesystem::path& amr_file, std::string_view language,
                             const GenreMap& genres) {
  IngestResult out;
  std::vector<AmrBlock> blocks = read_amr_blocks(amr_file);
  std::size_t ordinal = 0;
  for (const auto& block : blocks) {
    ++ordinal;
    if (block.body.empty()) continue;  // metadata-only block
    ++out.stats.read;
    std::string id = block.id.empty()
                         ? amr_file.stem().string() + "." + std::to_string(ordinal)
                         : block.id;
    ParseResult parsed = parse_penman(block.body);
    if (!parsed.ok()) {
      ++out.stats.skipped;
      for (const auto& d : parsed.diagnostics)
        out.stats.notes.push_back(id + ": " + format_diagnostic(d));
      continue;
    }
    if (block.snt.empty()) {
      ++out.stats.skipped;
      out.stats.notes.push_back(id + ": missing ::snt metadata");
      continue;
    }
    ExampleRecord r;
    r.id = id;
    r.language = std::string(language);
    r.amr = serialize_penman(*parsed.graph);
    r.linearized_input = make_task_input(*parsed.graph, language).all_tokens();
    r.target_sentence = block.snt;
    r.english_sentence = block.snt;
    r.provenance = Provenance::GoldAmr;
    r.genre = genres.lookup(id);
    out.records.push_back(std::move(r));
    ++out.stats.kept;
  }
  if (out.records.empty())
    throw std::runtime_error("no valid records in " + amr_file.string());
  return out;
}

// ---------------------------------------------------------------------------
// Silver builders

IngestResult build_silver_amr(const std::vector<ParallelPair>& pairs,
                              const std::unordered_map<std::string, std::string>& silver_parses,
                              std::string_view language, bool strict) {
  IngestResult out;
  std::unordered_set<std::string> seen_pairs;
  std::size_t duplicates = 0, empty_sides = 0;
  for (const auto& p : pairs) {
    if (p.language != language)
      throw std::invalid_argument("parallel pair language '" + p.language +
                                  "' does not match requested '" + std::string(language) + "'");
    if (p.english.empty() || p.foreign.empty()) {
      ++empty_sides;
      continue;
    }
    if (!seen_pairs.insert(p.english + "\x1f" + p.foreign).second) {
      ++duplicates;
      continue;
    }
    ++out.stats.read;
    std::string key = pair_id(p);
    auto it = silver_parses.find(key);
    if (it == silver_parses.end()) {
      if (strict) throw std::runtime_error("missing silver parse for pair id " + key);
      ++out.stats.skipped;
      out.stats.notes.push_back(key + ": missing silver parse");
      continue;
    }
    ParseResult parsed = parse_penman(it->second);
    if (!parsed.ok()) {
      ++out.stats.skipped;
      for (const auto& d : parsed.diagnostics)
        out.stats.notes.push_back(key + ": " + format_diagnostic(d));
      continue;
    }
    ExampleRecord r;
    r.id = key + "." + std::string(language);
    r.language = std::string(language);
    r.amr = serialize_penman(*parsed.graph);
    r.linearized_input = make_task_input(*parsed.graph, language).all_tokens();
    r.target_sentence = p.foreign;
    r.english_sentence = p.english;
    r.provenance = Provenance::SilverAmr;
    out.records.push_back(std::move(r));
    ++out.stats.kept;
  }
  if (duplicates > 0)
    out.stats.notes.push_back("dropped " + std::to_string(duplicates) + " duplicate pairs");
  if (empty_sides > 0)
    out.stats.notes.push_back("dropped " + std::to_string(empty_sides) + " empty-sided pairs");
  return out;
}

IngestResult build_silver_sent(const std::vector<ExampleRecord>& gold,
                               const std::unordered_map<std::string, std::string>& translations,
                               std::string_view language, bool strict) {
  IngestResult out;
  for (const auto& g : gold) {
    if (g.provenance != Provenance::GoldAmr)
      throw std::invalid_argument("build_silver_sent requires gold_amr records, got " +
                                  to_string(g.provenance) + " for " + g.id);
    ++out.stats.read;
    auto it = translations.find(g.id);
    if (it == translations.end()) {
      if (strict) throw std::runtime_error("missing translation for gold id " + g.id);
      ++out.stats.skipped;
      out.stats.notes.push_back(g.id + ": missing translation");
      continue;
    }
    ParseResult parsed = parse_penman(g.amr);
    if (!parsed.ok()) {
      ++out.stats.skipped;
      out.stats.notes.push_back(g.id + ": gold AMR failed to parse");
      continue;
    }
    ExampleRecord r;
    r.id = g.id + "." + std::string(language);
    r.language = std::string(language);
    r.amr = g.amr;  // byte-identical gold AMR
    r.linearized_input = make_task_input(*parsed.graph, language).all_tokens();
    r.target_sentence = it->second;
    r.english_sentence = g.english_sentence.empty() ? g.target_sentence : g.english_sentence;
    r.provenance = Provenance::SilverSent;
    r.genre = g.genre;
    out.records.push_back(std::move(r));
    ++out.stats.kept;
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSONL

std::vector<ExampleRecord> read_records_jsonl(const std::filesystem::path& path) {
  std::vector<ExampleRecord> records;
  std::size_t lineno = 0;
  for (const auto& line : read_lines(path)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      records.push_back(nlohmann::json::parse(line).get<ExampleRecord>());
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return records;
}

void write_records_jsonl(const std::filesystem::path& path,
                         std::span<const ExampleRecord> records) {
  std::string out;
  for (const auto& r : records) {
    out += nlohmann::json(r).dump();
    out += "\n";
  }
  write_file_atomic(path, out);
}

std::unordered_map<std::string, std::string> read_id_text_jsonl(const std::filesystem::path& path) {
  std::unordered_map<std::string, std::string> out;
  std::size_t lineno = 0;
  for (const auto& line : read_lines(path)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      out[j.at("id").get<std::string>()] = j.at("text").get<std::string>();
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<ParallelPair> read_pairs_jsonl(const std::filesystem::path& path) {
  std::vector<ParallelPair> out;
  std::size_t lineno = 0;
  for (const auto& line : read_lines(path)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      ParallelPair p;
      p.english = j.at("english").get<std::string>();
      p.foreign = j.at("foreign").get<std::string>();
      p.language = j.at("language").get<std::string>();
      p.corpus = j.value("corpus", "");
      p.id = j.value("id", "");
      out.push_back(std::move(p));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Manifests

DatasetManifest DatasetManifest::load(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const std::exception& e) {
    throw std::runtime_error("manifest " + path.string() + ": " + e.what());
  }
  DatasetManifest m;
  m.base_dir = path.parent_path();
  m.seed = j.value("seed", std::uint64_t{13});
  if (j.contains("sequence_budgets")) {
    m.max_source = j["sequence_budgets"].value("max_source", kMaxSourceTokens);
    m.max_target = j["sequence_budgets"].value("max_target", kMaxTargetTokens);
  }
  if (!j.contains("phases") || !j["phases"].is_array() || j["phases"].empty())
    throw std::runtime_error("manifest " + path.string() + ": needs at least one phase");
  for (const auto& pj : j["phases"]) {
    ManifestPhase phase;
    phase.name = pj.value("name", "phase");
    phase.mixing = pj.value("mixing", "concat-shuffle");
    if (phase.mixing != "concat-shuffle" && phase.mixing != "sequential")
      throw std::runtime_error("manifest: unknown mixing mode '" + phase.mixing + "'");
    if (pj.contains("languages"))
      phase.languages = pj["languages"].get<std::vector<std::string>>();
    if (!pj.contains("sources") || pj["sources"].empty())
      throw std::runtime_error("manifest: phase '" + phase.name + "' has no sources");
    for (const auto& sj : pj["sources"]) {
      SourceSpec s;
      s.provenance = sj.value("provenance", "records");
      s.path = sj.value("path", "");
      s.gold = sj.value("gold", "");
      s.pairs = sj.value("pairs", "");
      s.parses = sj.value("parses", "");
      s.translations = sj.value("translations", "");
      s.language = sj.value("language", "");
      phase.sources.push_back(std::move(s));
    }
    m.phases.push_back(std::move(phase));
  }
  return m;
}

nlohmann::json to_json(const MixSummary& s) {
  nlohmann::json phases = nlohmann::json::array();
  for (const auto& p : s.phases) {
    nlohmann::json per_source = nlohmann::json::object();
    for (const auto& [label, count] : p.per_source) per_source[label] = count;
    phases.push_back({{"name", p.name},
                      {"file", p.file},
                      {"total", p.total},
                      {"skipped", p.skipped},
                      {"filtered", p.filtered},
                      {"per_source", per_source}});
  }
  return nlohmann::json{{"phases", phases}};
}

namespace {

std::filesystem::path resolve(const DatasetManifest& m, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !m.base_dir.empty()) path = m.base_dir / path;
  if (!std::filesystem::exists(path))
    throw std::runtime_error("manifest source file does not exist: " + path.string());
  return path;
}

std::string sanitize(const std::string& name) {
  std::string out;
  for (char c : name)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return out.empty() ? "phase" : out;
}

IngestResult load_source(const DatasetManifest& m, const SourceSpec& s, bool strict) {
  if (s.provenance == "records") {
    IngestResult out;
    for (auto& r : read_records_jsonl(resolve(m, s.path))) {
      ++out.stats.read;
      std::vector<std::string> problems = record_problems(r);
      if (!problems.empty()) {
        if (strict)
          throw std::runtime_error("record " + r.id + ": " + problems.front());
        ++out.stats.skipped;
        out.stats.notes.push_back(r.id + ": " + problems.front());
        continue;
      }
      out.records.push_back(std::move(r));
      ++out.stats.kept;
    }
    return out;
  }
  if (s.provenance == "gold_amr") {
    std::string lang = s.language.empty() ? "en" : s.language;
    return ingest_gold_amr(resolve(m, s.path), lang);
  }
  if (s.provenance == "silver_amr") {
    auto pairs = read_pairs_jsonl(resolve(m, s.pairs));
    auto parses = read_id_text_jsonl(resolve(m, s.parses));
    return build_silver_amr(pairs, parses, s.language, strict);
  }
  if (s.provenance == "silver_sent") {
    IngestResult gold = ingest_gold_amr(resolve(m, s.gold));
    auto translations = read_id_text_jsonl(resolve(m, s.translations));
    return build_silver_sent(gold.records, translations, s.language, strict);
  }
  throw std::runtime_error("unknown source provenance: " + s.provenance);
}

std::string source_label(const SourceSpec& s) {
  std::string ref = !s.path.empty() ? s.path : (!s.pairs.empty() ? s.pairs : s.gold);
  return s.provenance + ":" + ref + (s.language.empty() ? "" : "(" + s.language + ")");
}

}  // namespace

MixSummary mix(const DatasetManifest& manifest, const std::filesystem::path& out_dir,
               bool strict) {
  MixSummary summary;
  std::filesystem::create_directories(out_dir);
  for (std::size_t pi = 0; pi < manifest.phases.size(); ++pi) {
    const ManifestPhase& phase = manifest.phases[pi];
    MixPhaseSummary ps;
    ps.name = phase.name;
    std::vector<ExampleRecord> records;
    std::set<std::string> keep_langs(phase.languages.begin(), phase.languages.end());
    for (const auto& source : phase.sources) {
      IngestResult loaded = load_source(manifest, source, strict);
      ps.skipped += loaded.stats.skipped;
      std::size_t kept = 0;
      for (auto& r : loaded.records) {
        if (!keep_langs.empty() && !keep_langs.count(r.language)) {
          ++ps.filtered;
          continue;
        }
        records.push_back(std::move(r));
        ++kept;
      }
      ps.per_source.emplace_back(source_label(source), kept);
    }
    std::unordered_set<std::string> ids;
    for (const auto& r : records)
      if (!ids.insert(r.id).second)
        throw std::runtime_error("duplicate id within phase '" + phase.name + "': " + r.id);
    if (phase.mixing == "concat-shuffle") {
      std::mt19937_64 rng(manifest.seed + pi);
      deterministic_shuffle(records, rng);
    }
    std::filesystem::path file =
        out_dir / ("phase_" + std::to_string(pi + 1) + "_" + sanitize(phase.name) + ".jsonl");
    write_records_jsonl(file, records);
    ps.file = file.string();
    ps.total = records.size();
    summary.phases.push_back(std::move(ps));
  }
  write_file_atomic(out_dir / "mix_summary.json", to_json(summary).dump(2) + "\n");
  return summary;
}

}  // namespace amrtext
