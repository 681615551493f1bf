#pragma once

#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "amrtext/dataset.hpp"
#include "amrtext/metrics.hpp"
#include "amrtext/segment.hpp"

namespace amrtext {

// gamma = reference subword length / concept node count. Lengths are measured
// on the reference sentence; constants never count as nodes.
struct RatioRecord {
  std::string example_id;
  std::size_t subword_length = 0;
  std::size_t node_count = 0;
  double gamma = 0.0;
  std::string bin;  // low | mid | high, set by bin_by_gamma
  bool flagged = false;
};

std::vector<RatioRecord> compute_gamma(std::span<const ExampleRecord> records,
                                       const SubwordModel& model);

struct BinRule {
  enum class Kind { Tercile, Fixed } kind = Kind::Tercile;
  double low_max = 0.0;   // Fixed: gamma < low_max -> low
  double mid_max = 0.0;   // Fixed: gamma < mid_max -> mid, else high
  // Accepts "gamma" (terciles) or "fixed:<a>,<b>".
  static BinRule parse(const std::string& text);
  std::string describe() const;
};

struct GammaBin {
  std::string label;
  double gamma_min = 0.0;
  double gamma_max = 0.0;
  std::vector<RatioRecord> members;
};

// Terciles: equal-count bins ordered by (gamma, id), remainders going to the
// earlier bins; requires >= 3 records. Fixed boundaries bin by value and may
// leave bins empty. Boundaries are echoed in the output either way.
std::vector<GammaBin> bin_by_gamma(std::vector<RatioRecord> ratios,
                                   const BinRule& rule = BinRule{});

struct BinScore {
  std::string bin;
  double gamma_min = 0.0;
  double gamma_max = 0.0;
  std::size_t count = 0;
  std::string metric;
  double value = 0.0;
};

// Scores each bin independently after joining hypotheses by example id.
// Throws when a bin ends up empty after the join.
std::vector<BinScore> score_by_bin(const std::vector<GammaBin>& bins,
                                   const std::unordered_map<std::string, std::string>& hyp_by_id,
                                   std::span<const ExampleRecord> records,
                                   const std::string& metric);

// Plot-ready TSV: bin, gamma_min, gamma_max, count, metric, value.
std::string bins_tsv(std::span<const BinScore> rows);

struct SubsetFilter {
  std::set<std::string> genres;
  bool include = true;

  static SubsetFilter parse(const std::string& csv, bool include = true);
};

// include keeps records whose genre is listed; exclude keeps the rest
// (records without genre metadata count as non-matching). Throws when no
// record carries genre metadata at all.
std::vector<ExampleRecord> filter_subset(std::span<const ExampleRecord> records,
                                         const SubsetFilter& filter);

}  // namespace amrtext
