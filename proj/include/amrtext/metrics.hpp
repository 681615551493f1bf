#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace amrtext {

struct ScoredPair {
  std::string hypothesis;
  std::string reference;
  std::string language;
};

struct MetricResult {
  std::string metric;
  double value = 0.0;  // always in [0, 100]
  nlohmann::json details;
};

// Tokenization policy: punctuation-splitting word tokens for es/it/de/en,
// character tokens for zh. Recorded in every MetricResult's details.
std::vector<std::string> metric_tokenize(std::string_view text, std::string_view language);

// Corpus BLEU, n-gram orders 1-4, geometric mean of clipped precisions over
// orders with any hypothesis n-grams, brevity penalty exp(1 - r/c) for c < r.
// Zero precisions are floored at 1/(2*total) and noted in details.
MetricResult bleu_corpus(const std::vector<ScoredPair>& pairs);

// chrF++: character n-grams 1-6 (whitespace removed) plus word n-grams 1-2,
// per-order F-scores with beta = 2 averaged over non-degenerate orders.
MetricResult chrf_corpus(const std::vector<ScoredPair>& pairs);

// METEOR variant with exact unigram matches only (no synonym or paraphrase
// resources): F-mean with recall weight 9 and fragmentation penalty
// 0.5*(chunks/matches)^3. Reported as "meteor_lite" everywhere.
MetricResult meteor_lite(const std::vector<ScoredPair>& pairs);

// Dispatch by metric name: bleu | chrf++ | meteor_lite.
MetricResult score_corpus(const std::string& metric, const std::vector<ScoredPair>& pairs);
bool is_known_metric(const std::string& metric);

// Paired bootstrap resampling over segment indices. Returns the p-value for
// the full-corpus winner: the fraction of resamples in which it fails to
// strictly outperform the other system. Deterministic under `seed`.
double paired_bootstrap(const std::vector<ScoredPair>& system_a,
                        const std::vector<ScoredPair>& system_b, const std::string& metric,
                        int samples, std::uint64_t seed);

}  // namespace amrtext
