#include "amrtext/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "amrtext/util.hpp"

namespace amrtext {

namespace {

constexpr int kBleuOrder = 4;
constexpr int kChrfCharOrder = 6;
constexpr int kChrfWordOrder = 2;
constexpr int kChrfOrders = kChrfCharOrder + kChrfWordOrder;
constexpr double kChrfBeta = 2.0;
constexpr double kMeteorRecallWeight = 9.0;
constexpr double kMeteorPenaltyWeight = 0.5;
constexpr double kMeteorPenaltyPower = 3.0;

bool is_ascii_punct(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

std::string tokenization_policy(std::string_view language) {
  return language == "zh" ? "char" : "word+punct";
}

}  // namespace

std::vector<std::string> metric_tokenize(std::string_view text, std::string_view language) {
  std::vector<std::string> out;
  if (language == "zh") {
    for (auto& cp : utf8_codepoints(text)) {
      if (cp.size() == 1 && std::isspace(static_cast<unsigned char>(cp[0]))) continue;
      out.push_back(std::move(cp));
    }
    return out;
  }
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  };
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
      ++i;
    } else if (is_ascii_punct(c)) {
      flush();
      out.push_back(std::string(1, c));
      ++i;
    } else {
      std::size_t len = utf8_seq_len(static_cast<unsigned char>(c));
      if (i + len > text.size()) len = 1;
      current.append(text.substr(i, len));
      i += len;
    }
  }
  flush();
  return out;
}

// ---------------------------------------------------------------------------
// Per-segment sufficient statistics. All corpus metrics are sums of these,
// which is what makes bootstrap resampling cheap.

namespace {

using SegStats = std::vector<double>;

void check_pairs(const std::vector<ScoredPair>& pairs) {
  if (pairs.empty()) throw std::invalid_argument("metric: empty pair list");
  for (const auto& p : pairs)
    if (p.reference.empty()) throw std::invalid_argument("metric: empty reference");
}

// Multiset of n-grams keyed by a joined string. \x1f never occurs in tokens.
std::unordered_map<std::string, int> ngram_counts(const std::vector<std::string>& toks, int n) {
  std::unordered_map<std::string, int> counts;
  if (static_cast<int>(toks.size()) < n) return counts;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) {
    std::string key;
    for (int k = 0; k < n; ++k) {
      if (k) key += '\x1f';
      key += toks[i + k];
    }
    ++counts[key];
  }
  return counts;
}

// BLEU stats: [correct 1..4, total 1..4, hyp_len, ref_len]
SegStats bleu_seg_stats(const ScoredPair& p) {
  SegStats s(2 * kBleuOrder + 2, 0.0);
  auto hyp = metric_tokenize(p.hypothesis, p.language);
  auto ref = metric_tokenize(p.reference, p.language);
  for (int n = 1; n <= kBleuOrder; ++n) {
    auto hc = ngram_counts(hyp, n);
    auto rc = ngram_counts(ref, n);
    double correct = 0, total = 0;
    for (const auto& [gram, cnt] : hc) {
      total += cnt;
      auto it = rc.find(gram);
      if (it != rc.end()) correct += std::min(cnt, it->second);
    }
    s[n - 1] = correct;
    s[kBleuOrder + n - 1] = total;
  }
  s[2 * kBleuOrder] = static_cast<double>(hyp.size());
  s[2 * kBleuOrder + 1] = static_cast<double>(ref.size());
  return s;
}

struct BleuScore {
  double value = 0.0;
  double brevity_penalty = 1.0;
  std::vector<double> precisions;
  std::vector<int> smoothed_orders;
  int effective_orders = 0;
};

BleuScore bleu_from_stats(const SegStats& s) {
  BleuScore b;
  double hyp_len = s[2 * kBleuOrder];
  double ref_len = s[2 * kBleuOrder + 1];
  if (hyp_len <= 0.0) return b;
  double log_sum = 0.0;
  for (int n = 1; n <= kBleuOrder; ++n) {
    double correct = s[n - 1];
    double total = s[kBleuOrder + n - 1];
    if (total <= 0.0) {
      b.precisions.push_back(0.0);
      continue;
    }
    double p = correct / total;
    if (correct == 0.0) {
      p = 1.0 / (2.0 * total);
      b.smoothed_orders.push_back(n);
    }
    b.precisions.push_back(p);
    log_sum += std::log(p);
    ++b.effective_orders;
  }
  if (b.effective_orders == 0) return b;
  if (hyp_len < ref_len) b.brevity_penalty = std::exp(1.0 - ref_len / hyp_len);
  b.value = 100.0 * b.brevity_penalty * std::exp(log_sum / b.effective_orders);
  return b;
}

// chrF stats: per order (6 char + 2 word): [match, hyp_count, ref_count]
std::vector<std::string> chrf_chars(std::string_view text) {
  std::vector<std::string> out;
  for (auto& cp : utf8_codepoints(text)) {
    if (cp.size() == 1 && std::isspace(static_cast<unsigned char>(cp[0]))) continue;
    out.push_back(std::move(cp));
  }
  return out;
}

SegStats chrf_seg_stats(const ScoredPair& p) {
  SegStats s(3 * kChrfOrders, 0.0);
  auto hyp_chars = chrf_chars(p.hypothesis);
  auto ref_chars = chrf_chars(p.reference);
  auto hyp_words = metric_tokenize(p.hypothesis, p.language);
  auto ref_words = metric_tokenize(p.reference, p.language);
  for (int i = 0; i < kChrfOrders; ++i) {
    bool word = i >= kChrfCharOrder;
    int n = word ? i - kChrfCharOrder + 1 : i + 1;
    auto hc = ngram_counts(word ? hyp_words : hyp_chars, n);
    auto rc = ngram_counts(word ? ref_words : ref_chars, n);
    double match = 0, hyp_total = 0, ref_total = 0;
    for (const auto& [gram, cnt] : hc) {
      hyp_total += cnt;
      auto it = rc.find(gram);
      if (it != rc.end()) match += std::min(cnt, it->second);
    }
    for (const auto& [gram, cnt] : rc) ref_total += cnt;
    s[3 * i] = match;
    s[3 * i + 1] = hyp_total;
    s[3 * i + 2] = ref_total;
  }
  return s;
}

struct ChrfScore {
  double value = 0.0;
  std::vector<double> fscores;
  int effective_orders = 0;
};

ChrfScore chrf_from_stats(const SegStats& s) {
  ChrfScore c;
  double sum = 0.0;
  double beta2 = kChrfBeta * kChrfBeta;
  for (int i = 0; i < kChrfOrders; ++i) {
    double match = s[3 * i], hyp = s[3 * i + 1], ref = s[3 * i + 2];
    if (hyp <= 0.0 && ref <= 0.0) {
      c.fscores.push_back(0.0);
      continue;
    }
    double prec = hyp > 0.0 ? match / hyp : 0.0;
    double rec = ref > 0.0 ? match / ref : 0.0;
    double denom = beta2 * prec + rec;
    double f = denom > 0.0 ? (1.0 + beta2) * prec * rec / denom : 0.0;
    c.fscores.push_back(f);
    sum += f;
    ++c.effective_orders;
  }
  if (c.effective_orders > 0) c.value = 100.0 * sum / c.effective_orders;
  return c;
}

// meteor stats: [matches, chunks, hyp_len, ref_len]
//
// Alignment: repeatedly take the longest common contiguous run of unmatched
// tokens (ties to the leftmost hypothesis, then reference, position); chunks
// are maximal runs of adjacent matches in both sequences.
SegStats meteor_seg_stats(const ScoredPair& p) {
  auto hyp = metric_tokenize(p.hypothesis, p.language);
  auto ref = metric_tokenize(p.reference, p.language);
  std::vector<int> hyp_to_ref(hyp.size(), -1);
  std::vector<bool> ref_used(ref.size(), false);
  while (true) {
    std::size_t best_len = 0, best_h = 0, best_r = 0;
    for (std::size_t h = 0; h < hyp.size(); ++h) {
      for (std::size_t r = 0; r < ref.size(); ++r) {
        std::size_t len = 0;
        while (h + len < hyp.size() && r + len < ref.size() && hyp_to_ref[h + len] < 0 &&
               !ref_used[r + len] && hyp[h + len] == ref[r + len])
          ++len;
        if (len > best_len) {
          best_len = len;
          best_h = h;
          best_r = r;
        }
      }
    }
    if (best_len == 0) break;
    for (std::size_t k = 0; k < best_len; ++k) {
      hyp_to_ref[best_h + k] = static_cast<int>(best_r + k);
      ref_used[best_r + k] = true;
    }
  }
  double matches = 0, chunks = 0;
  for (std::size_t h = 0; h < hyp.size(); ++h) {
    if (hyp_to_ref[h] < 0) continue;
    ++matches;
    bool continues = h > 0 && hyp_to_ref[h - 1] >= 0 && hyp_to_ref[h - 1] + 1 == hyp_to_ref[h];
    if (!continues) ++chunks;
  }
  return {matches, chunks, static_cast<double>(hyp.size()), static_cast<double>(ref.size())};
}

double meteor_from_stats(const SegStats& s) {
  double matches = s[0], chunks = s[1], hyp_len = s[2], ref_len = s[3];
  if (matches <= 0.0 || hyp_len <= 0.0 || ref_len <= 0.0) return 0.0;
  double prec = matches / hyp_len;
  double rec = matches / ref_len;
  double fmean = (1.0 + kMeteorRecallWeight) * prec * rec / (rec + kMeteorRecallWeight * prec);
  double penalty = kMeteorPenaltyWeight * std::pow(chunks / matches, kMeteorPenaltyPower);
  return 100.0 * fmean * (1.0 - penalty);
}

SegStats sum_stats(const std::vector<SegStats>& all) {
  SegStats total(all.front().size(), 0.0);
  for (const auto& s : all)
    for (std::size_t i = 0; i < s.size(); ++i) total[i] += s[i];
  return total;
}

std::vector<SegStats> collect_stats(const std::string& metric,
                                    const std::vector<ScoredPair>& pairs) {
  std::vector<SegStats> all;
  all.reserve(pairs.size());
  for (const auto& p : pairs) {
    if (metric == "bleu")
      all.push_back(bleu_seg_stats(p));
    else if (metric == "chrf++")
      all.push_back(chrf_seg_stats(p));
    else if (metric == "meteor_lite")
      all.push_back(meteor_seg_stats(p));
    else
      throw std::invalid_argument("unknown metric: " + metric);
  }
  return all;
}

double score_from_stats(const std::string& metric, const SegStats& total) {
  if (metric == "bleu") return bleu_from_stats(total).value;
  if (metric == "chrf++") return chrf_from_stats(total).value;
  return meteor_from_stats(total);
}

std::string policy_summary(const std::vector<ScoredPair>& pairs) {
  std::string policy;
  for (const auto& p : pairs) {
    std::string t = tokenization_policy(p.language);
    if (policy.empty())
      policy = t;
    else if (policy != t)
      return "mixed(word+punct;char:zh)";
  }
  return policy;
}

}  // namespace

MetricResult bleu_corpus(const std::vector<ScoredPair>& pairs) {
  check_pairs(pairs);
  auto stats = collect_stats("bleu", pairs);
  SegStats total = sum_stats(stats);
  BleuScore b = bleu_from_stats(total);
  MetricResult r;
  r.metric = "bleu";
  r.value = b.value;
  r.details["correct"] = std::vector<double>(total.begin(), total.begin() + kBleuOrder);
  r.details["total"] = std::vector<double>(total.begin() + kBleuOrder, total.begin() + 2 * kBleuOrder);
  r.details["precisions"] = b.precisions;
  r.details["hyp_len"] = total[2 * kBleuOrder];
  r.details["ref_len"] = total[2 * kBleuOrder + 1];
  r.details["brevity_penalty"] = b.brevity_penalty;
  r.details["effective_orders"] = b.effective_orders;
  if (!b.smoothed_orders.empty()) r.details["smoothed_orders"] = b.smoothed_orders;
  if (total[2 * kBleuOrder] <= 0.0) r.details["warning"] = "all hypotheses empty";
  r.details["tokenization"] = policy_summary(pairs);
  r.details["segments"] = pairs.size();
  return r;
}

MetricResult chrf_corpus(const std::vector<ScoredPair>& pairs) {
  check_pairs(pairs);
  auto stats = collect_stats("chrf++", pairs);
  SegStats total = sum_stats(stats);
  ChrfScore c = chrf_from_stats(total);
  MetricResult r;
  r.metric = "chrf++";
  r.value = c.value;
  r.details["beta"] = kChrfBeta;
  r.details["char_orders"] = kChrfCharOrder;
  r.details["word_orders"] = kChrfWordOrder;
  r.details["fscores"] = c.fscores;
  r.details["effective_orders"] = c.effective_orders;
  r.details["tokenization"] = policy_summary(pairs);
  r.details["segments"] = pairs.size();
  return r;
}

MetricResult meteor_lite(const std::vector<ScoredPair>& pairs) {
  check_pairs(pairs);
  auto stats = collect_stats("meteor_lite", pairs);
  SegStats total = sum_stats(stats);
  MetricResult r;
  r.metric = "meteor_lite";
  r.value = meteor_from_stats(total);
  r.details["matches"] = total[0];
  r.details["chunks"] = total[1];
  r.details["hyp_len"] = total[2];
  r.details["ref_len"] = total[3];
  r.details["recall_weight"] = kMeteorRecallWeight;
  r.details["penalty"] = "0.5*(chunks/matches)^3";
  r.details["tokenization"] = policy_summary(pairs);
  r.details["segments"] = pairs.size();
  return r;
}

MetricResult score_corpus(const std::string& metric, const std::vector<ScoredPair>& pairs) {
  if (metric == "bleu") return bleu_corpus(pairs);
  if (metric == "chrf++") return chrf_corpus(pairs);
  if (metric == "meteor_lite") return meteor_lite(pairs);
  throw std::invalid_argument("unknown metric: " + metric);
}

bool is_known_metric(const std::string& metric) {
  return metric == "bleu" || metric == "chrf++" || metric == "meteor_lite";
}

double paired_bootstrap(const std::vector<ScoredPair>& system_a,
                        const std::vector<ScoredPair>& system_b, const std::string& metric,
                        int samples, std::uint64_t seed) {
  if (system_a.size() != system_b.size())
    throw std::invalid_argument("paired_bootstrap: segment count mismatch");
  if (samples < 100) throw std::invalid_argument("paired_bootstrap: samples must be >= 100");
  for (std::size_t i = 0; i < system_a.size(); ++i)
    if (system_a[i].reference != system_b[i].reference)
      throw std::invalid_argument("paired_bootstrap: references differ at segment " +
                                  std::to_string(i));
  auto stats_a = collect_stats(metric, system_a);
  auto stats_b = collect_stats(metric, system_b);
  double full_a = score_from_stats(metric, sum_stats(stats_a));
  double full_b = score_from_stats(metric, sum_stats(stats_b));
  // p-value for the full-corpus winner: how often it fails to strictly beat
  // the other system across resamples.
  bool b_is_winner = full_b >= full_a;

  std::mt19937_64 rng(seed);
  std::size_t n = system_a.size();
  int not_better = 0;
  SegStats acc_a(stats_a.front().size(), 0.0), acc_b(stats_b.front().size(), 0.0);
  for (int s = 0; s < samples; ++s) {
    std::fill(acc_a.begin(), acc_a.end(), 0.0);
    std::fill(acc_b.begin(), acc_b.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t idx = static_cast<std::size_t>(bounded_rand(rng, n));
      for (std::size_t k = 0; k < acc_a.size(); ++k) {
        acc_a[k] += stats_a[idx][k];
        acc_b[k] += stats_b[idx][k];
      }
    }
    double sa = score_from_stats(metric, acc_a);
    double sb = score_from_stats(metric, acc_b);
    double winner = b_is_winner ? sb : sa;
    double loser = b_is_winner ? sa : sb;
    if (!(winner > loser)) ++not_better;
  }
  return static_cast<double>(not_better) / samples;
}

}  // namespace amrtext
