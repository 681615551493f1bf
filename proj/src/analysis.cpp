#include "amrtext/analysis.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace amrtext {

std::vector<RatioRecord> compute_gamma(std::span<const ExampleRecord> records,
                                       const SubwordModel& model) {
  std::vector<RatioRecord> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    ParseResult parsed = parse_penman(r.amr);
    if (!parsed.ok()) throw std::runtime_error("record " + r.id + ": unparseable AMR");
    std::size_t nodes = parsed.graph->node_count();
    if (nodes == 0) throw std::runtime_error("record " + r.id + ": zero-node graph");
    RatioRecord rr;
    rr.example_id = r.id;
    rr.subword_length = subword_count(model, r.target_sentence);
    rr.node_count = nodes;
    rr.gamma = static_cast<double>(rr.subword_length) / static_cast<double>(nodes);
    rr.flagged = rr.subword_length == 0;
    out.push_back(std::move(rr));
  }
  return out;
}

BinRule BinRule::parse(const std::string& text) {
  BinRule rule;
  if (text == "gamma" || text == "tercile" || text.empty()) return rule;
  if (text.rfind("fixed:", 0) == 0) {
    std::string rest = text.substr(6);
    std::size_t comma = rest.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("fixed bin rule needs two boundaries: " + text);
    rule.kind = Kind::Fixed;
    rule.low_max = std::stod(rest.substr(0, comma));
    rule.mid_max = std::stod(rest.substr(comma + 1));
    if (rule.low_max > rule.mid_max)
      throw std::invalid_argument("fixed bin boundaries out of order: " + text);
    return rule;
  }
  throw std::invalid_argument("unknown bin rule: " + text);
}

std::string BinRule::describe() const {
  if (kind == Kind::Tercile) return "tercile";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "fixed:%g,%g", low_max, mid_max);
  return buf;
}

std::vector<GammaBin> bin_by_gamma(std::vector<RatioRecord> ratios, const BinRule& rule) {
  if (ratios.empty()) throw std::invalid_argument("bin_by_gamma: empty input");
  std::vector<GammaBin> bins(3);
  bins[0].label = "low";
  bins[1].label = "mid";
  bins[2].label = "high";

  if (rule.kind == BinRule::Kind::Tercile) {
    if (ratios.size() < 3)
      throw std::invalid_argument("tercile binning needs at least 3 records");
    std::sort(ratios.begin(), ratios.end(), [](const RatioRecord& a, const RatioRecord& b) {
      if (a.gamma != b.gamma) return a.gamma < b.gamma;
      return a.example_id < b.example_id;
    });
    std::size_t n = ratios.size();
    std::size_t base = n / 3, rem = n % 3;
    std::size_t sizes[3] = {base + (rem > 0 ? 1 : 0), base + (rem > 1 ? 1 : 0), base};
    std::size_t at = 0;
    for (int b = 0; b < 3; ++b)
      for (std::size_t k = 0; k < sizes[b]; ++k) {
        ratios[at].bin = bins[b].label;
        bins[b].members.push_back(ratios[at]);
        ++at;
      }
  } else {
    for (auto& r : ratios) {
      int b = r.gamma < rule.low_max ? 0 : (r.gamma < rule.mid_max ? 1 : 2);
      r.bin = bins[b].label;
      bins[b].members.push_back(r);
    }
  }

  for (auto& bin : bins) {
    if (bin.members.empty()) continue;
    bin.gamma_min = bin.members.front().gamma;
    bin.gamma_max = bin.members.front().gamma;
    for (const auto& m : bin.members) {
      bin.gamma_min = std::min(bin.gamma_min, m.gamma);
      bin.gamma_max = std::max(bin.gamma_max, m.gamma);
    }
  }
  return bins;
}

std::vector<BinScore> score_by_bin(const std::vector<GammaBin>& bins,
                                   const std::unordered_map<std::string, std::string>& hyp_by_id,
                                   std::span<const ExampleRecord> records,
                                   const std::string& metric) {
  std::unordered_map<std::string, const ExampleRecord*> by_id;
  for (const auto& r : records) by_id[r.id] = &r;
  std::vector<BinScore> out;
  for (const auto& bin : bins) {
    if (bin.members.empty()) continue;
    std::vector<ScoredPair> pairs;
    for (const auto& m : bin.members) {
      auto rec = by_id.find(m.example_id);
      auto hyp = hyp_by_id.find(m.example_id);
      if (rec == by_id.end() || hyp == hyp_by_id.end()) continue;
      pairs.push_back({hyp->second, rec->second->target_sentence, rec->second->language});
    }
    if (pairs.empty())
      throw std::runtime_error("bin '" + bin.label + "' is empty after joining hypotheses");
    MetricResult mr = score_corpus(metric, pairs);
    out.push_back({bin.label, bin.gamma_min, bin.gamma_max, pairs.size(), metric, mr.value});
  }
  return out;
}

std::string bins_tsv(std::span<const BinScore> rows) {
  std::string out = "bin\tgamma_min\tgamma_max\tcount\tmetric\tvalue\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s\t%.4f\t%.4f\t%zu\t%s\t%.4f\n", r.bin.c_str(),
                  r.gamma_min, r.gamma_max, r.count, r.metric.c_str(), r.value);
    out += buf;
  }
  return out;
}

SubsetFilter SubsetFilter::parse(const std::string& csv, bool include) {
  SubsetFilter f;
  f.include = include;
  std::size_t start = 0;
  while (start <= csv.size()) {
    std::size_t comma = csv.find(',', start);
    if (comma == std::string::npos) comma = csv.size();
    std::string g = csv.substr(start, comma - start);
    if (!g.empty()) f.genres.insert(g);
    start = comma + 1;
  }
  if (f.genres.empty()) throw std::invalid_argument("subset filter needs at least one genre");
  return f;
}

std::vector<ExampleRecord> filter_subset(std::span<const ExampleRecord> records,
                                         const SubsetFilter& filter) {
  if (filter.genres.empty())
    throw std::invalid_argument("subset filter needs at least one genre");
  bool any_genre = false;
  for (const auto& r : records)
    if (!r.genre.empty()) any_genre = true;
  if (!any_genre) throw std::runtime_error("no record carries genre metadata");
  std::vector<ExampleRecord> out;
  for (const auto& r : records) {
    bool match = filter.genres.count(r.genre) > 0;
    if (match == filter.include) out.push_back(r);
  }
  return out;
}

}  // namespace amrtext
