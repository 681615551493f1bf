#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "amrtext/penman.hpp"

namespace amrtext {

// Appendix defaults; surfaced in manifests and used for over-length warnings.
// This toolkit warns, it never truncates.
inline constexpr std::size_t kMaxSourceTokens = 350;
inline constexpr std::size_t kMaxTargetTokens = 200;

// Token sequence for the encoder: language-tagged instruction prefix followed
// by the depth-first graph rendering.
struct LinearizedInput {
  std::vector<std::string> prefix_tokens;
  std::vector<std::string> graph_tokens;
  std::string target_language;
  std::string prefix_text;  // byte-exact "translate AMR to <DisplayName>:"
  std::vector<std::string> warnings;

  std::vector<std::string> all_tokens() const;
};

struct EdgeLabelVocab {
  std::vector<std::string> labels;  // distinct, first-occurrence order
  std::string source_corpus_id;
};

// Supported target language codes, in a fixed order.
std::vector<std::string> supported_languages();

// "es" -> "Spanish" etc.; throws std::invalid_argument on unknown codes.
std::string language_display_name(std::string_view code);

// Depth-first rendering from the root in edge-declaration order: "(" and ")"
// structure tokens, the concept at a node's first visit, relation labels
// before each child, the bare variable at reentrant revisits, and attribute
// constants as their literal token.
std::vector<std::string> linearize(const AmrGraph& g);

LinearizedInput make_task_input(const AmrGraph& g, std::string_view language_code);

// Every distinct relation label (edge and attribute) over the corpus, in
// first-occurrence order. Throws std::invalid_argument on an empty corpus.
EdgeLabelVocab extract_edge_label_vocab(std::span<const AmrGraph> corpus,
                                        std::string_view corpus_id = "");

// Inverse of linearize. Fresh variables are synthesized; a bare reference
// token resolves to an earlier node via the AMR naming convention (variable =
// concept initial plus an ordinal). Result is isomorphic to the source graph.
ParseResult delinearize(std::span<const std::string> tokens);

}  // namespace amrtext
