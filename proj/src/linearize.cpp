#include "amrtext/linearize.hpp"

#include <cctype>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace amrtext {

std::vector<std::string> LinearizedInput::all_tokens() const {
  std::vector<std::string> out = prefix_tokens;
  out.insert(out.end(), graph_tokens.begin(), graph_tokens.end());
  return out;
}

namespace {

const std::vector<std::pair<std::string, std::string>>& language_table() {
  static const std::vector<std::pair<std::string, std::string>> table = {
      {"es", "Spanish"}, {"it", "Italian"}, {"de", "German"},
      {"zh", "Chinese"}, {"en", "English"},
  };
  return table;
}

}  // namespace

std::vector<std::string> supported_languages() {
  std::vector<std::string> codes;
  for (const auto& [code, name] : language_table()) codes.push_back(code);
  return codes;
}

std::string language_display_name(std::string_view code) {
  for (const auto& [c, name] : language_table())
    if (c == code) return name;
  throw std::invalid_argument("unknown language code: " + std::string(code));
}

namespace {

struct EdgeIndex {
  std::unordered_map<std::string, std::vector<const Edge*>> edges;
  std::unordered_map<std::string, std::vector<const Attribute*>> attrs;
};

EdgeIndex index_graph(const AmrGraph& g) {
  EdgeIndex idx;
  for (const auto& e : g.edges) idx.edges[e.source].push_back(&e);
  for (const auto& a : g.attributes) idx.attrs[a.source].push_back(&a);
  return idx;
}

void linearize_node(const AmrGraph& g, const EdgeIndex& idx, const std::string& var,
                    std::unordered_set<std::string>& visited, std::vector<std::string>& out) {
  visited.insert(var);
  out.push_back("(");
  const std::string* c = g.concept_of(var);
  out.push_back(c ? *c : "?");
  auto eit = idx.edges.find(var);
  if (eit != idx.edges.end()) {
    for (const Edge* e : eit->second) {
      out.push_back(e->relation);
      if (visited.count(e->target))
        out.push_back(e->target);
      else
        linearize_node(g, idx, e->target, visited, out);
    }
  }
  auto ait = idx.attrs.find(var);
  if (ait != idx.attrs.end()) {
    for (const Attribute* a : ait->second) {
      out.push_back(a->relation);
      out.push_back(a->value);
    }
  }
  out.push_back(")");
}

}  // namespace

std::vector<std::string> linearize(const AmrGraph& g) {
  EdgeIndex idx = index_graph(g);
  std::unordered_set<std::string> visited;
  std::vector<std::string> out;
  linearize_node(g, idx, g.root, visited, out);
  return out;
}

LinearizedInput make_task_input(const AmrGraph& g, std::string_view language_code) {
  std::string name = language_display_name(language_code);
  LinearizedInput in;
  in.target_language = std::string(language_code);
  in.prefix_text = "translate AMR to " + name + ":";
  in.prefix_tokens = {"translate", "AMR", "to", name, ":"};
  in.graph_tokens = linearize(g);
  std::size_t total = in.prefix_tokens.size() + in.graph_tokens.size();
  if (total > kMaxSourceTokens)
    in.warnings.push_back("source length " + std::to_string(total) + " exceeds max source length " +
                          std::to_string(kMaxSourceTokens));
  return in;
}

EdgeLabelVocab extract_edge_label_vocab(std::span<const AmrGraph> corpus,
                                        std::string_view corpus_id) {
  if (corpus.empty()) throw std::invalid_argument("edge label vocabulary: empty corpus");
  EdgeLabelVocab vocab;
  vocab.source_corpus_id = std::string(corpus_id);
  std::unordered_set<std::string> seen;
  for (const AmrGraph& g : corpus) {
    for (const auto& e : g.edges)
      if (seen.insert(e.relation).second) vocab.labels.push_back(e.relation);
    for (const auto& a : g.attributes)
      if (seen.insert(a.relation).second) vocab.labels.push_back(a.relation);
  }
  return vocab;
}

// ---------------------------------------------------------------------------
// Delinearization

namespace {

char concept_initial(const std::string& concept_label) {
  for (char c : concept_label)
    if (std::isalpha(static_cast<unsigned char>(c)))
      return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return 'x';
}

struct Delinearizer {
  std::span<const std::string> toks;
  std::size_t pos = 0;
  AmrGraph g;
  std::vector<Diagnostic> diags;
  std::unordered_map<char, std::size_t> initial_counts;
  std::unordered_map<std::string, std::string> ref_bindings;  // bare token -> variable
  bool failed = false;

  bool at_end() const { return pos >= toks.size(); }
  const std::string& peek() const { return toks[pos]; }

  void error(std::string msg) {
    diags.push_back({Severity::Error, pos, std::move(msg)});
    failed = true;
  }

  std::string fresh_var(const std::string& concept_label) {
    char init = concept_initial(concept_label);
    std::size_t n = ++initial_counts[init];
    std::string var(1, init);
    if (n > 1) var += std::to_string(n);
    return var;
  }

  // Resolves a bare reference token against already-created nodes: strip the
  // trailing digits to get the concept initial, use the digits as an ordinal
  // among nodes sharing that initial, and fall back to the first such node
  // when the ordinal is out of range (variable numbering in the wild is not
  // always dense).
  const std::string* resolve(const std::string& tok) {
    auto bound = ref_bindings.find(tok);
    if (bound != ref_bindings.end()) return &bound->second;
    std::size_t d = tok.size();
    while (d > 0 && std::isdigit(static_cast<unsigned char>(tok[d - 1]))) --d;
    if (d == 0) return nullptr;
    std::string letters = tok.substr(0, d);
    std::size_t ordinal = d < tok.size() ? std::stoul(tok.substr(d)) : 1;
    char init = static_cast<char>(std::tolower(static_cast<unsigned char>(letters[0])));
    std::vector<const std::string*> candidates;
    for (const auto& [var, concept_label] : g.nodes)
      if (concept_initial(concept_label) == init) candidates.push_back(&var);
    if (candidates.empty()) return nullptr;
    const std::string* pick = ordinal >= 1 && ordinal <= candidates.size()
                                  ? candidates[ordinal - 1]
                                  : candidates.front();
    ref_bindings.emplace(tok, *pick);
    return &ref_bindings[tok];
  }

  std::string parse_node() {
    if (at_end() || peek() != "(") {
      error("expected '(' structure token");
      return "";
    }
    ++pos;
    if (at_end() || peek() == "(" || peek() == ")" || peek()[0] == ':') {
      error("expected a concept label");
      return "";
    }
    std::string var = fresh_var(peek());
    g.nodes.emplace_back(var, peek());
    ++pos;
    while (!at_end() && peek() != ")") {
      const std::string& role = peek();
      if (role.empty() || role[0] != ':') {
        error("expected a relation label, got '" + role + "'");
        return "";
      }
      ++pos;
      if (at_end()) {
        error("relation '" + role + "' has no value");
        return "";
      }
      if (peek() == "(") {
        std::string child = parse_node();
        if (failed) return "";
        g.edges.push_back({var, role, child});
      } else if (peek() == ")") {
        error("relation '" + role + "' has no value");
        return "";
      } else if (is_constant_token(peek())) {
        g.attributes.push_back({var, role, peek()});
        ++pos;
      } else {
        const std::string* target = resolve(peek());
        if (!target) {
          error("unresolvable reference '" + peek() + "'");
          return "";
        }
        g.edges.push_back({var, role, *target});
        ++pos;
      }
    }
    if (at_end()) {
      error("unbalanced structure tokens: expected ')'");
      return "";
    }
    ++pos;  // ")"
    return var;
  }
};

}  // namespace

ParseResult delinearize(std::span<const std::string> tokens) {
  ParseResult result;
  if (tokens.empty()) {
    result.diagnostics.push_back({Severity::Error, 0, "empty token sequence"});
    return result;
  }
  Delinearizer d;
  d.toks = tokens;
  std::string root = d.parse_node();
  if (!d.failed && d.pos != tokens.size())
    d.error("unbalanced structure tokens: trailing content");
  if (!d.failed) {
    d.g.root = root;
    result.graph = std::move(d.g);
  }
  result.diagnostics = std::move(d.diags);
  return result;
}

}  // namespace amrtext
