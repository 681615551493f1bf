#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace amrtext {

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::size_t offset = 0;  // byte position in the input
  std::string message;
};

// "severity:offset:message", the stderr reporting format.
std::string format_diagnostic(const Diagnostic& d);

struct Edge {
  std::string source;
  std::string relation;  // starts with ':'
  std::string target;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct Attribute {
  std::string source;
  std::string relation;
  std::string value;  // literal token: quoted string, number, '-', '+', or keyword
  friend bool operator==(const Attribute&, const Attribute&) = default;
  friend auto operator<=>(const Attribute&, const Attribute&) = default;
};

// Rooted, labeled, directed AMR graph. Variables ("nodes") carry concepts;
// constants live in `attributes` and do not count as nodes. Declaration
// order of nodes/edges/attributes is preserved and drives traversal order.
struct AmrGraph {
  std::string root;
  std::vector<std::pair<std::string, std::string>> nodes;  // (variable, concept)
  std::vector<Edge> edges;
  std::vector<Attribute> attributes;
  std::optional<std::pair<std::size_t, std::size_t>> source_span;

  bool has_node(std::string_view var) const;
  const std::string* concept_of(std::string_view var) const;
  std::size_t node_count() const { return nodes.size(); }
};

// Structural equality over root/nodes/edges/attributes; source_span is
// provenance metadata and deliberately ignored.
bool operator==(const AmrGraph& a, const AmrGraph& b);

// Same graphs allowing edges (and attributes) to be reordered.
bool equal_up_to_edge_order(const AmrGraph& a, const AmrGraph& b);

// Equality up to a consistent renaming of variables.
bool isomorphic(const AmrGraph& a, const AmrGraph& b);

struct GraphStats {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::size_t attribute_count = 0;
  std::vector<std::string> reentrant;  // variables with >= 2 incoming edges
};
GraphStats graph_stats(const AmrGraph& g);

struct ParseResult {
  std::optional<AmrGraph> graph;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return graph.has_value(); }
};

// Parses one parenthesized Penman expression. A bare variable in target
// position becomes a reentrant edge to the already-declared node. Quoted
// strings, numbers, '-'/'+' and the AMR mode keywords become attributes.
// Lines whose first non-blank character is '#' are skipped.
ParseResult parse_penman(std::string_view text);

// Deterministic normalized form: one relation per line, 4-space indent per
// depth, a node's edges before its attributes, reentrant targets printed as
// the bare variable. Output re-parses to an equal graph.
std::string serialize_penman(const AmrGraph& g);

// Empty iff all AmrGraph invariants hold; one diagnostic per violation.
std::vector<Diagnostic> validate(const AmrGraph& g);

// True for tokens that denote attribute constants rather than variables:
// quoted strings, numbers, '-', '+', and the mode keywords
// (imperative/expressive/interrogative).
bool is_constant_token(std::string_view tok);

}  // namespace amrtext
