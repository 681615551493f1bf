#include "amrtext/penman.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace amrtext {

std::string format_diagnostic(const Diagnostic& d) {
  std::string out = d.severity == Severity::Error ? "error" : "warning";
  out += ":";
  out += std::to_string(d.offset);
  out += ":";
  out += d.message;
  return out;
}

bool AmrGraph::has_node(std::string_view var) const {
  for (const auto& [v, c] : nodes)
    if (v == var) return true;
  return false;
}

const std::string* AmrGraph::concept_of(std::string_view var) const {
  for (const auto& [v, c] : nodes)
    if (v == var) return &c;
  return nullptr;
}

bool operator==(const AmrGraph& a, const AmrGraph& b) {
  return a.root == b.root && a.nodes == b.nodes && a.edges == b.edges &&
         a.attributes == b.attributes;
}

bool equal_up_to_edge_order(const AmrGraph& a, const AmrGraph& b) {
  if (a.root != b.root) return false;
  auto na = a.nodes, nb = b.nodes;
  std::sort(na.begin(), na.end());
  std::sort(nb.begin(), nb.end());
  if (na != nb) return false;
  auto ea = a.edges, eb = b.edges;
  std::sort(ea.begin(), ea.end());
  std::sort(eb.begin(), eb.end());
  if (ea != eb) return false;
  auto aa = a.attributes, ab = b.attributes;
  std::sort(aa.begin(), aa.end());
  std::sort(ab.begin(), ab.end());
  return aa == ab;
}

GraphStats graph_stats(const AmrGraph& g) {
  GraphStats s;
  s.node_count = g.nodes.size();
  s.edge_count = g.edges.size();
  s.attribute_count = g.attributes.size();
  std::unordered_map<std::string, std::size_t> incoming;
  for (const auto& e : g.edges) ++incoming[e.target];
  for (const auto& [v, c] : g.nodes)
    if (incoming[v] >= 2) s.reentrant.push_back(v);
  return s;
}

bool is_constant_token(std::string_view tok) {
  if (tok.empty()) return false;
  if (tok.front() == '"') return true;
  if (tok == "-" || tok == "+") return true;
  if (tok == "imperative" || tok == "expressive" || tok == "interrogative") return true;
  // numeric: [+-]?digits[.digits][(e|E)[+-]digits]
  std::size_t i = 0;
  if (tok[i] == '+' || tok[i] == '-') ++i;
  std::size_t digits = 0;
  while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i]))) ++i, ++digits;
  if (i < tok.size() && tok[i] == '.') {
    ++i;
    while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i]))) ++i, ++digits;
  }
  if (digits == 0) return false;
  if (i < tok.size() && (tok[i] == 'e' || tok[i] == 'E')) {
    ++i;
    if (i < tok.size() && (tok[i] == '+' || tok[i] == '-')) ++i;
    std::size_t ed = 0;
    while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i]))) ++i, ++ed;
    if (ed == 0) return false;
  }
  return i == tok.size();
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class TokKind { LParen, RParen, Slash, Role, Symbol, String, End };

struct Token {
  TokKind kind;
  std::string text;
  std::size_t offset;
};

bool is_delim(char c) {
  return c == '(' || c == ')' || c == '/' || c == '"' || c == ' ' || c == '\t' ||
         c == '\n' || c == '\r';
}

struct LexOut {
  std::vector<Token> tokens;
  std::vector<Diagnostic> diagnostics;
};

LexOut lex(std::string_view text) {
  LexOut out;
  std::size_t i = 0;
  bool at_line_start = true;
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      at_line_start = true;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '#' && at_line_start) {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    at_line_start = false;
    if (c == '(') {
      out.tokens.push_back({TokKind::LParen, "(", i});
      ++i;
    } else if (c == ')') {
      out.tokens.push_back({TokKind::RParen, ")", i});
      ++i;
    } else if (c == '/') {
      out.tokens.push_back({TokKind::Slash, "/", i});
      ++i;
    } else if (c == '"') {
      std::size_t start = i;
      std::string s = "\"";
      ++i;
      bool closed = false;
      while (i < text.size()) {
        char d = text[i];
        if (d == '\\' && i + 1 < text.size()) {
          s += d;
          s += text[i + 1];
          i += 2;
          continue;
        }
        s += d;
        ++i;
        if (d == '"') {
          closed = true;
          break;
        }
      }
      if (!closed)
        out.diagnostics.push_back({Severity::Error, start, "unterminated string constant"});
      out.tokens.push_back({TokKind::String, std::move(s), start});
    } else {
      std::size_t start = i;
      while (i < text.size() && !is_delim(text[i])) ++i;
      std::string s(text.substr(start, i - start));
      if (s[0] == ':')
        out.tokens.push_back({TokKind::Role, std::move(s), start});
      else
        out.tokens.push_back({TokKind::Symbol, std::move(s), start});
    }
  }
  out.tokens.push_back({TokKind::End, "", text.size()});
  return out;
}

// ---------------------------------------------------------------------------
// Parser

constexpr int kMaxDepth = 500;

// Relations are collected in textual order and split into edges/attributes
// once all variable definitions are known, so a bare symbol can be resolved
// against the full graph (forward references included).
struct RawRel {
  enum class Target { Child, Constant, Bare } kind;
  std::string source, relation, value;
  std::size_t offset;
};

struct Parser {
  const std::vector<Token>& toks;
  std::size_t pos = 0;
  AmrGraph g;
  std::vector<Diagnostic> diags;
  std::vector<RawRel> rels;
  std::unordered_set<std::string> declared;
  bool failed = false;

  explicit Parser(const std::vector<Token>& t) : toks(t) {}

  const Token& peek() const { return toks[pos]; }
  const Token& next() { return toks[pos < toks.size() - 1 ? pos++ : pos]; }

  void error(std::size_t offset, std::string msg) {
    diags.push_back({Severity::Error, offset, std::move(msg)});
    failed = true;
  }

  // node := "(" var "/" concept relation* ")"
  std::optional<std::string> parse_node(int depth) {
    if (depth > kMaxDepth) {
      error(peek().offset, "nesting too deep");
      return std::nullopt;
    }
    const Token& lp = peek();
    if (lp.kind != TokKind::LParen) {
      error(lp.offset, "expected '('");
      return std::nullopt;
    }
    next();
    const Token& vt = peek();
    if (vt.kind != TokKind::Symbol) {
      error(vt.offset, "expected a variable after '('");
      return std::nullopt;
    }
    std::string var = vt.text;
    next();
    if (peek().kind != TokKind::Slash) {
      error(peek().offset, "variable '" + var + "' is not defined with '/ concept'");
      return std::nullopt;
    }
    next();
    const Token& ct = peek();
    if (ct.kind != TokKind::Symbol && ct.kind != TokKind::String) {
      error(ct.offset, "expected a concept after '/'");
      return std::nullopt;
    }
    std::string concept_label = ct.text;
    next();
    if (declared.count(var)) {
      error(vt.offset, "duplicate variable definition '" + var + "'");
    } else {
      declared.insert(var);
      g.nodes.emplace_back(var, concept_label);
    }

    while (true) {
      const Token& t = peek();
      if (t.kind == TokKind::RParen) {
        next();
        return var;
      }
      if (t.kind == TokKind::End) {
        error(t.offset, "unbalanced parentheses: expected ')'");
        return std::nullopt;
      }
      if (t.kind != TokKind::Role) {
        error(t.offset, "expected a relation label starting with ':'");
        return std::nullopt;
      }
      std::string role = t.text;
      std::size_t role_off = t.offset;
      next();
      const Token& v = peek();
      if (v.kind == TokKind::LParen) {
        std::size_t slot = rels.size();
        rels.push_back({RawRel::Target::Child, var, role, "", role_off});
        auto child = parse_node(depth + 1);
        if (!child) return std::nullopt;
        rels[slot].value = *child;
      } else if (v.kind == TokKind::String) {
        rels.push_back({RawRel::Target::Constant, var, role, v.text, v.offset});
        next();
      } else if (v.kind == TokKind::Symbol) {
        rels.push_back({RawRel::Target::Bare, var, role, v.text, v.offset});
        next();
      } else {
        error(v.offset, "expected a value after relation '" + role + "'");
        return std::nullopt;
      }
    }
  }
};

}  // namespace

ParseResult parse_penman(std::string_view text) {
  ParseResult result;
  LexOut lx = lex(text);
  if (!lx.diagnostics.empty()) {
    result.diagnostics = std::move(lx.diagnostics);
    return result;
  }
  if (lx.tokens.size() == 1) {
    result.diagnostics.push_back({Severity::Error, 0, "empty input"});
    return result;
  }

  Parser p(lx.tokens);
  auto root = p.parse_node(0);
  if (root && p.peek().kind != TokKind::End)
    p.error(p.peek().offset, "unbalanced parentheses: unexpected trailing content");

  if (!p.failed) {
    p.g.root = *root;
    for (const auto& r : p.rels) {
      switch (r.kind) {
        case RawRel::Target::Child:
          p.g.edges.push_back({r.source, r.relation, r.value});
          break;
        case RawRel::Target::Constant:
          p.g.attributes.push_back({r.source, r.relation, r.value});
          break;
        case RawRel::Target::Bare:
          if (p.declared.count(r.value)) {
            p.g.edges.push_back({r.source, r.relation, r.value});
          } else if (is_constant_token(r.value)) {
            p.g.attributes.push_back({r.source, r.relation, r.value});
          } else {
            p.error(r.offset, "variable '" + r.value + "' referenced but never defined");
          }
          break;
      }
    }
  }

  result.diagnostics = std::move(p.diags);
  if (!p.failed) result.graph = std::move(p.g);
  return result;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

struct Adjacency {
  std::unordered_map<std::string, std::vector<const Edge*>> edges;
  std::unordered_map<std::string, std::vector<const Attribute*>> attrs;
};

Adjacency adjacency(const AmrGraph& g) {
  Adjacency a;
  for (const auto& e : g.edges) a.edges[e.source].push_back(&e);
  for (const auto& at : g.attributes) a.attrs[at.source].push_back(&at);
  return a;
}

void serialize_node(const AmrGraph& g, const Adjacency& adj, const std::string& var,
                    int depth, std::unordered_set<std::string>& visited, std::string& out) {
  visited.insert(var);
  const std::string* concept_label = g.concept_of(var);
  out += "(" + var + " / " + (concept_label ? *concept_label : std::string("?"));
  std::string indent(static_cast<std::size_t>(depth + 1) * 4, ' ');
  auto eit = adj.edges.find(var);
  if (eit != adj.edges.end()) {
    for (const Edge* e : eit->second) {
      out += "\n" + indent + e->relation + " ";
      if (visited.count(e->target))
        out += e->target;
      else
        serialize_node(g, adj, e->target, depth + 1, visited, out);
    }
  }
  auto ait = adj.attrs.find(var);
  if (ait != adj.attrs.end()) {
    for (const Attribute* at : ait->second)
      out += "\n" + indent + at->relation + " " + at->value;
  }
  out += ")";
}

}  // namespace

std::string serialize_penman(const AmrGraph& g) {
  Adjacency adj = adjacency(g);
  std::unordered_set<std::string> visited;
  std::string out;
  serialize_node(g, adj, g.root, 0, visited, out);
  return out;
}

std::vector<Diagnostic> validate(const AmrGraph& g) {
  std::vector<Diagnostic> diags;
  auto err = [&](std::string msg) { diags.push_back({Severity::Error, 0, std::move(msg)}); };

  if (g.nodes.empty()) {
    err("graph has no nodes");
    return diags;
  }
  std::unordered_set<std::string> vars;
  for (const auto& [v, c] : g.nodes) {
    if (!vars.insert(v).second) err("duplicate variable definition '" + v + "'");
  }
  if (!vars.count(g.root)) err("root '" + g.root + "' is not a declared node");
  for (const auto& e : g.edges) {
    if (!vars.count(e.source)) err("edge source '" + e.source + "' is not a declared node");
    if (!vars.count(e.target)) err("edge target '" + e.target + "' is not a declared node");
    if (e.relation.empty() || e.relation[0] != ':')
      err("relation label '" + e.relation + "' does not begin with ':'");
  }
  for (const auto& a : g.attributes) {
    if (!vars.count(a.source)) err("attribute source '" + a.source + "' is not a declared node");
    if (a.relation.empty() || a.relation[0] != ':')
      err("relation label '" + a.relation + "' does not begin with ':'");
  }

  // reachability from the root
  std::unordered_set<std::string> seen;
  std::vector<std::string> stack;
  if (vars.count(g.root)) {
    stack.push_back(g.root);
    seen.insert(g.root);
  }
  std::unordered_map<std::string, std::vector<std::string>> out_adj;
  for (const auto& e : g.edges)
    if (vars.count(e.source) && vars.count(e.target)) out_adj[e.source].push_back(e.target);
  while (!stack.empty()) {
    std::string v = stack.back();
    stack.pop_back();
    for (const auto& t : out_adj[v])
      if (seen.insert(t).second) stack.push_back(t);
  }
  for (const auto& [v, c] : g.nodes)
    if (!seen.count(v)) err("node '" + v + "' is not reachable from the root");

  return diags;
}

namespace {

// Renames variables to v0, v1, ... in DFS visit order (edge-declaration
// order), then serializes. Isomorphic graphs collapse to the same string.
std::string canonical_form(const AmrGraph& g) {
  Adjacency adj = adjacency(g);
  std::unordered_map<std::string, std::string> rename;
  std::function<void(const std::string&)> visit = [&](const std::string& var) {
    rename.emplace(var, "v" + std::to_string(rename.size()));
    auto it = adj.edges.find(var);
    if (it == adj.edges.end()) return;
    for (const Edge* e : it->second)
      if (!rename.count(e->target)) visit(e->target);
  };
  visit(g.root);
  AmrGraph r;
  auto name = [&](const std::string& v) {
    auto it = rename.find(v);
    return it != rename.end() ? it->second : v;
  };
  r.root = name(g.root);
  for (const auto& [v, c] : g.nodes) r.nodes.emplace_back(name(v), c);
  for (const auto& e : g.edges) r.edges.push_back({name(e.source), e.relation, name(e.target)});
  for (const auto& a : g.attributes) r.attributes.push_back({name(a.source), a.relation, a.value});
  return serialize_penman(r);
}

}  // namespace

bool isomorphic(const AmrGraph& a, const AmrGraph& b) {
  if (a.nodes.size() != b.nodes.size() || a.edges.size() != b.edges.size() ||
      a.attributes.size() != b.attributes.size())
    return false;
  return canonical_form(a) == canonical_form(b);
}

}  // namespace amrtext
