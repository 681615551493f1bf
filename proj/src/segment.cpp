#include "amrtext/segment.hpp"

#include <algorithm>
#include <stdexcept>

#include "amrtext/util.hpp"

namespace amrtext {

SubwordModel SubwordModel::char_model() {
  SubwordModel m;
  m.source = "char-level";
  return m;
}

SubwordModel SubwordModel::from_pieces(const std::vector<std::string>& pieces,
                                       std::string source) {
  SubwordModel m;
  m.source = std::move(source);
  for (const auto& p : pieces) {
    if (p.empty()) continue;
    m.pieces.insert(p);
    for (const auto& c : utf8_codepoints(p)) m.pieces.insert(c);
  }
  for (const auto& p : m.pieces) m.max_piece_bytes = std::max(m.max_piece_bytes, p.size());
  return m;
}

SubwordModel load_piece_file(const std::filesystem::path& path) {
  std::vector<std::string> lines = read_lines(path);
  std::vector<std::string> pieces;
  for (auto& line : lines)
    if (!line.empty()) pieces.push_back(std::move(line));
  if (pieces.empty()) throw std::runtime_error("empty piece file: " + path.string());
  return SubwordModel::from_pieces(pieces, path.string());
}

namespace {

void segment_word(const SubwordModel& model, std::string_view word,
                  std::vector<std::string>& out) {
  if (model.char_level()) {
    for (auto& c : utf8_codepoints(word)) out.push_back(std::move(c));
    return;
  }
  std::size_t pos = 0;
  std::string probe;
  while (pos < word.size()) {
    std::size_t best = 0;
    std::size_t cap = std::min(model.max_piece_bytes, word.size() - pos);
    for (std::size_t len = cap; len >= 1; --len) {
      probe.assign(word.substr(pos, len));
      if (model.pieces.count(probe)) {
        best = len;
        break;
      }
    }
    if (best > 0) {
      out.emplace_back(word.substr(pos, best));
      pos += best;
    } else {
      out.push_back(model.unknown_piece);
      pos += std::min(utf8_seq_len(static_cast<unsigned char>(word[pos])), word.size() - pos);
    }
  }
}

}  // namespace

std::vector<std::string> segment(const SubwordModel& model, std::string_view sentence) {
  std::vector<std::string> out;
  std::size_t i = 0;
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
  while (i < sentence.size()) {
    while (i < sentence.size() && is_space(sentence[i])) ++i;
    std::size_t start = i;
    while (i < sentence.size() && !is_space(sentence[i])) ++i;
    if (i > start) segment_word(model, sentence.substr(start, i - start), out);
  }
  return out;
}

std::size_t subword_count(const SubwordModel& model, std::string_view sentence) {
  return segment(model, sentence).size();
}

}  // namespace amrtext
