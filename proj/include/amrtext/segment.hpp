#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace amrtext {

// Inventory for greedy longest-match segmentation. Loading augments the
// inventory with every single character occurring in a piece, so any word
// over the training alphabet segments totally; characters outside it map to
// the unknown piece. An empty inventory means character-level segmentation.
struct SubwordModel {
  std::unordered_set<std::string> pieces;
  std::string unknown_piece = "<unk>";
  std::size_t max_piece_bytes = 0;
  std::string source;  // piece file path, or "char-level"

  bool char_level() const { return pieces.empty(); }

  static SubwordModel char_model();
  static SubwordModel from_pieces(const std::vector<std::string>& pieces,
                                  std::string source = "inline");
};

// Throws std::runtime_error on unreadable or empty files.
SubwordModel load_piece_file(const std::filesystem::path& path);

// Whitespace-separated words are segmented independently; within a word the
// longest matching piece wins at each position. Deterministic; joining the
// output reproduces the input unless an unknown piece was emitted.
std::vector<std::string> segment(const SubwordModel& model, std::string_view sentence);

std::size_t subword_count(const SubwordModel& model, std::string_view sentence);

}  // namespace amrtext
