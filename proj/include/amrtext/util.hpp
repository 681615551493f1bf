#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace amrtext {

// Whitespace-delimited split (space, tab, CR, LF), empty tokens dropped.
std::vector<std::string> split_ws(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Byte length of the UTF-8 sequence starting with `lead` (1 for malformed bytes).
std::size_t utf8_seq_len(unsigned char lead);

// Splits text into UTF-8 codepoint substrings. Malformed bytes pass through
// one byte at a time.
std::vector<std::string> utf8_codepoints(std::string_view text);

// FNV-1a 64-bit, used for stable content ids.
std::uint64_t fnv1a64(std::string_view data);
std::string fnv1a64_hex(std::string_view data);

std::string read_file(const std::filesystem::path& path);
std::vector<std::string> read_lines(const std::filesystem::path& path);

// Writes to a temp file in the target directory and renames into place, so a
// failed run never leaves a partial output behind.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// Uniform integer in [0, n) from g, by rejection. mt19937_64 output is
// pinned by the standard, so results are reproducible across platforms.
std::uint64_t bounded_rand(std::mt19937_64& g, std::uint64_t n);

template <typename T>
void deterministic_shuffle(std::vector<T>& v, std::mt19937_64& g) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(bounded_rand(g, i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace amrtext
