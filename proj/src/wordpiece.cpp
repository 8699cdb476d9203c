// Copyright 2026 The robeval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "robeval/wordpiece.hpp"

#include "robeval/error.hpp"
#include "robeval/text.hpp"

namespace robeval {

Vocab::Vocab(std::vector<std::string> tokens, size_t max_word_chars, bool uncased)
    : tokens_(std::make_move_iterator(tokens.begin()),
              std::make_move_iterator(tokens.end())),
      max_word_chars_(max_word_chars),
      uncased_(uncased) {
  if (tokens_.empty()) throw ValidationError("empty vocabulary");
  if (!contains(kUnkToken)) throw ValidationError("vocabulary has no [UNK] token");
  if (max_word_chars_ == 0) throw ValidationError("max_word_chars must be at least 1");
}

Vocab load_vocab(const std::filesystem::path& path, size_t max_word_chars, bool uncased) {
  auto in = open_input(path);
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    tokens.push_back(std::move(line));
  }
  if (tokens.empty()) throw ValidationError(path.string() + ": empty vocabulary file");
  try {
    return Vocab(std::move(tokens), max_word_chars, uncased);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::vector<std::string> pretokenize(std::string_view text,
                                     const PretokenizeOptions& options) {
  std::vector<std::string> words;
  for (const std::string& chunk : split_whitespace(text)) {
    std::u32string chars;
    for (char32_t c : decode_utf8(chunk)) {
      if (c == 0 || c == 0xFFFD || is_control(c)) continue;
      chars.push_back(options.lowercase ? to_lower(c) : c);
    }
    if (options.strip_accents) chars = strip_accents(chars);

    std::string current;
    for (char32_t c : chars) {
      if (is_punctuation(c)) {
        if (!current.empty()) words.push_back(std::move(current));
        current.clear();
        std::string punct;
        append_utf8(punct, c);
        words.push_back(std::move(punct));
      } else {
        append_utf8(current, c);
      }
    }
    if (!current.empty()) words.push_back(std::move(current));
  }
  return words;
}

std::vector<std::string> wordpiece_tokenize(std::string_view word, const Vocab& vocab) {
  const std::u32string chars = decode_utf8(word);
  if (chars.size() > vocab.max_word_chars()) return {std::string(kUnkToken)};

  std::vector<std::string> pieces;
  size_t start = 0;
  while (start < chars.size()) {
    size_t end = chars.size();
    std::string match;
    while (start < end) {
      std::string candidate = start > 0 ? std::string(kContinuationPrefix) : std::string();
      candidate += encode_utf8(std::u32string_view(chars).substr(start, end - start));
      if (vocab.contains(candidate)) {
        match = std::move(candidate);
        break;
      }
      --end;
    }
    if (match.empty()) return {std::string(kUnkToken)};
    pieces.push_back(std::move(match));
    start = end;
  }
  return pieces;
}

std::vector<std::string> tokenize_sentence(std::string_view text, const Vocab& vocab) {
  std::vector<std::string> pieces;
  for (const auto& word : pretokenize(text, vocab.pretokenize_options())) {
    for (auto& piece : wordpiece_tokenize(word, vocab)) pieces.push_back(std::move(piece));
  }
  return pieces;
}

size_t count_unk(std::span<const std::string> pieces) {
  size_t count = 0;
  std::vector<std::string_view> buffer;
  for (const std::string& token : pieces) {
    if (token.find(kUnkToken) != std::string::npos) {
      ++count;
    } else if (token.find(kContinuationPrefix) != std::string::npos) {
      buffer.push_back(token);
    } else if (!buffer.empty()) {
      ++count;
      buffer.clear();
    }
  }
  if (pieces.size() >= 2 &&
      pieces.back().find(kContinuationPrefix) != std::string::npos) {
    ++count;
  }
  return count;
}

UnkStats corpus_unk_stats(std::span<const Segment> segments, const Vocab& vocab) {
  if (segments.empty()) throw ValidationError("empty corpus");
  UnkStats stats;
  stats.segments = segments.size();
  for (const auto& seg : segments) {
    stats.total_unk += count_unk(tokenize_sentence(seg.text, vocab));
  }
  stats.avg_per_segment =
      static_cast<double>(stats.total_unk) / static_cast<double>(stats.segments);
  return stats;
}

}  // namespace robeval
