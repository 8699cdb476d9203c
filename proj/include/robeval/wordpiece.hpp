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

#pragma once

// WordPiece tokenization (greedy longest-match-first) and unknown-token
// statistics.

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "robeval/corpusio.hpp"

namespace robeval {

inline constexpr std::string_view kUnkToken = "[UNK]";
inline constexpr std::string_view kContinuationPrefix = "##";
inline constexpr size_t kDefaultMaxWordChars = 100;

struct PretokenizeOptions {
  bool lowercase = true;
  bool strip_accents = true;
};

class Vocab {
 public:
  // Throws ValidationError when "[UNK]" is absent, the token list is empty
  // or max_word_chars is zero.
  Vocab(std::vector<std::string> tokens, size_t max_word_chars = kDefaultMaxWordChars,
        bool uncased = true);

  bool contains(std::string_view token) const {
    return tokens_.find(std::string(token)) != tokens_.end();
  }
  size_t size() const { return tokens_.size(); }
  size_t max_word_chars() const { return max_word_chars_; }
  bool uncased() const { return uncased_; }
  PretokenizeOptions pretokenize_options() const { return {uncased_, uncased_}; }

 private:
  std::unordered_set<std::string> tokens_;
  size_t max_word_chars_;
  bool uncased_;
};

// One token per line; duplicate lines collapse.
Vocab load_vocab(const std::filesystem::path& path,
                 size_t max_word_chars = kDefaultMaxWordChars, bool uncased = true);

// Whitespace split, control characters dropped, optional lowercasing and
// accent stripping, then every punctuation character becomes its own word.
std::vector<std::string> pretokenize(std::string_view text,
                                     const PretokenizeOptions& options = {});

// Greedy longest-match-first. Pieces after the first carry the "##" prefix.
// Returns {"[UNK]"} if some position has no match or the word is longer than
// vocab.max_word_chars() characters.
std::vector<std::string> wordpiece_tokenize(std::string_view word, const Vocab& vocab);

std::vector<std::string> tokenize_sentence(std::string_view text, const Vocab& vocab);

// Unknown-token count of a tokenized sentence, transcribed step for step
// from the published counting procedure:
//   - a piece containing "[UNK]" counts 1;
//   - else a piece containing "##" goes into a buffer;
//   - else a non-empty buffer counts 1 and is emptied;
//   - finally, if the sentence has at least 2 pieces and the last one
//     contains "##", count 1 more.
// The buffer is not flushed at the end of the loop and "[UNK]" pieces do not
// flush it, so e.g. {"[UNK]", "##x", "world"} counts 2 and a lone {"##x"}
// counts 0.
size_t count_unk(std::span<const std::string> pieces);

struct UnkStats {
  size_t segments = 0;
  size_t total_unk = 0;
  double avg_per_segment = 0.0;
};

// Throws ValidationError on an empty corpus.
UnkStats corpus_unk_stats(std::span<const Segment> segments, const Vocab& vocab);

}  // namespace robeval
