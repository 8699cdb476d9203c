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

// Seeded character-level perturbations: intruders, disemvoweling, keyboard
// typos, phonetic respellings and visual (homoglyph) substitution.
//
// A perturbation level p selects each letter independently with probability
// p (each whitespace-delimited word for the phonetic attack). Only letters
// are ever changed; digits, punctuation and whitespace pass through.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "robeval/corpusio.hpp"
#include "robeval/rng.hpp"

namespace robeval {

enum class AttackKind { kIntrude, kDisemvowel, kKeyboardTypo, kPhonetic, kVisual };

inline constexpr AttackKind kAllAttacks[] = {
    AttackKind::kIntrude, AttackKind::kDisemvowel, AttackKind::kKeyboardTypo,
    AttackKind::kPhonetic, AttackKind::kVisual};

// "intrude", "disemvowel", "keyboard-typo", "phonetic", "visual".
std::string_view to_string(AttackKind kind);
// Accepts the names above; "keyboard" and "typo" are aliases for
// "keyboard-typo". Case-insensitive. Throws ValidationError.
AttackKind parse_attack_kind(std::string_view name);

// Letter -> ordered look-alike replacements.
class SubstitutionTable {
 public:
  using Map = std::map<char32_t, std::vector<char32_t>>;

  SubstitutionTable() = default;
  // Throws ValidationError if an invariant is violated.
  explicit SubstitutionTable(Map entries);

  const std::vector<char32_t>* find(char32_t c) const;
  const Map& entries() const { return entries_; }
  size_t size() const { return entries_.size(); }

 private:
  Map entries_;
};

// Lowercase letter -> physically adjacent lowercase letters. Symmetric.
class KeyboardLayout {
 public:
  using Map = std::map<char32_t, std::vector<char32_t>>;

  KeyboardLayout() = default;
  explicit KeyboardLayout(Map adjacency);

  const std::vector<char32_t>* neighbours(char32_t lower) const;
  const Map& adjacency() const { return adjacency_; }

 private:
  Map adjacency_;
};

struct PhoneticRule {
  std::u32string source;       // lowercase letters, non-empty
  std::u32string replacement;  // letters, non-empty
};

// Ordered rewrite rules. At each position the longest matching source wins,
// earlier rules win ties; replaced text is never re-scanned.
class PhoneticRuleSet {
 public:
  PhoneticRuleSet() = default;
  explicit PhoneticRuleSet(std::vector<PhoneticRule> rules);

  // Rewrites one word. Matching is case-insensitive; a replacement that
  // starts on an uppercase letter gets its first letter uppercased.
  std::u32string apply(std::u32string_view word) const;
  const std::vector<PhoneticRule>& rules() const { return rules_; }

 private:
  std::vector<PhoneticRule> rules_;
  size_t max_source_ = 0;
};

// Resource file parsers. Lines starting with '#' and blank lines are skipped.
//   substitution: `X→Y1,Y2,...`
//   keyboard:     `x:abc`
//   phonetic:     `source→replacement`
SubstitutionTable parse_substitution_table(std::istream& in, const std::string& source);
KeyboardLayout parse_keyboard_layout(std::istream& in, const std::string& source);
PhoneticRuleSet parse_phonetic_rules(std::istream& in, const std::string& source);

SubstitutionTable load_substitution_table(const std::filesystem::path& path);
KeyboardLayout load_keyboard_layout(const std::filesystem::path& path);
PhoneticRuleSet load_phonetic_rules(const std::filesystem::path& path);

inline constexpr std::u32string_view kDefaultIntrudeSymbols = U"./:+>*'";
inline constexpr std::u32string_view kDefaultVowels = U"aeiouAEIOU";

struct AttackResources {
  std::optional<SubstitutionTable> substitutions;
  std::optional<KeyboardLayout> keyboard;
  std::optional<PhoneticRuleSet> phonetic;
  std::u32string intrude_symbols{kDefaultIntrudeSymbols};
  std::u32string vowels{kDefaultVowels};
};

// Loads homoglyphs.txt, keyboard_qwerty.txt and phonetic_rules.txt from dir.
AttackResources load_resources(const std::filesystem::path& dir);
// Directory of the bundled data: $ROBEVAL_DATA_DIR or the build-time default.
std::filesystem::path default_data_dir();

struct AttackSpec {
  AttackKind kind = AttackKind::kVisual;
  double level = 0.0;
  uint64_t seed = 0;
  std::shared_ptr<const AttackResources> resources;
};

// Throws ValidationError when the level is outside [0, 1] or a resource
// required by the kind is missing.
void validate(const AttackSpec& spec);

// Perturbs with a stream keyed directly by spec.seed.
std::string perturb_sentence(std::string_view text, const AttackSpec& spec);
// Perturbs drawing from the caller's stream.
std::string perturb_sentence(std::string_view text, const AttackSpec& spec,
                             CounterStream& stream);

// Segment i is perturbed with the stream keyed by substream_seed(seed, i),
// so a segment's output does not depend on the rest of the corpus.
std::vector<Segment> perturb_corpus(const std::vector<Segment>& segments,
                                    const AttackSpec& spec);

}  // namespace robeval
