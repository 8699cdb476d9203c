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

#include "robeval/attacks.hpp"

#include <algorithm>
#include <cstdlib>
#include <istream>
#include <set>

#include "robeval/error.hpp"
#include "robeval/text.hpp"

namespace robeval {
namespace {

constexpr std::string_view kArrow = "→";

// Yields (line_number, content) for lines that are neither blank nor comments.
template <typename Fn>
void for_each_resource_line(std::istream& in, Fn&& fn) {
  std::string line;
  size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string_view content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    fn(number, content);
  }
}

std::u32string decode_field(std::string_view field, const std::string& source,
                            size_t line) {
  try {
    return decode_utf8(trim(field));
  } catch (const ValidationError& e) {
    throw ValidationError(at_line(source, line, e.what()));
  }
}

char32_t single_scalar(std::string_view field, const std::string& source,
                       size_t line, const char* what) {
  const std::u32string s = decode_field(field, source, line);
  if (s.size() != 1) {
    throw ValidationError(at_line(source, line,
                                  std::string(what) + " must be a single character, got \"" +
                                      std::string(trim(field)) + "\""));
  }
  return s[0];
}

std::string describe(char32_t c) {
  std::string s;
  append_utf8(s, c);
  return s;
}

bool all_letters(std::u32string_view s) {
  return std::all_of(s.begin(), s.end(), [](char32_t c) { return is_letter(c); });
}

std::filesystem::path resource_path(const std::filesystem::path& dir,
                                    const char* name) {
  return dir / name;
}

}  // namespace

std::string_view to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::kIntrude: return "intrude";
    case AttackKind::kDisemvowel: return "disemvowel";
    case AttackKind::kKeyboardTypo: return "keyboard-typo";
    case AttackKind::kPhonetic: return "phonetic";
    case AttackKind::kVisual: return "visual";
  }
  return "unknown";
}

AttackKind parse_attack_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  std::replace(lower.begin(), lower.end(), '_', '-');
  for (AttackKind kind : kAllAttacks) {
    if (lower == to_string(kind)) return kind;
  }
  if (lower == "keyboard" || lower == "typo") return AttackKind::kKeyboardTypo;
  throw ValidationError("unknown attack \"" + std::string(name) +
                        "\" (expected intrude, disemvowel, keyboard-typo, phonetic or visual)");
}

SubstitutionTable::SubstitutionTable(Map entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw ValidationError("empty substitution table");
  for (const auto& [key, values] : entries_) {
    if (!is_letter(key)) {
      throw ValidationError("substitution key \"" + describe(key) + "\" is not a letter");
    }
    if (values.empty()) {
      throw ValidationError("substitution key \"" + describe(key) + "\" has no replacements");
    }
    if (std::find(values.begin(), values.end(), key) != values.end()) {
      throw ValidationError("self-mapping entry for \"" + describe(key) + "\"");
    }
  }
}

const std::vector<char32_t>* SubstitutionTable::find(char32_t c) const {
  const auto it = entries_.find(c);
  return it == entries_.end() ? nullptr : &it->second;
}

KeyboardLayout::KeyboardLayout(Map adjacency) : adjacency_(std::move(adjacency)) {
  if (adjacency_.empty()) throw ValidationError("empty keyboard layout");
  auto lower_letter = [](char32_t c) { return is_letter(c) && to_lower(c) == c; };
  for (const auto& [key, neighbours] : adjacency_) {
    if (!lower_letter(key)) {
      throw ValidationError("keyboard key \"" + describe(key) + "\" is not a lowercase letter");
    }
    if (neighbours.empty()) {
      throw ValidationError("keyboard key \"" + describe(key) + "\" has no neighbours");
    }
    for (char32_t n : neighbours) {
      if (!lower_letter(n) || n == key) {
        throw ValidationError("keyboard key \"" + describe(key) +
                              "\" has invalid neighbour \"" + describe(n) + "\"");
      }
      const auto back = adjacency_.find(n);
      if (back == adjacency_.end() ||
          std::find(back->second.begin(), back->second.end(), key) == back->second.end()) {
        throw ValidationError("keyboard adjacency is not symmetric: \"" + describe(key) +
                              "\" lists \"" + describe(n) + "\" but not the reverse");
      }
    }
  }
}

const std::vector<char32_t>* KeyboardLayout::neighbours(char32_t lower) const {
  const auto it = adjacency_.find(lower);
  return it == adjacency_.end() ? nullptr : &it->second;
}

PhoneticRuleSet::PhoneticRuleSet(std::vector<PhoneticRule> rules)
    : rules_(std::move(rules)) {
  if (rules_.empty()) throw ValidationError("empty phonetic rule set");
  for (auto& rule : rules_) {
    if (rule.source.empty()) throw ValidationError("phonetic rule with empty source");
    if (rule.replacement.empty()) {
      throw ValidationError("phonetic rule \"" + encode_utf8(rule.source) +
                            "\" has an empty replacement");
    }
    if (!all_letters(rule.source) || !all_letters(rule.replacement)) {
      throw ValidationError("phonetic rule \"" + encode_utf8(rule.source) +
                            "\" must rewrite letters to letters");
    }
    for (char32_t& c : rule.source) c = to_lower(c);
    max_source_ = std::max(max_source_, rule.source.size());
  }
}

std::u32string PhoneticRuleSet::apply(std::u32string_view word) const {
  std::u32string lower(word);
  for (char32_t& c : lower) c = to_lower(c);
  std::u32string out;
  out.reserve(word.size() + 4);
  size_t i = 0;
  while (i < word.size()) {
    const PhoneticRule* best = nullptr;
    for (const auto& rule : rules_) {
      const size_t n = rule.source.size();
      if (best != nullptr && n <= best->source.size()) continue;
      if (i + n <= lower.size() && lower.compare(i, n, rule.source) == 0) {
        best = &rule;
      }
    }
    if (best == nullptr) {
      out.push_back(word[i]);
      ++i;
      continue;
    }
    std::u32string replacement = best->replacement;
    if (is_upper(word[i])) replacement[0] = to_upper(replacement[0]);
    out += replacement;
    i += best->source.size();
  }
  return out;
}

SubstitutionTable parse_substitution_table(std::istream& in, const std::string& source) {
  SubstitutionTable::Map entries;
  for_each_resource_line(in, [&](size_t line, std::string_view content) {
    const size_t arrow = content.find(kArrow);
    if (arrow == std::string_view::npos) {
      throw ValidationError(at_line(source, line, "malformed line, expected X→Y1,Y2,..."));
    }
    const char32_t key = single_scalar(content.substr(0, arrow), source, line, "key");
    if (!is_letter(key)) {
      throw ValidationError(at_line(source, line, "key \"" + describe(key) + "\" is not a letter"));
    }
    std::string_view rest = content.substr(arrow + kArrow.size());
    std::vector<char32_t> values;
    while (true) {
      const size_t comma = rest.find(',');
      const char32_t value = single_scalar(rest.substr(0, comma), source, line, "replacement");
      if (value == key) {
        throw ValidationError(at_line(source, line, "self-mapping entry for \"" + describe(key) + "\""));
      }
      values.push_back(value);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (!entries.emplace(key, std::move(values)).second) {
      throw ValidationError(at_line(source, line, "duplicate key \"" + describe(key) + "\""));
    }
  });
  if (entries.empty()) throw ValidationError(source + ": empty substitution table");
  return SubstitutionTable(std::move(entries));
}

KeyboardLayout parse_keyboard_layout(std::istream& in, const std::string& source) {
  KeyboardLayout::Map adjacency;
  for_each_resource_line(in, [&](size_t line, std::string_view content) {
    const size_t colon = content.find(':');
    if (colon == std::string_view::npos) {
      throw ValidationError(at_line(source, line, "malformed line, expected x:abc"));
    }
    const char32_t key = single_scalar(content.substr(0, colon), source, line, "key");
    const std::u32string neighbours = decode_field(content.substr(colon + 1), source, line);
    if (neighbours.empty()) {
      throw ValidationError(at_line(source, line, "key \"" + describe(key) + "\" has no neighbours"));
    }
    if (!adjacency.emplace(key, std::vector<char32_t>(neighbours.begin(), neighbours.end())).second) {
      throw ValidationError(at_line(source, line, "duplicate key \"" + describe(key) + "\""));
    }
  });
  if (adjacency.empty()) throw ValidationError(source + ": empty keyboard layout");
  try {
    return KeyboardLayout(std::move(adjacency));
  } catch (const ValidationError& e) {
    throw ValidationError(source + ": " + e.what());
  }
}

PhoneticRuleSet parse_phonetic_rules(std::istream& in, const std::string& source) {
  std::vector<PhoneticRule> rules;
  for_each_resource_line(in, [&](size_t line, std::string_view content) {
    const size_t arrow = content.find(kArrow);
    if (arrow == std::string_view::npos) {
      throw ValidationError(at_line(source, line, "malformed line, expected source→replacement"));
    }
    PhoneticRule rule{decode_field(content.substr(0, arrow), source, line),
                      decode_field(content.substr(arrow + kArrow.size()), source, line)};
    if (rule.source.empty()) {
      throw ValidationError(at_line(source, line, "rule with empty source"));
    }
    if (rule.replacement.empty() || !all_letters(rule.source) || !all_letters(rule.replacement)) {
      throw ValidationError(at_line(source, line, "rule must rewrite letters to non-empty letters"));
    }
    rules.push_back(std::move(rule));
  });
  if (rules.empty()) throw ValidationError(source + ": empty phonetic rule set");
  return PhoneticRuleSet(std::move(rules));
}

SubstitutionTable load_substitution_table(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_substitution_table(in, path.string());
}

KeyboardLayout load_keyboard_layout(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_keyboard_layout(in, path.string());
}

PhoneticRuleSet load_phonetic_rules(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_phonetic_rules(in, path.string());
}

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("ROBEVAL_DATA_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return ROBEVAL_DEFAULT_DATA_DIR;
}

AttackResources load_resources(const std::filesystem::path& dir) {
  AttackResources res;
  res.substitutions = load_substitution_table(resource_path(dir, "homoglyphs.txt"));
  res.keyboard = load_keyboard_layout(resource_path(dir, "keyboard_qwerty.txt"));
  res.phonetic = load_phonetic_rules(resource_path(dir, "phonetic_rules.txt"));
  return res;
}

void validate(const AttackSpec& spec) {
  if (!(spec.level >= 0.0 && spec.level <= 1.0)) {
    throw ValidationError("perturbation level must lie in [0, 1], got " +
                          std::to_string(spec.level));
  }
  const AttackResources* res = spec.resources.get();
  auto missing = [&](const char* what) {
    throw ValidationError(std::string(to_string(spec.kind)) + " attack requires a " + what);
  };
  switch (spec.kind) {
    case AttackKind::kVisual:
      if (res == nullptr || !res->substitutions) missing("substitution table");
      break;
    case AttackKind::kKeyboardTypo:
      if (res == nullptr || !res->keyboard) missing("keyboard layout");
      break;
    case AttackKind::kPhonetic:
      if (res == nullptr || !res->phonetic) missing("phonetic rule set");
      break;
    case AttackKind::kIntrude:
      if (res != nullptr && res->intrude_symbols.empty()) missing("non-empty symbol set");
      break;
    case AttackKind::kDisemvowel:
      break;
  }
}

std::string perturb_sentence(std::string_view text, const AttackSpec& spec) {
  CounterStream stream(spec.seed);
  return perturb_sentence(text, spec, stream);
}

std::string perturb_sentence(std::string_view text, const AttackSpec& spec,
                             CounterStream& stream) {
  validate(spec);
  if (spec.level == 0.0) return std::string(text);

  static const AttackResources kNoResources{};
  const AttackResources& res = spec.resources ? *spec.resources : kNoResources;
  const std::u32string input = decode_utf8(text);
  std::u32string out;
  out.reserve(input.size() + input.size() / 2);

  if (spec.kind == AttackKind::kPhonetic) {
    size_t i = 0;
    while (i < input.size()) {
      if (is_whitespace(input[i])) {
        out.push_back(input[i++]);
        continue;
      }
      size_t end = i;
      while (end < input.size() && !is_whitespace(input[end])) ++end;
      const std::u32string_view word(input.data() + i, end - i);
      if (stream.bernoulli(spec.level)) {
        out += res.phonetic->apply(word);
      } else {
        out += word;
      }
      i = end;
    }
    return encode_utf8(out);
  }

  for (char32_t c : input) {
    if (!is_letter(c) || !stream.bernoulli(spec.level)) {
      out.push_back(c);
      continue;
    }
    switch (spec.kind) {
      case AttackKind::kIntrude: {
        out.push_back(c);
        const std::u32string& symbols = res.intrude_symbols;
        out.push_back(symbols[stream.pick(symbols.size())]);
        break;
      }
      case AttackKind::kDisemvowel:
        if (res.vowels.find(c) == std::u32string::npos) out.push_back(c);
        break;
      case AttackKind::kKeyboardTypo: {
        const auto* neighbours = res.keyboard->neighbours(to_lower(c));
        if (neighbours == nullptr) {
          out.push_back(c);
          break;
        }
        const char32_t typo = (*neighbours)[stream.pick(neighbours->size())];
        out.push_back(is_upper(c) ? to_upper(typo) : typo);
        break;
      }
      case AttackKind::kVisual: {
        const auto* subs = res.substitutions->find(c);
        out.push_back(subs == nullptr ? c : (*subs)[stream.pick(subs->size())]);
        break;
      }
      case AttackKind::kPhonetic:
        break;
    }
  }
  return encode_utf8(out);
}

std::vector<Segment> perturb_corpus(const std::vector<Segment>& segments,
                                    const AttackSpec& spec) {
  validate(spec);
  std::vector<Segment> out;
  out.reserve(segments.size());
  for (size_t i = 0; i < segments.size(); ++i) {
    CounterStream stream(substream_seed(spec.seed, i));
    out.push_back({segments[i].seg_id, perturb_sentence(segments[i].text, spec, stream)});
  }
  return out;
}

}  // namespace robeval
