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

// UTF-8 and Unicode character-class helpers backed by ICU.

#include <string>
#include <string_view>
#include <vector>

namespace robeval {

// Decodes UTF-8 into scalar values. Throws ValidationError on malformed input.
std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view text);
void append_utf8(std::string& out, char32_t c);

// General category L*.
bool is_letter(char32_t c);
// ASCII symbol ranges plus general category P*, the usual WordPiece rule.
bool is_punctuation(char32_t c);
bool is_whitespace(char32_t c);
// Cc/Cf characters other than whitespace; dropped before tokenization.
bool is_control(char32_t c);

char32_t to_lower(char32_t c);
char32_t to_upper(char32_t c);
bool is_upper(char32_t c);

// Canonical decomposition followed by removal of nonspacing marks (Mn).
std::u32string strip_accents(std::u32string_view text);

// Splits on runs of Unicode whitespace; no empty pieces.
std::vector<std::string> split_whitespace(std::string_view text);

std::string_view trim(std::string_view s);

}  // namespace robeval
