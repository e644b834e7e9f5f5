// Copyright 2026 The kgalign Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace kgalign {

/// Splits a value string into lowercased word tokens.
///
/// Tokens break on Unicode whitespace and punctuation. Ideographic and kana
/// codepoints (CJK, Hiragana, Katakana, Hangul) each form a token of their
/// own, so "1984年" yields {"1984", "年"}. Only ASCII and Latin-1/Greek/
/// Cyrillic letters are case-folded.
std::vector<std::string> tokenize(std::string_view raw);

/// Case-folded, whitespace-trimmed form used for same-name matching.
std::string fold_label(std::string_view label);

/// Attribute value text together with its token list.
struct ValueText {
  std::string raw;
  std::vector<std::string> tokens;

  ValueText() = default;
  explicit ValueText(std::string text) : raw(std::move(text)), tokens(tokenize(raw)) {}

  /// Joins tokens with single spaces.
  static ValueText from_tokens(std::vector<std::string> toks);

  friend bool operator==(const ValueText& a, const ValueText& b) { return a.raw == b.raw; }
  friend auto operator<=>(const ValueText& a, const ValueText& b) { return a.raw <=> b.raw; }
};

}  // namespace kgalign
