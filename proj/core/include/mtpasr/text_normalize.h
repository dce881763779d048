/*
 * Copyright 2026 The mtpasr Authors.
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mtpasr {

/// Surface-form normalization shared by hypothesis fusion and scoring.
///
/// In order: invalid UTF-8 becomes U+FFFD (itself a separator); fullwidth ASCII variants
/// (U+FF01..U+FF5E) and the ideographic space fold to their halfwidth forms;
/// Latin, Greek and Cyrillic letters are lowercased; punctuation (see
/// docs/normalization.md for the exact class) turns into a separator, except
/// an apostrophe between two letters or digits; whitespace runs collapse.
/// Digits pass through untouched.
///
/// Tokens are whitespace-delimited words, except that every Han, Hiragana and
/// Katakana codepoint is a token of its own. A language hint of "char" makes
/// every non-space codepoint its own token (character-level scoring); other
/// hints are accepted and do not change the policy.
std::vector<std::string> normalize_text(std::string_view raw,
                                        std::optional<std::string_view> language_hint = {});

/// Joins tokens with single spaces, omitting the space between two
/// single-codepoint CJK tokens.
std::string join_tokens(const std::vector<std::string>& tokens);

bool is_cjk_codepoint(char32_t cp);

std::u32string decode_utf8(std::string_view text);
void append_utf8(std::string& out, char32_t cp);

}  // namespace mtpasr
