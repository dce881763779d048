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

#include "mtpasr/text_normalize.h"

namespace mtpasr {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

bool in(char32_t cp, char32_t lo, char32_t hi) { return cp >= lo && cp <= hi; }

char32_t fold_width(char32_t cp) {
  if (in(cp, 0xFF01, 0xFF5E)) {
    return cp - 0xFEE0;
  }
  if (cp == 0x3000) {
    return U' ';
  }
  // Typographic apostrophes behave like the ASCII one.
  if (cp == 0x2019 || cp == 0x2018 || cp == 0xFF07) {
    return U'\'';
  }
  return cp;
}

char32_t fold_case(char32_t cp) {
  if (in(cp, U'A', U'Z')) {
    return cp + 32;
  }
  if (cp < 0x80) {
    return cp;
  }
  if (in(cp, 0xC0, 0xDE) && cp != 0xD7) {
    return cp + 32;
  }
  if (in(cp, 0x100, 0x137) || in(cp, 0x14A, 0x177)) {
    return cp | 1u;
  }
  if (in(cp, 0x139, 0x148) || in(cp, 0x179, 0x17E)) {
    return (cp & 1u) ? cp + 1 : cp;
  }
  if (cp == 0x178) {
    return 0xFF;
  }
  if (in(cp, 0x391, 0x3A9) && cp != 0x3A2) {
    return cp + 32;
  }
  if (in(cp, 0x410, 0x42F)) {
    return cp + 32;
  }
  if (in(cp, 0x400, 0x40F)) {
    return cp + 80;
  }
  return cp;
}

bool is_space(char32_t cp) {
  return cp == U' ' || in(cp, 0x09, 0x0D) || cp == 0x85 || cp == 0xA0 || cp == 0x1680 ||
         in(cp, 0x2000, 0x200A) || cp == 0x2028 || cp == 0x2029 || cp == 0x202F ||
         cp == 0x205F || cp == 0x3000;
}

bool is_invisible(char32_t cp) { return in(cp, 0x200B, 0x200D) || cp == 0x2060 || cp == 0xFEFF; }

bool is_punctuation(char32_t cp) {
  if (cp < 0x80) {
    return in(cp, 0x21, 0x2F) || in(cp, 0x3A, 0x40) || in(cp, 0x5B, 0x60) || in(cp, 0x7B, 0x7E);
  }
  if (in(cp, 0xA1, 0xBF)) {
    // Keep ordinal indicators, micro sign, superscript digits and fractions.
    return !(cp == 0xAA || cp == 0xB2 || cp == 0xB3 || cp == 0xB5 || cp == 0xB9 || cp == 0xBA ||
             in(cp, 0xBC, 0xBE));
  }
  if (cp == 0xD7 || cp == 0xF7) {
    return true;
  }
  if (in(cp, 0x2010, 0x2027) || in(cp, 0x2030, 0x205E)) {
    return true;
  }
  if (in(cp, 0x3001, 0x303F)) {
    // Iteration mark, closing mark, ideographic zero and the Hangzhou
    // numerals are word characters.
    return !(in(cp, 0x3005, 0x3007) || in(cp, 0x3021, 0x3029) || in(cp, 0x3031, 0x3035) ||
             in(cp, 0x303B, 0x303C));
  }
  return in(cp, 0xFF61, 0xFF65) || cp == 0x30FB || cp == kReplacement;
}

bool is_word_char(char32_t cp) {
  return cp != 0 && !is_space(cp) && !is_punctuation(cp) && !is_invisible(cp);
}

}  // namespace

bool is_cjk_codepoint(char32_t cp) {
  return in(cp, 0x4E00, 0x9FFF) || in(cp, 0x3400, 0x4DBF) || in(cp, 0xF900, 0xFAFF) ||
         in(cp, 0x20000, 0x2FA1F) || in(cp, 0x3040, 0x309F) || in(cp, 0x30A0, 0x30FA) ||
         in(cp, 0x30FC, 0x30FF) || in(cp, 0x31F0, 0x31FF) || in(cp, 0x3005, 0x3007);
}

std::u32string decode_utf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    std::size_t len = 0;
    char32_t cp = 0;
    char32_t min = 0;
    if (b0 < 0x80) {
      out.push_back(b0);
      ++i;
      continue;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2, cp = b0 & 0x1F, min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3, cp = b0 & 0x0F, min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4, cp = b0 & 0x07, min = 0x10000;
    } else {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    bool ok = i + len <= text.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      const auto b = static_cast<unsigned char>(text[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
      } else {
        cp = (cp << 6) | (b & 0x3F);
      }
    }
    if (!ok || cp < min || cp > 0x10FFFF || in(cp, 0xD800, 0xDFFF)) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::vector<std::string> normalize_text(std::string_view raw,
                                        std::optional<std::string_view> language_hint) {
  const bool per_character = language_hint && *language_hint == "char";

  std::u32string folded;
  for (char32_t cp : decode_utf8(raw)) {
    cp = fold_case(fold_width(cp));
    if (!is_invisible(cp)) {
      folded.push_back(cp);
    }
  }

  std::vector<std::string> tokens;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) {
      tokens.push_back(std::move(word));
      word.clear();
    }
  };

  for (std::size_t i = 0; i < folded.size(); ++i) {
    const char32_t cp = folded[i];
    if (cp == U'\'') {
      const bool inner = i > 0 && i + 1 < folded.size() && is_word_char(folded[i - 1]) &&
                         is_word_char(folded[i + 1]) && !is_cjk_codepoint(folded[i - 1]) &&
                         !is_cjk_codepoint(folded[i + 1]);
      if (inner && !per_character) {
        append_utf8(word, cp);
        continue;
      }
      flush();
      continue;
    }
    if (!is_word_char(cp)) {
      flush();
      continue;
    }
    if (per_character || is_cjk_codepoint(cp)) {
      flush();
      append_utf8(word, cp);
      flush();
      continue;
    }
    append_utf8(word, cp);
  }
  flush();
  return tokens;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  auto single_cjk = [](const std::string& token) {
    const std::u32string cps = decode_utf8(token);
    return cps.size() == 1 && is_cjk_codepoint(cps[0]);
  };
  std::string out;
  bool previous_cjk = false;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const bool cjk = single_cjk(tokens[i]);
    if (i > 0 && !(cjk && previous_cjk)) {
      out.push_back(' ');
    }
    out += tokens[i];
    previous_cjk = cjk;
  }
  return out;
}

}  // namespace mtpasr
