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

#include <algorithm>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mtpasr {

struct EditCounts {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t reference_length = 0;

  std::size_t distance() const { return substitutions + deletions + insertions; }

  EditCounts& operator+=(const EditCounts& o) {
    substitutions += o.substitutions;
    deletions += o.deletions;
    insertions += o.insertions;
    reference_length += o.reference_length;
    return *this;
  }
  friend bool operator==(const EditCounts&, const EditCounts&) = default;
};

/// Unit-cost Levenshtein alignment of hypothesis against reference.
/// Among minimum-cost alignments the traceback prefers substitution/match,
/// then deletion, then insertion, so a substitution is never split into an
/// insertion-deletion pair.
template <typename T>
EditCounts edit_counts(std::span<const T> ref, std::span<const T> hyp) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  const std::size_t width = m + 1;
  std::vector<std::size_t> d((n + 1) * width);
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return d[i * width + j]; };
  for (std::size_t j = 0; j <= m; ++j) {
    at(0, j) = j;
  }
  for (std::size_t i = 1; i <= n; ++i) {
    at(i, 0) = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = ref[i - 1] == hyp[j - 1] ? 0 : 1;
      at(i, j) = std::min({at(i - 1, j - 1) + sub, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }

  EditCounts counts;
  counts.reference_length = n;
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const std::size_t sub = ref[i - 1] == hyp[j - 1] ? 0 : 1;
      if (at(i, j) == at(i - 1, j - 1) + sub) {
        counts.substitutions += sub;
        --i, --j;
        continue;
      }
    }
    if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      ++counts.deletions;
      --i;
      continue;
    }
    ++counts.insertions;
    --j;
  }
  return counts;
}

inline EditCounts edit_counts(const std::vector<std::string>& ref,
                              const std::vector<std::string>& hyp) {
  return edit_counts<std::string>(std::span<const std::string>(ref),
                                  std::span<const std::string>(hyp));
}

/// (S + D + I) / reference_length; may exceed 1. Throws std::invalid_argument
/// on an empty reference.
double error_rate(const EditCounts& counts);

struct RtfMeasurement {
  double processing_seconds = 0.0;
  double audio_seconds = 0.0;
};

/// processing / audio. Throws std::invalid_argument unless both are positive.
double rtf(const RtfMeasurement& m);

struct UtteranceScore {
  std::string id;
  EditCounts counts;
};

struct ScoreReport {
  std::vector<UtteranceScore> utterances;
  EditCounts corpus;
};

/// Scores Kaldi-style transcript files ("<utt-id> <text...>" per line). Both
/// sides are normalized with normalize_text and `language_hint` ("char" for
/// character error rate). A reference utterance missing from the hypotheses
/// scores against an empty hypothesis. Malformed lines and duplicate ids
/// raise RecordParseError with the offending line.
ScoreReport score_transcripts(std::istream& reference, std::istream& hypothesis,
                              const std::string& language_hint = {});

}  // namespace mtpasr
