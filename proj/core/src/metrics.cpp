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

#include "mtpasr/metrics.h"

#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>

#include "mtpasr/records_io.h"
#include "mtpasr/text_normalize.h"

namespace mtpasr {

namespace {

struct Transcript {
  std::string id;
  std::string text;
};

std::vector<Transcript> read_transcripts(std::istream& in, const char* side) {
  std::vector<Transcript> out;
  std::map<std::string, std::size_t> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) {
      continue;
    }
    const auto id_end = line.find_first_of(" \t", first);
    Transcript t;
    t.id = line.substr(first, id_end == std::string::npos ? std::string::npos : id_end - first);
    if (id_end != std::string::npos) {
      t.text = line.substr(id_end + 1);
    }
    if (!seen.emplace(t.id, lineno).second) {
      throw RecordParseError(lineno, std::string("duplicate utterance id '") + t.id + "' in " +
                                         side + " file");
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

double error_rate(const EditCounts& counts) {
  if (counts.reference_length == 0) {
    throw std::invalid_argument("error rate of an empty reference is undefined");
  }
  return static_cast<double>(counts.distance()) / static_cast<double>(counts.reference_length);
}

double rtf(const RtfMeasurement& m) {
  if (!(m.audio_seconds > 0.0) || !std::isfinite(m.audio_seconds)) {
    throw std::invalid_argument("audio duration must be positive");
  }
  if (!(m.processing_seconds > 0.0) || !std::isfinite(m.processing_seconds)) {
    throw std::invalid_argument("processing time must be positive");
  }
  return m.processing_seconds / m.audio_seconds;
}

ScoreReport score_transcripts(std::istream& reference, std::istream& hypothesis,
                              const std::string& language_hint) {
  const auto refs = read_transcripts(reference, "reference");
  const auto hyps = read_transcripts(hypothesis, "hypothesis");
  std::map<std::string, const std::string*> by_id;
  for (const auto& h : hyps) {
    by_id.emplace(h.id, &h.text);
  }

  std::optional<std::string_view> hint;
  if (!language_hint.empty()) {
    hint = language_hint;
  }
  ScoreReport report;
  for (const auto& r : refs) {
    const auto it = by_id.find(r.id);
    const auto ref_tokens = normalize_text(r.text, hint);
    const auto hyp_tokens =
        it == by_id.end() ? std::vector<std::string>{} : normalize_text(*it->second, hint);
    UtteranceScore score{r.id, edit_counts(ref_tokens, hyp_tokens)};
    report.corpus += score.counts;
    report.utterances.push_back(std::move(score));
  }
  return report;
}

}  // namespace mtpasr
