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

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mtpasr/acceptance.h"
#include "mtpasr/longform.h"
#include "mtpasr/metrics.h"
#include "mtpasr/rover.h"

namespace mtpasr {

/// A malformed record; line() is 1-based, or 0 when parsing a lone string.
class RecordParseError : public std::runtime_error {
 public:
  RecordParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// JSONL records. Field names (see docs/formats.md):
//   ClipRecord      clip_id, start, end, hyps[3], lang (optional)
//   FusionResult    clip_id, fused_tokens[], disagreed_positions, text_units,
//                   e_hat, kept, verdict
//   LongFormSample  sample_id, clip_ids[], text, total_duration, unrefined

std::string to_json_line(const ClipRecord& clip);
std::string to_json_line(const FusionResult& result);
std::string to_json_line(const LongFormSample& sample);

ClipRecord parse_clip_record(std::string_view line);
FusionResult parse_fusion_result(std::string_view line);
LongFormSample parse_long_form_sample(std::string_view line);

/// Reads every non-blank line; `line_numbers`, when given, receives the
/// source line of each record.
std::vector<ClipRecord> read_clip_records(std::istream& in,
                                          std::vector<std::size_t>* line_numbers = nullptr);
std::vector<FusionResult> read_fusion_results(std::istream& in);
std::vector<LongFormSample> read_long_form_samples(std::istream& in);

/// Flat stats document: rates[], avg_accepted_length, tokens, forward_passes,
/// rollbacks, plus num_branches, steps, tokens_per_forward_pass, attempts[]
/// and accepts[] so the counters round-trip.
std::string stats_to_json(const AcceptanceStats& stats, int indent = 2);
AcceptanceStats stats_from_json(std::string_view json);

/// Per-utterance and corpus error rates; a rate is null for an empty reference.
std::string score_report_to_json(const ScoreReport& report, int indent = 2);

}  // namespace mtpasr
