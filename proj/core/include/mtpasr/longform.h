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

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mtpasr/defaults.h"
#include "mtpasr/rover.h"

namespace mtpasr {

/// One pre-segmented clip with the raw transcripts of three recognizers.
struct ClipRecord {
  std::string clip_id;
  double start = 0.0;
  double end = 0.0;
  std::array<std::string, kNumSystems> hypotheses;
  std::optional<std::string> language;

  double duration() const { return end - start; }
  /// Throws std::invalid_argument unless end > start and the duration is at
  /// most defaults::kMaxClipSeconds.
  void validate() const;

  friend bool operator==(const ClipRecord&, const ClipRecord&) = default;
};

/// normalize_text -> build_wtn -> vote_wtn. A hypothesis that normalizes to
/// nothing discards the clip with the empty_hypothesis verdict.
FusionResult fuse_clip(const ClipRecord& clip,
                       double threshold = defaults::kDisagreementThreshold);

struct ClipFusion {
  ClipRecord clip;
  FusionResult fusion;
};

struct LongFormSample {
  std::string sample_id;
  std::vector<std::string> clip_ids;
  std::string text;
  double total_duration = 0.0;
  /// Set when the refinement hook failed; the text is then the unrefined one.
  bool unrefined = false;

  friend bool operator==(const LongFormSample&, const LongFormSample&) = default;
};

/// Greedy left-to-right grouping of consecutive kept clips. A discarded clip
/// closes the open group, and a group closes when the next clip would push
/// its summed duration past `max_duration`. Sample ids are "sample-NNNNNN"
/// in output order starting at `first_index`.
///
/// Throws std::invalid_argument if clips are not ordered by start time or a
/// kept clip alone exceeds the budget.
std::vector<LongFormSample> concatenate_segments(std::span<const ClipFusion> clips,
                                                 double max_duration,
                                                 std::size_t first_index = 0);

using RefineHook = std::function<LongFormSample(const LongFormSample&)>;

/// Default refinement: returns the sample unchanged.
LongFormSample refine_hook(const LongFormSample& sample);

/// Runs `hook` and keeps only the text it produces; every other field comes
/// from `sample`. A throwing hook yields the input flagged unrefined.
LongFormSample apply_refinement(const LongFormSample& sample, const RefineHook& hook);

struct FuseOptions {
  double threshold = defaults::kDisagreementThreshold;
  double max_duration = 300.0;
  /// Worker threads for per-clip fusion; output order never depends on it.
  unsigned threads = 1;
  RefineHook hook = refine_hook;
};

struct FuseSummary {
  std::size_t clips = 0;
  std::size_t kept = 0;
  std::size_t high_disagreement = 0;
  std::size_t empty_hypothesis = 0;
  std::size_t samples = 0;
};

/// Fuses clips in parallel and returns results in input order.
std::vector<FusionResult> fuse_clips(std::span<const ClipRecord> clips, double threshold,
                                     unsigned threads);

/// Streams ClipRecord JSONL into FusionResult JSONL and LongFormSample JSONL.
/// Malformed or out-of-order input raises RecordParseError naming the line.
FuseSummary run_fuse_pipeline(std::istream& clips_jsonl, std::ostream& results_jsonl,
                              std::ostream& samples_jsonl, const FuseOptions& options = {});

}  // namespace mtpasr
