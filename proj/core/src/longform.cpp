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

#include "mtpasr/longform.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "mtpasr/records_io.h"
#include "mtpasr/text_normalize.h"

namespace mtpasr {

void ClipRecord::validate() const {
  if (!std::isfinite(start) || !std::isfinite(end) || !(end > start)) {
    throw std::invalid_argument("clip '" + clip_id + "' must end after it starts");
  }
  if (duration() > defaults::kMaxClipSeconds) {
    throw std::invalid_argument("clip '" + clip_id + "' is longer than the " +
                                std::to_string(defaults::kMaxClipSeconds) + " s segment bound");
  }
}

FusionResult fuse_clip(const ClipRecord& clip, double threshold) {
  clip.validate();
  std::optional<std::string_view> hint;
  if (clip.language) {
    hint = *clip.language;
  }
  std::array<TokenSequence, kNumSystems> hyps;
  for (std::size_t s = 0; s < kNumSystems; ++s) {
    hyps[s] = normalize_text(clip.hypotheses[s], hint);
  }
  FusionResult result;
  if (std::any_of(hyps.begin(), hyps.end(), [](const auto& h) { return h.empty(); })) {
    result.kept = false;
    result.verdict = FusionVerdict::empty_hypothesis;
  } else {
    result = vote_wtn(build_wtn(hyps), threshold);
  }
  result.clip_id = clip.clip_id;
  return result;
}

std::vector<LongFormSample> concatenate_segments(std::span<const ClipFusion> clips,
                                                 double max_duration, std::size_t first_index) {
  std::vector<LongFormSample> samples;
  std::vector<std::string> tokens;
  LongFormSample open;

  auto close = [&] {
    if (open.clip_ids.empty()) {
      return;
    }
    char id[32];
    std::snprintf(id, sizeof(id), "sample-%06zu", first_index + samples.size());
    open.sample_id = id;
    open.text = join_tokens(tokens);
    samples.push_back(std::move(open));
    open = LongFormSample{};
    tokens.clear();
  };

  for (std::size_t i = 0; i < clips.size(); ++i) {
    const auto& [clip, fusion] = clips[i];
    if (i > 0 && clip.start < clips[i - 1].clip.start) {
      throw std::invalid_argument("clip '" + clip.clip_id + "' starts before its predecessor");
    }
    if (!fusion.kept) {
      close();
      continue;
    }
    const double duration = clip.duration();
    if (duration > max_duration) {
      throw std::invalid_argument("clip '" + clip.clip_id + "' alone exceeds the " +
                                  std::to_string(max_duration) + " s sample budget");
    }
    if (!open.clip_ids.empty() && open.total_duration + duration > max_duration) {
      close();
    }
    open.clip_ids.push_back(clip.clip_id);
    open.total_duration += duration;
    tokens.insert(tokens.end(), fusion.fused_tokens.begin(), fusion.fused_tokens.end());
  }
  close();
  return samples;
}

LongFormSample refine_hook(const LongFormSample& sample) { return sample; }

LongFormSample apply_refinement(const LongFormSample& sample, const RefineHook& hook) {
  LongFormSample out = sample;
  if (!hook) {
    return out;
  }
  try {
    out.text = hook(sample).text;
  } catch (const std::exception&) {
    out.text = sample.text;
    out.unrefined = true;
  }
  return out;
}

std::vector<FusionResult> fuse_clips(std::span<const ClipRecord> clips, double threshold,
                                     unsigned threads) {
  std::vector<FusionResult> results(clips.size());
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(threads, clips.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < clips.size(); ++i) {
      results[i] = fuse_clip(clips[i], threshold);
    }
    return results;
  }
  // Static interleaved partition: worker w owns indices w, w + workers, ...
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < clips.size(); i += workers) {
            results[i] = fuse_clip(clips[i], threshold);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
  return results;
}

FuseSummary run_fuse_pipeline(std::istream& clips_jsonl, std::ostream& results_jsonl,
                              std::ostream& samples_jsonl, const FuseOptions& options) {
  std::vector<std::size_t> lines;
  std::vector<ClipRecord> clips = read_clip_records(clips_jsonl, &lines);
  for (std::size_t i = 1; i < clips.size(); ++i) {
    if (clips[i].start < clips[i - 1].start) {
      throw RecordParseError(lines[i], "clip '" + clips[i].clip_id +
                                           "' starts before the previous clip");
    }
  }

  std::vector<FusionResult> results = fuse_clips(clips, options.threshold, options.threads);

  FuseSummary summary;
  summary.clips = clips.size();
  std::vector<ClipFusion> fused;
  fused.reserve(clips.size());
  for (std::size_t i = 0; i < clips.size(); ++i) {
    results_jsonl << to_json_line(results[i]) << '\n';
    switch (results[i].verdict) {
      case FusionVerdict::kept:
        ++summary.kept;
        break;
      case FusionVerdict::high_disagreement:
        ++summary.high_disagreement;
        break;
      case FusionVerdict::empty_hypothesis:
        ++summary.empty_hypothesis;
        break;
    }
    fused.push_back({std::move(clips[i]), std::move(results[i])});
  }

  for (const auto& sample : concatenate_segments(fused, options.max_duration)) {
    samples_jsonl << to_json_line(apply_refinement(sample, options.hook)) << '\n';
    ++summary.samples;
  }
  return summary;
}

}  // namespace mtpasr
