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

// Per-clip fusion and edit-distance scoring throughput.

#include <benchmark/benchmark.h>

#include <random>

#include "mtpasr/longform.h"
#include "mtpasr/metrics.h"
#include "mtpasr/text_normalize.h"

namespace {

using namespace mtpasr;

std::vector<std::string> random_words(std::mt19937_64& rng, std::size_t n) {
  static const char* words[] = {"the", "cat", "sat", "on", "a", "mat", "and", "then", "slept"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(words[rng() % 9]);
  return out;
}

// Three hypotheses of `range(0)` words, each a noisy copy of a common base.
ClipRecord noisy_clip(std::size_t words, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto base = random_words(rng, words);
  ClipRecord clip{"bench", 0.0, 20.0, {}, {}};
  for (auto& h : clip.hypotheses) {
    for (const auto& w : base) {
      if (rng() % 20 == 0) continue;
      h += (rng() % 20 == 0 ? std::string("oops") : w) + " ";
    }
  }
  return clip;
}

void BM_FuseClip(benchmark::State& state) {
  const auto clip = noisy_clip(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) {
    auto r = fuse_clip(clip);
    benchmark::DoNotOptimize(r.e_hat);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FuseClip)->Arg(10)->Arg(50)->Arg(200);

void BM_Normalize(benchmark::State& state) {
  const std::string text = "Ｔhe CAT, sat on 你好 the mat! don't stop 世界。 ";
  std::string long_text;
  for (int i = 0; i < state.range(0); ++i) long_text += text;
  for (auto _ : state) {
    auto tokens = normalize_text(long_text);
    benchmark::DoNotOptimize(tokens.data());
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(long_text.size()));
}
BENCHMARK(BM_Normalize)->Arg(1)->Arg(100);

void BM_EditDistance(benchmark::State& state) {
  std::mt19937_64 rng(5);
  const auto ref = random_words(rng, static_cast<std::size_t>(state.range(0)));
  auto hyp = ref;
  for (auto& w : hyp)
    if (rng() % 10 == 0) w = "oops";
  for (auto _ : state) {
    auto c = edit_counts(ref, hyp);
    benchmark::DoNotOptimize(c.substitutions);
  }
}
BENCHMARK(BM_EditDistance)->Arg(20)->Arg(200)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
