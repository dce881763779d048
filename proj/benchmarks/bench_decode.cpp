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

// Autoregressive vs verified decoding on a trained toy model and on table
// models with varying proposal quality.

#include <benchmark/benchmark.h>

#include <random>

#include "mtpasr/linear_model.h"
#include "mtpasr/table_model.h"
#include "mtpasr/trainer.h"
#include "mtpasr/verified_decoder.h"

namespace {

using namespace mtpasr;

const LinearMtpModel& trained_toy() {
  static const LinearMtpModel model = [] {
    constexpr std::size_t V = 8;
    std::vector<std::vector<TokenId>> corpus(V);
    for (std::size_t s = 0; s < V; ++s)
      for (std::size_t t = 0; t < 24; ++t) corpus[s].push_back(static_cast<TokenId>((s + t) % V));
    const MtpConfig mtp{5, 0.9};
    auto m = LinearMtpModel::random({V, 8, 5, 1}, 42);
    m = train_stage(m, corpus, {TrainStage::next_token_pretraining, 2.0, 300, 1, 0}, mtp).model;
    m = init_branches_from_backbone(m, 43);
    m = train_stage(m, corpus, {TrainStage::frozen_branch_alignment, 2.0, 400, 2, 0}, mtp).model;
    return train_stage(m, corpus, {TrainStage::joint_calibration, 0.5, 200, 3, 0}, mtp).model;
  }();
  return model;
}

// Order-1 table over a fixed cycle whose branches propose the true lookahead
// with probability `match` and a random token otherwise.
TableModel cycle_model(std::size_t vocab, int branches, double match, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  TableModel model(vocab, branches, 1);
  for (std::size_t c = 0; c < vocab; ++c) {
    ModelStepOutput out{Distribution::one_hot(vocab, static_cast<TokenId>((c + 1) % vocab)), {}};
    for (int h = 1; h <= branches; ++h) {
      const auto target = u(rng) < match ? (c + 1 + static_cast<std::size_t>(h)) % vocab
                                         : rng() % vocab;
      out.branches.push_back(Distribution::one_hot(vocab, static_cast<TokenId>(target)));
    }
    model.set({static_cast<TokenId>(c)}, std::move(out));
  }
  return model;
}

DecodeConfig config(int tokens) {
  DecodeConfig c;
  c.mtp = {5, 0.9};
  c.max_tokens = tokens;
  return c;
}

void BM_ToyAutoregressive(benchmark::State& state) {
  const auto& model = trained_toy();
  const std::vector<TokenId> prompt{0};
  const auto cfg = config(static_cast<int>(state.range(0)));
  std::uint64_t passes = 0;
  for (auto _ : state) {
    auto r = autoregressive_decode(model, prompt, cfg);
    passes = r.stats.forward_passes;
    benchmark::DoNotOptimize(r.tokens.data());
  }
  state.counters["forward_passes"] = static_cast<double>(passes);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ToyAutoregressive)->Arg(1000);

void BM_ToyVerified(benchmark::State& state) {
  const auto& model = trained_toy();
  const std::vector<TokenId> prompt{0};
  const auto cfg = config(static_cast<int>(state.range(0)));
  std::uint64_t passes = 0;
  for (auto _ : state) {
    auto r = verified_decode(model, prompt, cfg);
    passes = r.stats.forward_passes;
    benchmark::DoNotOptimize(r.tokens.data());
  }
  state.counters["forward_passes"] = static_cast<double>(passes);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ToyVerified)->Arg(1000);

// Proposal match probability in percent.
void BM_TableVerified(benchmark::State& state) {
  const auto model = cycle_model(64, 5, static_cast<double>(state.range(0)) / 100.0, 7);
  const std::vector<TokenId> prompt{0};
  const auto cfg = config(2000);
  double length = 0.0;
  for (auto _ : state) {
    auto r = verified_decode(model, prompt, cfg);
    length = r.stats.average_accepted_length();
    benchmark::DoNotOptimize(r.tokens.data());
  }
  state.counters["accepted_length"] = length;
}
BENCHMARK(BM_TableVerified)->Arg(0)->Arg(50)->Arg(90)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
