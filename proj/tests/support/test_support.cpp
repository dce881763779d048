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

#include "test_support.h"

#include <algorithm>
#include <numeric>

#include "mtpasr/greedy.h"
#include "mtpasr/trainer.h"

namespace mtpasr::testing {

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Peaked on `top`, remaining mass spread with random (distinct) weights.
Distribution peaked(std::size_t vocab, TokenId top, std::mt19937_64& rng) {
  std::vector<double> w(vocab);
  for (auto& x : w) {
    x = 0.05 + uniform01(rng);
  }
  w[static_cast<std::size_t>(top)] = 2.0 * static_cast<double>(vocab);
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& x : w) {
    x /= sum;
  }
  return Distribution(std::move(w));
}

void enumerate_contexts(std::size_t vocab, std::size_t order, std::vector<TokenId>& prefix,
                        std::vector<std::vector<TokenId>>& out) {
  if (prefix.size() == order) {
    out.push_back(prefix);
    return;
  }
  for (std::size_t v = 0; v < vocab; ++v) {
    prefix.push_back(static_cast<TokenId>(v));
    enumerate_contexts(vocab, order, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<TokenId> greedy_lookahead(const TableModel& model, std::vector<TokenId> context,
                                      int steps) {
  std::vector<TokenId> out;
  for (int s = 0; s < steps; ++s) {
    const TokenId next = greedy_pick(model.lookup(context).main);
    out.push_back(next);
    context.push_back(next);
  }
  return out;
}

TableModel random_table_model(const RandomTableOptions& options, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t vocab = options.vocab_size;
  TableModel model(vocab, options.num_branches, options.context_order);

  std::vector<std::vector<TokenId>> contexts;
  std::vector<TokenId> prefix;
  enumerate_contexts(vocab, options.context_order, prefix, contexts);

  // First pass fixes every main head so lookaheads are well defined.
  std::vector<TokenId> top(contexts.size());
  for (std::size_t c = 0; c < contexts.size(); ++c) {
    top[c] = static_cast<TokenId>(rng() % vocab);
    ModelStepOutput out{peaked(vocab, top[c], rng), {}};
    for (int h = 0; h < options.num_branches; ++h) {
      out.branches.push_back(Distribution::uniform(vocab));
    }
    model.set(contexts[c], std::move(out));
  }
  for (std::size_t c = 0; c < contexts.size(); ++c) {
    const auto lookahead = greedy_lookahead(model, contexts[c], options.num_branches + 1);
    ModelStepOutput out = model.lookup(contexts[c]);
    for (int h = 0; h < options.num_branches; ++h) {
      const bool match = uniform01(rng) < options.lookahead_match;
      const TokenId target =
          match ? lookahead[static_cast<std::size_t>(h + 1)] : static_cast<TokenId>(rng() % vocab);
      out.branches[static_cast<std::size_t>(h)] = peaked(vocab, target, rng);
    }
    model.set(contexts[c], std::move(out));
  }
  return model;
}

TableModel cycle_table(std::size_t vocab_size, int num_branches,
                       const std::vector<TokenId>& cycle, bool perfect_branches) {
  TableModel model(vocab_size, num_branches, 1);
  const std::size_t n = cycle.size();
  for (std::size_t i = 0; i < n; ++i) {
    ModelStepOutput out{Distribution::one_hot(vocab_size, cycle[(i + 1) % n]), {}};
    for (int h = 1; h <= num_branches; ++h) {
      out.branches.push_back(perfect_branches
                                 ? Distribution::one_hot(vocab_size,
                                                         cycle[(i + 1 + static_cast<std::size_t>(h)) % n])
                                 : Distribution::uniform(vocab_size));
    }
    model.set({cycle[i]}, std::move(out));
  }
  return model;
}

std::vector<std::vector<TokenId>> cyclic_corpus(std::size_t vocab_size, std::size_t count,
                                                std::size_t length) {
  std::vector<std::vector<TokenId>> corpus(count);
  for (std::size_t s = 0; s < count; ++s) {
    for (std::size_t t = 0; t < length; ++t) {
      corpus[s].push_back(static_cast<TokenId>((s + t) % vocab_size));
    }
  }
  return corpus;
}

LinearMtpModel train_cyclic_toy(std::size_t vocab_size, int num_branches, std::uint64_t seed) {
  const auto corpus = cyclic_corpus(vocab_size, vocab_size, 24);
  MtpConfig mtp;
  mtp.num_branches = num_branches;

  LinearMtpShape shape{vocab_size, 8, num_branches, 1};
  LinearMtpModel model = LinearMtpModel::random(shape, seed);

  TrainStageConfig base{TrainStage::next_token_pretraining, 2.0, 300, seed, 0};
  model = train_stage(model, corpus, base, mtp).model;
  model = init_branches_from_backbone(model, seed + 1);
  TrainStageConfig align{TrainStage::frozen_branch_alignment, 2.0, 400, seed, 0};
  model = train_stage(model, corpus, align, mtp).model;
  TrainStageConfig joint{TrainStage::joint_calibration, 0.5, 200, seed, 0};
  return train_stage(model, corpus, joint, mtp).model;
}

}  // namespace mtpasr::testing
