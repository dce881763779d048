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

#include <gtest/gtest.h>

#include <limits>

#include "mtpasr/greedy.h"
#include "mtpasr/trainer.h"
#include "test_support.h"

namespace mtpasr {
namespace {

const MtpConfig kMtp{5, 0.9};

LinearMtpModel aligned_start(std::uint64_t seed) {
  return init_branches_from_backbone(LinearMtpModel::random({8, 8, 5, 1}, seed), seed + 1);
}

TEST(TrainStage, NamesRoundTrip) {
  for (auto stage : {TrainStage::next_token_pretraining, TrainStage::frozen_branch_alignment,
                     TrainStage::joint_calibration}) {
    EXPECT_EQ(parse_train_stage(to_string(stage)), stage);
  }
  EXPECT_THROW(parse_train_stage("stage3"), std::invalid_argument);
}

TEST(TrainStage, DefaultRates) {
  EXPECT_EQ(TrainStageConfig::defaults_for(TrainStage::frozen_branch_alignment).learning_rate,
            2e-4);
  EXPECT_EQ(TrainStageConfig::defaults_for(TrainStage::joint_calibration).learning_rate, 2e-5);
}

TEST(TrainStage, FrozenAlignmentLeavesBackboneBitIdentical) {
  const auto corpus = testing::cyclic_corpus(8, 8, 16);
  const LinearMtpModel start = aligned_start(4);
  TrainStageConfig config{TrainStage::frozen_branch_alignment, 0.5, 50, 0, 0};
  const auto result = train_stage(start, corpus, config, kMtp);
  EXPECT_EQ(result.model.embedding(), start.embedding());
  EXPECT_EQ(result.model.backbone(), start.backbone());
  EXPECT_EQ(result.model.output_head(), start.output_head());
  for (int k = 1; k <= 5; ++k) {
    EXPECT_NE(result.model.branch_projection(k), start.branch_projection(k)) << k;
  }
}

TEST(TrainStage, FrozenAlignmentStrictlyReducesBranchLoss) {
  const auto corpus = testing::cyclic_corpus(8, 8, 16);
  TrainStageConfig config{TrainStage::frozen_branch_alignment, 0.5, 50, 0, 0};
  const auto result = train_stage(aligned_start(4), corpus, config, kMtp);
  ASSERT_EQ(result.branch_loss.size(), 50u);
  for (std::size_t i = 1; i < result.branch_loss.size(); ++i) {
    EXPECT_LT(result.branch_loss[i], result.branch_loss[i - 1]) << "step " << i;
  }
}

TEST(TrainStage, JointCalibrationUpdatesEveryBlock) {
  const auto corpus = testing::cyclic_corpus(8, 8, 16);
  const LinearMtpModel start = aligned_start(9);
  TrainStageConfig config{TrainStage::joint_calibration, 0.1, 3, 0, 0};
  const auto result = train_stage(start, corpus, config, kMtp);
  EXPECT_NE(result.model.embedding(), start.embedding());
  EXPECT_NE(result.model.backbone(), start.backbone());
  EXPECT_NE(result.model.output_head(), start.output_head());
  for (int k = 1; k <= 5; ++k) EXPECT_NE(result.model.branch_projection(k), start.branch_projection(k));
}

TEST(TrainStage, PretrainingLeavesBranchesUntouched) {
  const auto corpus = testing::cyclic_corpus(8, 8, 16);
  const LinearMtpModel start = LinearMtpModel::random({8, 8, 5, 1}, 2);
  TrainStageConfig config{TrainStage::next_token_pretraining, 1.0, 5, 0, 0};
  const auto result = train_stage(start, corpus, config, kMtp);
  for (int k = 1; k <= 5; ++k) EXPECT_EQ(result.model.branch_projection(k), start.branch_projection(k));
  EXPECT_LT(result.loss.back(), result.loss.front());
}

TEST(TrainStage, ZeroStepsReturnsInput) {
  const auto corpus = testing::cyclic_corpus(8, 4, 8);
  const LinearMtpModel start = aligned_start(1);
  TrainStageConfig config{TrainStage::joint_calibration, 0.1, 0, 0, 0};
  const auto result = train_stage(start, corpus, config, kMtp);
  EXPECT_EQ(result.model, start);
  EXPECT_TRUE(result.loss.empty());
}

TEST(TrainStage, RejectsBadSettings) {
  const auto corpus = testing::cyclic_corpus(8, 4, 8);
  const LinearMtpModel start = aligned_start(1);
  EXPECT_THROW(train_stage(start, corpus, {TrainStage::joint_calibration, 0.0, 1, 0, 0}, kMtp),
               std::invalid_argument);
  EXPECT_THROW(train_stage(start, corpus, {TrainStage::joint_calibration, 0.1, -1, 0, 0}, kMtp),
               std::invalid_argument);
}

TEST(TrainStage, DivergenceNamesTheStep) {
  const auto corpus = testing::cyclic_corpus(8, 8, 16);
  TrainStageConfig config{TrainStage::joint_calibration, 1e300, 10, 0, 0};
  try {
    train_stage(aligned_start(3), corpus, config, kMtp);
    FAIL() << "expected divergence";
  } catch (const TrainingDiverged& e) {
    EXPECT_GE(e.step(), 1);
    EXPECT_LT(e.step(), 10);
  }
}

TEST(TrainStage, MinibatchIsDeterministicInSeed) {
  const auto corpus = testing::cyclic_corpus(8, 8, 16);
  TrainStageConfig config{TrainStage::joint_calibration, 0.1, 6, 17, 3};
  const auto a = train_stage(aligned_start(5), corpus, config, kMtp);
  const auto b = train_stage(aligned_start(5), corpus, config, kMtp);
  EXPECT_EQ(a.model, b.model);
  config.seed = 18;
  const auto c = train_stage(aligned_start(5), corpus, config, kMtp);
  EXPECT_NE(a.model, c.model);
}

TEST(TrainedToy, BranchesPredictTheGreedyLookahead) {
  constexpr std::size_t V = 8;
  const LinearMtpModel model = testing::train_cyclic_toy(V, 5, 42);
  std::size_t matches = 0;
  std::size_t total = 0;
  for (std::size_t c = 0; c < V; ++c) {
    const std::vector<TokenId> context{static_cast<TokenId>(c)};
    const auto out = model.step(prefill(model, context));
    EXPECT_EQ(greedy_pick(out.main), static_cast<TokenId>((c + 1) % V));
    for (std::size_t h = 1; h <= out.branches.size(); ++h) {
      matches += greedy_pick(out.branches[h - 1]) == static_cast<TokenId>((c + 1 + h) % V);
      ++total;
    }
  }
  EXPECT_GE(static_cast<double>(matches), 0.99 * static_cast<double>(total));
}

}  // namespace
}  // namespace mtpasr
