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

#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "mtpasr/linear_model.h"

namespace mtpasr {

enum class TrainStage {
  /// Base recognizer: E, F and U on the next-token loss alone.
  next_token_pretraining,
  /// Only the branch projections G_k update; E, F and U stay frozen.
  frozen_branch_alignment,
  /// Every block updates on the full objective.
  joint_calibration,
};

std::string_view to_string(TrainStage stage);
TrainStage parse_train_stage(std::string_view name);

/// Plain (minibatch) gradient descent settings for one stage. The recipe's
/// reference rates, 2e-4 for alignment and 2e-5 for calibration, are the
/// defaults; desk-scale corpora converge with much larger rates.
struct TrainStageConfig {
  TrainStage stage = TrainStage::frozen_branch_alignment;
  double learning_rate = defaults::kAlignmentLearningRate;
  int steps = 0;
  std::uint64_t seed = 0;
  /// Sequences per update; 0 uses the whole corpus every step. With a
  /// minibatch the sequences are drawn without replacement using `seed`.
  std::size_t batch_size = 0;

  static TrainStageConfig defaults_for(TrainStage stage);
  void validate() const;
};

/// Floor applied to target probabilities inside the trainer only.
inline constexpr double kTrainerProbabilityFloor = 1e-12;

struct TrainResult {
  LinearMtpModel model;
  /// Objective before each update.
  std::vector<double> loss;
  /// Weighted branch part of the objective before each update.
  std::vector<double> branch_loss;
};

class TrainingDiverged : public std::runtime_error {
 public:
  TrainingDiverged(int step, double loss);
  int step() const { return step_; }

 private:
  int step_;
};

TrainResult train_stage(const LinearMtpModel& model, std::span<const std::vector<TokenId>> data,
                        const TrainStageConfig& stage, const MtpConfig& mtp);

}  // namespace mtpasr
