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

#include "mtpasr/trainer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

namespace mtpasr {

namespace {

void descend(Matrix& param, const Matrix& grad, double lr) {
  for (std::size_t i = 0; i < param.data.size(); ++i) {
    param.data[i] -= lr * grad.data[i];
  }
}

}  // namespace

std::string_view to_string(TrainStage stage) {
  switch (stage) {
    case TrainStage::next_token_pretraining:
      return "next_token_pretraining";
    case TrainStage::frozen_branch_alignment:
      return "frozen_branch_alignment";
    case TrainStage::joint_calibration:
      return "joint_calibration";
  }
  return "unknown";
}

TrainStage parse_train_stage(std::string_view name) {
  for (auto stage : {TrainStage::next_token_pretraining, TrainStage::frozen_branch_alignment,
                     TrainStage::joint_calibration}) {
    if (name == to_string(stage)) {
      return stage;
    }
  }
  throw std::invalid_argument("unknown training stage '" + std::string(name) + "'");
}

TrainStageConfig TrainStageConfig::defaults_for(TrainStage stage) {
  TrainStageConfig config;
  config.stage = stage;
  config.learning_rate = stage == TrainStage::joint_calibration
                             ? defaults::kCalibrationLearningRate
                             : defaults::kAlignmentLearningRate;
  return config;
}

void TrainStageConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw std::invalid_argument("learning rate must be positive");
  }
  if (steps < 0) {
    throw std::invalid_argument("steps must be >= 0");
  }
}

TrainingDiverged::TrainingDiverged(int step, double loss)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "training diverged at step " << step << " (loss " << loss << ")";
        return os.str();
      }()),
      step_(step) {}

TrainResult train_stage(const LinearMtpModel& model, std::span<const std::vector<TokenId>> data,
                        const TrainStageConfig& stage, const MtpConfig& mtp) {
  stage.validate();
  mtp.validate();
  TrainResult result{model, {}, {}};
  if (stage.steps == 0) {
    return result;
  }

  BackwardOptions options;
  options.probability_floor = kTrainerProbabilityFloor;
  options.include_branches = stage.stage != TrainStage::next_token_pretraining;
  const bool update_backbone = stage.stage != TrainStage::frozen_branch_alignment;
  const bool update_branches = stage.stage != TrainStage::next_token_pretraining;

  std::mt19937_64 rng(stage.seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::size_t cursor = order.size();
  const bool minibatch = stage.batch_size > 0 && stage.batch_size < data.size();
  std::vector<std::vector<TokenId>> batch;

  LinearMtpModel& current = result.model;
  for (int step = 0; step < stage.steps; ++step) {
    std::span<const std::vector<TokenId>> view = data;
    if (minibatch) {
      batch.clear();
      while (batch.size() < stage.batch_size) {
        if (cursor == order.size()) {
          // Fisher-Yates with an explicit draw keeps the order independent of
          // the standard library's distribution implementations.
          for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[rng() % i]);
          }
          cursor = 0;
        }
        batch.push_back(data[order[cursor++]]);
      }
      view = batch;
    }

    LossAndGradients lg;
    try {
      lg = linear_backward(current, view, mtp, options);
    } catch (const InvalidDistribution&) {
      // Parameters overflowed on the previous update.
      throw TrainingDiverged(step, std::numeric_limits<double>::quiet_NaN());
    }
    if (!std::isfinite(lg.loss)) {
      throw TrainingDiverged(step, lg.loss);
    }
    result.loss.push_back(lg.loss);
    result.branch_loss.push_back(lg.branch_loss);

    const double lr = stage.learning_rate;
    if (update_backbone) {
      descend(current.embedding(), lg.grads.embedding, lr);
      descend(current.backbone(), lg.grads.backbone, lr);
      descend(current.output_head(), lg.grads.output_head, lr);
    }
    if (update_branches) {
      for (int k = 1; k <= current.num_branches(); ++k) {
        descend(current.branch_projection(k),
                lg.grads.branch_projection[static_cast<std::size_t>(k - 1)], lr);
      }
    }
  }
  return result;
}

}  // namespace mtpasr
