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

#include "mtpasr/mtp_loss.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mtpasr {

void MtpConfig::validate() const {
  if (num_branches < 1) {
    throw std::invalid_argument("num_branches must be >= 1, got " + std::to_string(num_branches));
  }
  if (!(decay > 0.0 && decay <= 1.0)) {
    throw std::invalid_argument("decay must lie in (0, 1], got " + std::to_string(decay));
  }
}

PositionTargets PositionTargets::at(std::span<const TokenId> sequence, std::size_t t,
                                    int num_branches) {
  if (t + 1 >= sequence.size()) {
    throw std::out_of_range("position " + std::to_string(t) + " has no next-token target");
  }
  PositionTargets targets;
  targets.next_token = sequence[t + 1];
  targets.future_tokens.resize(static_cast<std::size_t>(std::max(num_branches, 0)));
  for (std::size_t h = 1; h <= targets.future_tokens.size(); ++h) {
    if (t + 1 + h < sequence.size()) {
      targets.future_tokens[h - 1] = sequence[t + 1 + h];
    }
  }
  return targets;
}

LossWeights branch_weights(const MtpConfig& config) {
  config.validate();
  const auto count = static_cast<std::size_t>(config.num_branches);
  LossWeights weights;
  weights.w.resize(count);
  double power = 1.0;
  double norm = 0.0;
  for (std::size_t h = 0; h < count; ++h) {
    weights.w[h] = power;
    norm += power;
    power *= config.decay;
  }
  for (double& w : weights.w) {
    w /= norm;
  }
  return weights;
}

double cross_entropy(const Distribution& dist, TokenId target, double probability_floor) {
  const double p = std::max(dist.prob(target), probability_floor);
  if (p <= 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return -std::log(p);
}

PositionLossTerms mtp_position_loss_terms(const Distribution& main,
                                          std::span<const Distribution> branches,
                                          const PositionTargets& targets,
                                          const LossWeights& weights, double probability_floor) {
  PositionLossTerms terms;
  terms.main = cross_entropy(main, targets.next_token, probability_floor);
  terms.total = terms.main;
  terms.branches.resize(targets.future_tokens.size());
  for (std::size_t h = 0; h < targets.future_tokens.size(); ++h) {
    const auto& target = targets.future_tokens[h];
    if (!target || h >= branches.size() || h >= weights.size()) {
      continue;
    }
    const double ce = cross_entropy(branches[h], *target, probability_floor);
    terms.branches[h] = ce;
    terms.total += weights[h] * ce;
  }
  return terms;
}

double mtp_position_loss(const Distribution& main, std::span<const Distribution> branches,
                         const PositionTargets& targets, const LossWeights& weights,
                         double probability_floor) {
  return mtp_position_loss_terms(main, branches, targets, weights, probability_floor).total;
}

double sequence_loss(std::span<const ModelStepOutput> outputs, std::span<const TokenId> tokens,
                     const MtpConfig& config, double probability_floor) {
  if (tokens.size() < 2) {
    throw std::invalid_argument("sequence has no trainable positions");
  }
  if (outputs.size() + 1 != tokens.size()) {
    throw std::invalid_argument("expected " + std::to_string(tokens.size() - 1) +
                                " step outputs, got " + std::to_string(outputs.size()));
  }
  const LossWeights weights = branch_weights(config);
  double sum = 0.0;
  for (std::size_t t = 0; t < outputs.size(); ++t) {
    const auto targets = PositionTargets::at(tokens, t, config.num_branches);
    sum += mtp_position_loss(outputs[t].main, outputs[t].branches, targets, weights,
                             probability_floor);
  }
  return sum / static_cast<double>(outputs.size());
}

}  // namespace mtpasr
