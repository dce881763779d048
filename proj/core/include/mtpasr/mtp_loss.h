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

#include <optional>
#include <span>
#include <vector>

#include "mtpasr/defaults.h"
#include "mtpasr/distribution.h"

namespace mtpasr {

/// Number of lookahead branches and the per-branch loss decay.
struct MtpConfig {
  int num_branches = defaults::kNumBranches;
  double decay = defaults::kBranchDecay;

  /// Throws std::invalid_argument unless num_branches >= 1 and 0 < decay <= 1.
  void validate() const;
};

/// Normalized, exponentially decayed branch weights; index 0 is branch 1.
struct LossWeights {
  std::vector<double> w;

  std::size_t size() const { return w.size(); }
  double operator[](std::size_t i) const { return w[i]; }
};

/// Targets seen from one position t: the main head's next token x_{t+1} and
/// branch h's token x_{t+1+h}. A disengaged future entry is past the sequence
/// end and contributes no loss.
struct PositionTargets {
  TokenId next_token = 0;
  std::vector<std::optional<TokenId>> future_tokens;

  /// Targets for position t of `sequence` (t + 1 must be a valid index).
  static PositionTargets at(std::span<const TokenId> sequence, std::size_t t, int num_branches);
};

/// Unweighted cross-entropy terms of one position.
struct PositionLossTerms {
  double main = 0.0;
  /// One entry per branch; disengaged when the branch is masked.
  std::vector<std::optional<double>> branches;
  double total = 0.0;
};

LossWeights branch_weights(const MtpConfig& config);

/// -ln max(p(target), floor). With the default floor of zero, a target of
/// probability zero yields +infinity; callers that need a finite loss pass a
/// positive floor.
double cross_entropy(const Distribution& dist, TokenId target, double probability_floor = 0.0);

/// CE(main, x_{t+1}) + sum_h w_h * CE(branch_h, x_{t+1+h}) over unmasked branches.
/// Branches beyond `branches.size()` or `weights.size()` count as masked.
double mtp_position_loss(const Distribution& main, std::span<const Distribution> branches,
                         const PositionTargets& targets, const LossWeights& weights,
                         double probability_floor = 0.0);

PositionLossTerms mtp_position_loss_terms(const Distribution& main,
                                          std::span<const Distribution> branches,
                                          const PositionTargets& targets,
                                          const LossWeights& weights,
                                          double probability_floor = 0.0);

/// Mean of mtp_position_loss over the positions of `tokens` that have a
/// next-token target. `outputs[t]` is the model output after reading
/// tokens[0..t], so outputs.size() must equal tokens.size() - 1.
/// Throws std::invalid_argument when there is no trainable position.
double sequence_loss(std::span<const ModelStepOutput> outputs, std::span<const TokenId> tokens,
                     const MtpConfig& config, double probability_floor = 0.0);

}  // namespace mtpasr
