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

// Independent reference computations used to freeze and cross-check expected
// values. Nothing here calls into the code paths it checks.

#include <optional>
#include <string>
#include <vector>

#include "mtpasr/linear_model.h"

namespace mtpasr::testing {

/// Straight-line recomputation of LinearMtpModel::forward: row 0 is the main
/// distribution, row k the distribution of branch k.
std::vector<std::vector<double>> reference_forward(const LinearMtpModel& model,
                                                   const std::vector<TokenId>& context,
                                                   const std::vector<TokenId>& shifts);

/// Straight-line mean-over-positions MTP loss of one sequence under teacher
/// forcing, using reference_forward.
double reference_sequence_loss(const LinearMtpModel& model, const std::vector<TokenId>& seq,
                               int num_branches, double decay);

/// Central finite differences of batch_loss for every scalar of a block.
struct FiniteDifferenceGradients {
  Matrix embedding;
  Matrix backbone;
  std::vector<Matrix> branch_projection;
  Matrix output_head;
};
FiniteDifferenceGradients finite_difference_gradients(
    const LinearMtpModel& model, const std::vector<std::vector<TokenId>>& batch,
    const MtpConfig& config, double eps);

/// ||a - b|| / max(||a||, ||b||), 0 when both vanish.
double relative_error(const Matrix& a, const Matrix& b);

/// Exhaustive recursive Levenshtein distance.
std::size_t brute_force_distance(const std::vector<std::string>& a,
                                 const std::vector<std::string>& b);

/// Majority vote by counting every arc value separately.
struct ReferenceVote {
  bool emits = false;
  std::string token;
  bool disagreement = false;
};
ReferenceVote reference_vote(const std::vector<std::optional<std::string>>& arcs);

}  // namespace mtpasr::testing
