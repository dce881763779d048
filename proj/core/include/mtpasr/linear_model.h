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
#include <span>
#include <vector>

#include "mtpasr/mtp_loss.h"
#include "mtpasr/step_model.h"

namespace mtpasr {

/// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

struct LinearMtpShape {
  std::size_t vocab_size = 0;
  std::size_t hidden_dim = 0;
  int num_branches = defaults::kNumBranches;
  /// Number of trailing context tokens averaged into the backbone input;
  /// 0 averages the whole context.
  std::size_t context_window = 1;

  void validate() const;
  friend bool operator==(const LinearMtpShape&, const LinearMtpShape&) = default;
};

/// Trainable toy MTP model.
///
///   h_0    = F * mean(E[context])                      main logits = U * h_0
///   h_k    = G_k * [unit(h_{k-1}); unit(E[shift_k])]    branch logits = U * h_k
///
/// E (V x d) and U (V x d, one output row per vocabulary entry) are shared by
/// the main head and every branch. `unit` is L2 normalization with a 1e-12
/// stabilizer under the square root so it stays smooth at the origin.
class LinearMtpModel final : public StepModel {
 public:
  static constexpr double kInitRange = 0.08;
  static constexpr double kNormEpsilon = 1e-12;

  /// All-zero parameters.
  explicit LinearMtpModel(const LinearMtpShape& shape);

  /// Every parameter drawn uniformly from [-kInitRange, kInitRange]; blocks
  /// are filled in the order E, F, G_1..G_H, U.
  static LinearMtpModel random(const LinearMtpShape& shape, std::uint64_t seed);

  const LinearMtpShape& shape() const { return shape_; }
  std::size_t vocab_size() const override { return shape_.vocab_size; }
  int num_branches() const override { return shape_.num_branches; }
  std::size_t hidden_dim() const { return shape_.hidden_dim; }

  Matrix& embedding() { return embedding_; }
  const Matrix& embedding() const { return embedding_; }
  Matrix& backbone() { return backbone_; }
  const Matrix& backbone() const { return backbone_; }
  Matrix& branch_projection(int branch) { return branch_proj_.at(static_cast<std::size_t>(branch - 1)); }
  const Matrix& branch_projection(int branch) const {
    return branch_proj_.at(static_cast<std::size_t>(branch - 1));
  }
  Matrix& output_head() { return head_; }
  const Matrix& output_head() const { return head_; }

  /// Teacher-forced (or explicitly fed) forward pass. `shift_tokens[k-1]` is
  /// the token fed to branch k; branches without a shift token are omitted.
  ModelStepOutput forward(std::span<const TokenId> context,
                          std::span<const TokenId> shift_tokens) const;

  /// Stores the token's embedding row.
  std::vector<double> position_state(const DecodeCache& cache, TokenId token) const override;
  /// Main head over the cached context; branch k is fed the greedy pick of
  /// branch k-1 (the main head for k = 1).
  ModelStepOutput step(const DecodeCache& cache) const override;

  friend bool operator==(const LinearMtpModel& a, const LinearMtpModel& b) {
    return a.shape_ == b.shape_ && a.embedding_ == b.embedding_ && a.backbone_ == b.backbone_ &&
           a.branch_proj_ == b.branch_proj_ && a.head_ == b.head_;
  }

 private:
  LinearMtpShape shape_;
  Matrix embedding_;
  Matrix backbone_;
  std::vector<Matrix> branch_proj_;
  Matrix head_;
};

/// Gradient blocks with the same shapes as the model parameters.
struct LinearMtpGradients {
  Matrix embedding;
  Matrix backbone;
  std::vector<Matrix> branch_projection;
  Matrix output_head;
};

struct BackwardOptions {
  /// Targets whose probability falls below the floor are clamped and carry
  /// no gradient.
  double probability_floor = 0.0;
  /// False drops every branch term, leaving the plain next-token objective.
  bool include_branches = true;
};

struct LossAndGradients {
  double loss = 0.0;
  /// Weighted branch part of `loss` (loss minus the next-token term).
  double branch_loss = 0.0;
  LinearMtpGradients grads;
};

/// Batch objective: mean over sequences of sequence_loss under teacher forcing.
double batch_loss(const LinearMtpModel& model, std::span<const std::vector<TokenId>> batch,
                  const MtpConfig& config, const BackwardOptions& options = {});

/// Exact analytic gradients of batch_loss for every parameter block.
/// Throws std::invalid_argument if the batch has no trainable position.
LossAndGradients linear_backward(const LinearMtpModel& model,
                                 std::span<const std::vector<TokenId>> batch,
                                 const MtpConfig& config, const BackwardOptions& options = {});

/// Copies F into the hidden-state half of every G_k and redraws the token
/// half uniformly from [-kInitRange, kInitRange] using `seed`.
LinearMtpModel init_branches_from_backbone(const LinearMtpModel& model, std::uint64_t seed);

}  // namespace mtpasr
