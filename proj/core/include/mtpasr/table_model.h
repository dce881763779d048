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

#include <map>
#include <vector>

#include "mtpasr/step_model.h"

namespace mtpasr {

/// Deterministic lookup model keyed on the last `context_order` tokens.
/// Contexts without an entry (including ones shorter than the order) map to
/// the fallback output, uniform over the vocabulary unless replaced.
class TableModel final : public StepModel {
 public:
  TableModel(std::size_t vocab_size, int num_branches, std::size_t context_order);

  std::size_t vocab_size() const override { return vocab_size_; }
  int num_branches() const override { return num_branches_; }
  std::size_t context_order() const { return context_order_; }

  /// Throws std::invalid_argument if `key` is not exactly context_order
  /// tokens or `output` has the wrong shape.
  void set(std::vector<TokenId> key, ModelStepOutput output);
  void set_fallback(ModelStepOutput output);

  const ModelStepOutput& lookup(std::span<const TokenId> context) const;

  std::vector<double> position_state(const DecodeCache& cache, TokenId token) const override;
  ModelStepOutput step(const DecodeCache& cache) const override;

  const std::map<std::vector<TokenId>, ModelStepOutput>& entries() const { return entries_; }

 private:
  void check_shape(const ModelStepOutput& output) const;

  std::size_t vocab_size_;
  int num_branches_;
  std::size_t context_order_;
  std::map<std::vector<TokenId>, ModelStepOutput> entries_;
  ModelStepOutput fallback_;
};

}  // namespace mtpasr
