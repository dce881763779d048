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

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtpasr/defaults.h"

namespace mtpasr {

class InvalidDistribution : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A probability vector over the vocabulary. Entries are non-negative and sum
/// to one within kSumTolerance; every constructor path enforces this.
class Distribution {
 public:
  static constexpr double kSumTolerance = 1e-9;

  explicit Distribution(std::vector<double> probs);

  static Distribution uniform(std::size_t vocab_size);
  static Distribution one_hot(std::size_t vocab_size, TokenId token);
  /// Numerically stable softmax.
  static Distribution from_logits(std::span<const double> logits);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  double prob(TokenId token) const;
  std::span<const double> probs() const { return probs_; }

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  std::vector<double> probs_;
};

/// One decode step: the main next-token distribution plus one distribution per
/// lookahead branch (branch h predicts the token h positions after the main one).
struct ModelStepOutput {
  Distribution main;
  std::vector<Distribution> branches;

  friend bool operator==(const ModelStepOutput&, const ModelStepOutput&) = default;
};

/// Throws InvalidDistribution if the branch distributions disagree with main
/// on vocabulary size.
void check_step_output(const ModelStepOutput& out);

}  // namespace mtpasr
