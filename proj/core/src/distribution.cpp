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

#include "mtpasr/distribution.h"

#include <algorithm>
#include <cmath>

namespace mtpasr {

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) {
    throw InvalidDistribution("distribution over an empty vocabulary");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    const double p = probs_[i];
    if (!std::isfinite(p) || p < 0.0) {
      throw InvalidDistribution("probability at index " + std::to_string(i) +
                                " is negative or non-finite");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw InvalidDistribution("probabilities sum to " + std::to_string(sum));
  }
}

Distribution Distribution::uniform(std::size_t vocab_size) {
  if (vocab_size == 0) {
    throw InvalidDistribution("distribution over an empty vocabulary");
  }
  return Distribution(std::vector<double>(vocab_size, 1.0 / static_cast<double>(vocab_size)));
}

Distribution Distribution::one_hot(std::size_t vocab_size, TokenId token) {
  if (token < 0 || static_cast<std::size_t>(token) >= vocab_size) {
    throw InvalidDistribution("one-hot token " + std::to_string(token) + " outside vocabulary");
  }
  std::vector<double> probs(vocab_size, 0.0);
  probs[static_cast<std::size_t>(token)] = 1.0;
  return Distribution(std::move(probs));
}

Distribution Distribution::from_logits(std::span<const double> logits) {
  if (logits.empty()) {
    throw InvalidDistribution("softmax over an empty vocabulary");
  }
  const double max_logit = *std::max_element(logits.begin(), logits.end());
  if (!std::isfinite(max_logit)) {
    throw InvalidDistribution("non-finite logits");
  }
  std::vector<double> probs(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp(logits[i] - max_logit);
    sum += probs[i];
  }
  for (double& p : probs) {
    p /= sum;
  }
  return Distribution(std::move(probs));
}

double Distribution::prob(TokenId token) const {
  if (token < 0 || static_cast<std::size_t>(token) >= probs_.size()) {
    throw std::out_of_range("token " + std::to_string(token) + " outside vocabulary");
  }
  return probs_[static_cast<std::size_t>(token)];
}

void check_step_output(const ModelStepOutput& out) {
  for (std::size_t h = 0; h < out.branches.size(); ++h) {
    if (out.branches[h].size() != out.main.size()) {
      throw InvalidDistribution("branch " + std::to_string(h + 1) + " has vocabulary size " +
                                std::to_string(out.branches[h].size()) + ", main has " +
                                std::to_string(out.main.size()));
    }
  }
}

}  // namespace mtpasr
