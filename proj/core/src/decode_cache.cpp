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

#include <stdexcept>
#include <string>

#include "mtpasr/step_model.h"

namespace mtpasr {

void DecodeCache::append(TokenId token, std::vector<double> state) {
  tokens_.push_back(token);
  states_.push_back(std::move(state));
}

void DecodeCache::truncate(std::size_t n) {
  if (n > tokens_.size()) {
    throw std::out_of_range("cannot truncate a cache of length " +
                            std::to_string(tokens_.size()) + " to " + std::to_string(n));
  }
  tokens_.resize(n);
  states_.resize(n);
}

std::span<const double> DecodeCache::state(std::size_t position) const {
  return states_.at(position);
}

DecodeCache prefill(const StepModel& model, std::span<const TokenId> tokens) {
  DecodeCache cache;
  for (TokenId token : tokens) {
    model.extend(cache, token);
  }
  return cache;
}

}  // namespace mtpasr
