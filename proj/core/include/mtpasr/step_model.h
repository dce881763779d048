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
#include <vector>

#include "mtpasr/defaults.h"
#include "mtpasr/distribution.h"

namespace mtpasr {

/// Per-position decoder state standing in for a KV cache. Positions are only
/// appended or dropped from the tail; truncate(n) leaves the cache exactly as
/// if only the first n tokens had ever been appended.
class DecodeCache {
 public:
  std::size_t committed_len() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }

  void append(TokenId token, std::vector<double> state);
  /// Drops every position at index >= n. Throws std::out_of_range if n > committed_len().
  void truncate(std::size_t n);

  std::span<const TokenId> tokens() const { return tokens_; }
  std::span<const double> state(std::size_t position) const;

  friend bool operator==(const DecodeCache&, const DecodeCache&) = default;

 private:
  std::vector<TokenId> tokens_;
  std::vector<std::vector<double>> states_;
};

/// A next-token model with lookahead branches, driven through a DecodeCache.
///
/// `position_state` produces the opaque state stored when `token` is appended
/// at index cache.committed_len(); `step` reads the cache and returns the main
/// distribution for the following position together with the branch
/// proposals for the positions after it. Models must be deterministic: equal
/// caches give bit-identical outputs.
class StepModel {
 public:
  virtual ~StepModel() = default;

  virtual std::size_t vocab_size() const = 0;
  virtual int num_branches() const = 0;

  virtual std::vector<double> position_state(const DecodeCache& cache, TokenId token) const = 0;
  virtual ModelStepOutput step(const DecodeCache& cache) const = 0;

  /// Appends `token` to the cache with the state this model assigns it.
  void extend(DecodeCache& cache, TokenId token) const {
    cache.append(token, position_state(cache, token));
  }
};

/// Builds a fresh cache holding `tokens`.
DecodeCache prefill(const StepModel& model, std::span<const TokenId> tokens);

}  // namespace mtpasr
