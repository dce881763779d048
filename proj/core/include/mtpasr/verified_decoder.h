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
#include <stdexcept>
#include <vector>

#include "mtpasr/acceptance.h"
#include "mtpasr/greedy.h"
#include "mtpasr/mtp_loss.h"
#include "mtpasr/step_model.h"

namespace mtpasr {

struct DecodeConfig {
  MtpConfig mtp;
  int max_tokens = 256;
  std::optional<TokenId> eos_token;

  void validate() const;
};

enum class VerifyMode {
  /// One forward pass per outer step over the main token and every proposal;
  /// rejected positions are rolled back by truncating the cache.
  batched,
  /// One forward pass per proposal, stopping at the first mismatch. Used to
  /// cross-check the batched path.
  sequential,
};

struct DecodeOptions {
  VerifyMode mode = VerifyMode::batched;
  /// After every step, rebuild the cache from scratch over the committed
  /// tokens and require a bit-identical next-step output.
  bool check_cache = false;
};

struct DecodeResult {
  std::vector<TokenId> tokens;
  AcceptanceStats stats;
};

/// Raised when the model misbehaves mid-decode; step() names the outer step
/// (1-based, 0 for the prompt prefill).
class DecodeError : public std::runtime_error {
 public:
  DecodeError(std::size_t step, const std::string& what);
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

/// Reference greedy decoder: one token per forward pass. The returned stats
/// carry no branch positions; steps == emitted tokens.
DecodeResult autoregressive_decode(const StepModel& model, std::span<const TokenId> prompt,
                                   const DecodeConfig& config);

/// Greedy decoding accelerated by the model's lookahead branches. Each outer
/// step commits the main head's greedy token and then the longest prefix of
/// branch proposals that matches the greedy path; the token sequence is
/// identical to autoregressive_decode on the same inputs.
DecodeResult verified_decode(const StepModel& model, std::span<const TokenId> prompt,
                             const DecodeConfig& config, const DecodeOptions& options = {});

}  // namespace mtpasr
