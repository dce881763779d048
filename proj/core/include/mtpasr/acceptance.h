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
#include <string>
#include <vector>

namespace mtpasr {

/// Counters of one or more verified decode sessions.
///
/// A step is one outer iteration that ran a verification pass. Position h
/// (1-based) is attempted in a step unless an end-of-sequence token committed
/// earlier in that step made it unreachable; it is strictly accepted when the
/// proposals at positions 1..h all matched the verification path.
struct AcceptanceStats {
  int num_branches = 0;
  std::vector<std::uint64_t> attempts;  // index h-1
  std::vector<std::uint64_t> accepts;   // index h-1
  std::uint64_t steps = 0;
  std::uint64_t emitted_tokens = 0;
  std::uint64_t forward_passes = 0;
  std::uint64_t rollbacks = 0;

  AcceptanceStats() = default;
  explicit AcceptanceStats(int branches);

  /// Records a verified step in which positions 1..reached were attempted and
  /// 1..accepted strictly accepted (accepted <= reached <= num_branches).
  void record_step(int reached, int accepted);

  /// Strict per-position rate accepts/attempts; 0 for an unattempted position.
  std::vector<double> strict_rates() const;
  /// Verified tokens per step, (steps + sum of accepts) / steps. Equals
  /// 1 + sum(strict_rates()) whenever every position was attempted every step.
  double average_accepted_length() const;
  /// 1 + sum(strict_rates()).
  double rate_identity_length() const;

  /// Adds another session's counters. Throws on a branch-count mismatch.
  void merge(const AcceptanceStats& other);
  /// Throws std::invalid_argument if the counters break the prefix property
  /// or their size does not match num_branches.
  void validate() const;

  friend bool operator==(const AcceptanceStats&, const AcceptanceStats&) = default;
};

struct AcceptanceReport {
  int num_branches = 0;
  std::vector<double> rates;
  double avg_accepted_length = 0.0;
  std::uint64_t steps = 0;
  std::uint64_t tokens = 0;
  std::uint64_t forward_passes = 0;
  std::uint64_t rollbacks = 0;
  double tokens_per_forward_pass = 0.0;

  /// e.g. "4.98 / 6"
  std::string length_display(int precision = 2) const;
};

/// Throws std::invalid_argument when no step has been recorded.
AcceptanceReport acceptance_summary(const AcceptanceStats& stats);

/// 1 + sum of the strict rates. Rates must lie in [0, 1] and be
/// non-increasing; anything else is rejected with std::invalid_argument.
double expected_accepted_length(std::span<const double> rates);

/// Monte Carlo model of strict acceptance. Each step accepts position h with
/// the conditional probability rates[h] / rates[h-1] given that 1..h-1 were
/// accepted, so the unconditional per-position rates equal the inputs.
AcceptanceStats simulate_acceptance(std::span<const double> rates, std::uint64_t steps,
                                    std::uint64_t seed);

}  // namespace mtpasr
