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

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mtpasr/defaults.h"

namespace mtpasr {

inline constexpr std::size_t kNumSystems = 3;

using TokenSequence = std::vector<std::string>;
/// One system's contribution to a slot; disengaged is a NULL arc.
using Arc = std::optional<std::string>;

struct WtnSlot {
  std::array<Arc, kNumSystems> arcs;

  friend bool operator==(const WtnSlot&, const WtnSlot&) = default;
};

/// Slot-ordered lattice with exactly one arc per system per slot. Reading the
/// non-NULL arcs of system s in slot order reproduces hypothesis s.
struct WordTransitionNetwork {
  std::vector<WtnSlot> slots;

  TokenSequence system_tokens(std::size_t system) const;
};

/// Aligns three normalized hypotheses into a WTN. Hypothesis 0 seeds one slot
/// per token; hypotheses 1 and 2 are folded in, in that order, by a
/// minimum-edit-distance alignment against the slots built so far. A token
/// matches a slot at cost 0 when it equals any arc already there;
/// substitution, deletion (NULL arc in an existing slot) and insertion (a new
/// slot, NULL for every other system) cost 1. Traceback prefers the diagonal
/// move, then deletion, then insertion.
WordTransitionNetwork build_wtn(const std::array<TokenSequence, kNumSystems>& hyps);

enum class SlotOutcome { token, null_consensus, disagreement };

struct SlotVote {
  SlotOutcome outcome = SlotOutcome::disagreement;
  std::string token;  // set when outcome == token
};

/// Majority of three: a value (token or NULL) with at least two arcs wins;
/// three distinct values are a disagreement.
SlotVote vote_slot(const WtnSlot& slot);

enum class FusionVerdict { kept, high_disagreement, empty_hypothesis };

struct FusionResult {
  std::string clip_id;
  TokenSequence fused_tokens;
  std::size_t disagreed_positions = 0;
  std::size_t text_units = 0;
  /// disagreed_positions / text_units, 0 when there are no units.
  double e_hat = 0.0;
  bool kept = true;
  FusionVerdict verdict = FusionVerdict::kept;

  friend bool operator==(const FusionResult&, const FusionResult&) = default;
};

/// Votes every slot; text units are WTN slots. The clip is kept iff
/// e_hat <= threshold (rejection is strictly greater-than).
FusionResult vote_wtn(const WordTransitionNetwork& wtn,
                      double threshold = defaults::kDisagreementThreshold);

std::string_view to_string(FusionVerdict verdict);
FusionVerdict parse_fusion_verdict(std::string_view name);

}  // namespace mtpasr
