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

#include "mtpasr/rover.h"

#include <algorithm>
#include <stdexcept>

namespace mtpasr {

namespace {

enum class Move : unsigned char { diagonal, deletion, insertion };

bool slot_matches(const WtnSlot& slot, const std::string& token, std::size_t systems_so_far) {
  for (std::size_t s = 0; s < systems_so_far; ++s) {
    if (slot.arcs[s] && *slot.arcs[s] == token) {
      return true;
    }
  }
  return false;
}

// Folds `hyp` in as system `system`; systems [0, system) are already present.
void fold(std::vector<WtnSlot>& slots, const TokenSequence& hyp, std::size_t system) {
  const std::size_t n = slots.size();
  const std::size_t m = hyp.size();
  const std::size_t width = m + 1;
  std::vector<std::size_t> cost((n + 1) * width);
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return cost[i * width + j]; };

  for (std::size_t j = 0; j <= m; ++j) {
    at(0, j) = j;
  }
  for (std::size_t i = 1; i <= n; ++i) {
    at(i, 0) = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = slot_matches(slots[i - 1], hyp[j - 1], system) ? 0 : 1;
      at(i, j) = std::min({at(i - 1, j - 1) + sub, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }

  std::vector<Move> moves;
  moves.reserve(n + m);
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const std::size_t sub = slot_matches(slots[i - 1], hyp[j - 1], system) ? 0 : 1;
      if (at(i, j) == at(i - 1, j - 1) + sub) {
        moves.push_back(Move::diagonal);
        --i, --j;
        continue;
      }
    }
    if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      moves.push_back(Move::deletion);
      --i;
      continue;
    }
    moves.push_back(Move::insertion);
    --j;
  }

  std::vector<WtnSlot> merged;
  merged.reserve(n + m);
  i = 0;
  j = 0;
  for (auto it = moves.rbegin(); it != moves.rend(); ++it) {
    switch (*it) {
      case Move::diagonal: {
        WtnSlot slot = slots[i++];
        slot.arcs[system] = hyp[j++];
        merged.push_back(std::move(slot));
        break;
      }
      case Move::deletion:
        merged.push_back(slots[i++]);
        break;
      case Move::insertion: {
        WtnSlot slot;
        slot.arcs[system] = hyp[j++];
        merged.push_back(std::move(slot));
        break;
      }
    }
  }
  slots = std::move(merged);
}

}  // namespace

TokenSequence WordTransitionNetwork::system_tokens(std::size_t system) const {
  TokenSequence tokens;
  for (const auto& slot : slots) {
    if (slot.arcs.at(system)) {
      tokens.push_back(*slot.arcs[system]);
    }
  }
  return tokens;
}

WordTransitionNetwork build_wtn(const std::array<TokenSequence, kNumSystems>& hyps) {
  WordTransitionNetwork wtn;
  for (const auto& token : hyps[0]) {
    WtnSlot slot;
    slot.arcs[0] = token;
    wtn.slots.push_back(std::move(slot));
  }
  for (std::size_t s = 1; s < kNumSystems; ++s) {
    fold(wtn.slots, hyps[s], s);
  }
  return wtn;
}

SlotVote vote_slot(const WtnSlot& slot) {
  for (std::size_t a = 0; a < kNumSystems; ++a) {
    std::size_t votes = 0;
    for (std::size_t b = 0; b < kNumSystems; ++b) {
      votes += slot.arcs[a] == slot.arcs[b] ? 1 : 0;
    }
    if (votes >= 2) {
      if (slot.arcs[a]) {
        return {SlotOutcome::token, *slot.arcs[a]};
      }
      return {SlotOutcome::null_consensus, {}};
    }
  }
  return {SlotOutcome::disagreement, {}};
}

FusionResult vote_wtn(const WordTransitionNetwork& wtn, double threshold) {
  FusionResult result;
  result.text_units = wtn.slots.size();
  for (const auto& slot : wtn.slots) {
    SlotVote vote = vote_slot(slot);
    if (vote.outcome == SlotOutcome::token) {
      result.fused_tokens.push_back(std::move(vote.token));
    } else if (vote.outcome == SlotOutcome::disagreement) {
      ++result.disagreed_positions;
    }
  }
  result.e_hat = result.text_units == 0 ? 0.0
                                        : static_cast<double>(result.disagreed_positions) /
                                              static_cast<double>(result.text_units);
  result.kept = !(result.e_hat > threshold);
  result.verdict = result.kept ? FusionVerdict::kept : FusionVerdict::high_disagreement;
  return result;
}

std::string_view to_string(FusionVerdict verdict) {
  switch (verdict) {
    case FusionVerdict::kept:
      return "kept";
    case FusionVerdict::high_disagreement:
      return "high_disagreement";
    case FusionVerdict::empty_hypothesis:
      return "empty_hypothesis";
  }
  return "unknown";
}

FusionVerdict parse_fusion_verdict(std::string_view name) {
  for (auto v : {FusionVerdict::kept, FusionVerdict::high_disagreement,
                 FusionVerdict::empty_hypothesis}) {
    if (name == to_string(v)) {
      return v;
    }
  }
  throw std::invalid_argument("unknown fusion verdict '" + std::string(name) + "'");
}

}  // namespace mtpasr
