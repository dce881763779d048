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

#include <gtest/gtest.h>

#include <random>

#include "mtpasr/rover.h"
#include "oracles.h"

namespace mtpasr {
namespace {

using Tokens = TokenSequence;

WtnSlot slot(Arc a, Arc b, Arc c) { return WtnSlot{{std::move(a), std::move(b), std::move(c)}}; }

TEST(BuildWtn, IdenticalHypotheses) {
  const auto wtn = build_wtn({Tokens{"a", "b", "c"}, Tokens{"a", "b", "c"}, Tokens{"a", "b", "c"}});
  ASSERT_EQ(wtn.slots.size(), 3u);
  EXPECT_EQ(wtn.slots[1], slot("b", "b", "b"));
  const auto r = vote_wtn(wtn);
  EXPECT_EQ(r.fused_tokens, (Tokens{"a", "b", "c"}));
  EXPECT_EQ(r.e_hat, 0.0);
  EXPECT_TRUE(r.kept);
}

TEST(BuildWtn, DeletionAndSubstitution) {
  const auto wtn = build_wtn({Tokens{"a", "b", "c"}, Tokens{"a", "c"}, Tokens{"a", "b", "d"}});
  ASSERT_EQ(wtn.slots.size(), 3u);
  EXPECT_EQ(wtn.slots[0], slot("a", "a", "a"));
  EXPECT_EQ(wtn.slots[1], slot("b", std::nullopt, "b"));
  EXPECT_EQ(wtn.slots[2], slot("c", "c", "d"));
  const auto r = vote_wtn(wtn);
  EXPECT_EQ(r.fused_tokens, (Tokens{"a", "b", "c"}));
  EXPECT_EQ(r.disagreed_positions, 0u);
  EXPECT_EQ(r.text_units, 3u);
}

TEST(BuildWtn, InsertionOpensSlot) {
  const auto wtn = build_wtn({Tokens{"a", "b"}, Tokens{"a", "q", "b"}, Tokens{"a", "b"}});
  ASSERT_EQ(wtn.slots.size(), 3u);
  EXPECT_EQ(wtn.slots[1], slot(std::nullopt, "q", std::nullopt));
  EXPECT_EQ(vote_wtn(wtn).fused_tokens, (Tokens{"a", "b"}));
}

TEST(BuildWtn, ThirdHypothesisMatchesSecondSystemArc) {
  const auto wtn = build_wtn({Tokens{"a", "x"}, Tokens{"a", "y"}, Tokens{"a", "y"}});
  ASSERT_EQ(wtn.slots.size(), 2u);
  EXPECT_EQ(wtn.slots[1], slot("x", "y", "y"));
  EXPECT_EQ(vote_wtn(wtn).fused_tokens, (Tokens{"a", "y"}));
}

TEST(BuildWtn, ThreeWaySplitIsDisagreement) {
  const auto r = vote_wtn(build_wtn({Tokens{"a", "x"}, Tokens{"a", "y"}, Tokens{"a", "z"}}));
  EXPECT_EQ(r.disagreed_positions, 1u);
  EXPECT_DOUBLE_EQ(r.e_hat, 0.5);
  EXPECT_FALSE(r.kept);
  EXPECT_EQ(r.verdict, FusionVerdict::high_disagreement);
  EXPECT_EQ(r.fused_tokens, (Tokens{"a"}));
}

TEST(BuildWtn, SlotsReproduceEveryHypothesis) {
  std::mt19937_64 rng(5);
  const char* alphabet[] = {"a", "b", "c", "d"};
  for (int trial = 0; trial < 500; ++trial) {
    std::array<Tokens, kNumSystems> hyps;
    for (auto& h : hyps) {
      const std::size_t len = rng() % 7;
      for (std::size_t i = 0; i < len; ++i) h.push_back(alphabet[rng() % 4]);
    }
    const auto wtn = build_wtn(hyps);
    for (std::size_t s = 0; s < kNumSystems; ++s) EXPECT_EQ(wtn.system_tokens(s), hyps[s]);
    EXPECT_GE(wtn.slots.size(), hyps[0].size());
  }
}

TEST(Vote, ExhaustiveAgainstCountingOracle) {
  const std::array<Arc, 4> values{Arc("a"), Arc("b"), Arc("c"), std::nullopt};
  int cases = 0;
  for (const auto& x : values)
    for (const auto& y : values)
      for (const auto& z : values) {
        const WtnSlot s = slot(x, y, z);
        const auto expected = testing::reference_vote({x, y, z});
        const auto got = vote_slot(s);
        EXPECT_EQ(got.outcome == SlotOutcome::disagreement, expected.disagreement);
        EXPECT_EQ(got.outcome == SlotOutcome::token, expected.emits);
        if (expected.emits) EXPECT_EQ(got.token, expected.token);

        const auto r = vote_wtn(WordTransitionNetwork{{s}});
        EXPECT_EQ(r.disagreed_positions, expected.disagreement ? 1u : 0u);
        EXPECT_EQ(r.fused_tokens, expected.emits ? Tokens{expected.token} : Tokens{});
        ++cases;
      }
  EXPECT_EQ(cases, 64);
}

WordTransitionNetwork agreeing_wtn(std::size_t slots, std::size_t disagreements) {
  WordTransitionNetwork wtn;
  for (std::size_t i = 0; i < slots; ++i) {
    wtn.slots.push_back(i < disagreements ? slot("x", "y", "z") : slot("w", "w", "w"));
  }
  return wtn;
}

TEST(Vote, ThresholdBoundary) {
  const auto at = vote_wtn(agreeing_wtn(20, 1));
  EXPECT_DOUBLE_EQ(at.e_hat, 0.05);
  EXPECT_TRUE(at.kept);
  EXPECT_EQ(at.verdict, FusionVerdict::kept);

  const auto above = vote_wtn(agreeing_wtn(10, 1));
  EXPECT_DOUBLE_EQ(above.e_hat, 0.1);
  EXPECT_FALSE(above.kept);
  EXPECT_EQ(above.verdict, FusionVerdict::high_disagreement);

  EXPECT_TRUE(vote_wtn(agreeing_wtn(10, 1), 0.1).kept);
  EXPECT_FALSE(vote_wtn(agreeing_wtn(20, 1), 0.04).kept);
}

TEST(Vote, EmptyNetworkHasNoUnits) {
  const auto r = vote_wtn(WordTransitionNetwork{});
  EXPECT_EQ(r.text_units, 0u);
  EXPECT_EQ(r.e_hat, 0.0);
}

TEST(Verdict, NamesRoundTrip) {
  for (auto v : {FusionVerdict::kept, FusionVerdict::high_disagreement,
                 FusionVerdict::empty_hypothesis}) {
    EXPECT_EQ(parse_fusion_verdict(to_string(v)), v);
  }
  EXPECT_THROW(parse_fusion_verdict("maybe"), std::invalid_argument);
}

}  // namespace
}  // namespace mtpasr
