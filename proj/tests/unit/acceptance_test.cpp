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

#include <cmath>

#include "mtpasr/acceptance.h"

namespace mtpasr {
namespace {

const std::vector<double> kMtp3{0.96, 0.88, 0.80};
const std::vector<double> kMtp5{0.95, 0.88, 0.80, 0.71, 0.64};
const std::vector<double> kMtp7{0.96, 0.88, 0.80, 0.72, 0.65, 0.59, 0.53};

TEST(ExpectedLength, PublishedRows) {
  EXPECT_NEAR(expected_accepted_length(kMtp5), 4.98, 1e-12);
  EXPECT_NEAR(expected_accepted_length(kMtp3), 3.64, 1e-12);
  EXPECT_NEAR(expected_accepted_length(kMtp7), 6.13, 1e-12);
  // Displayed to one decimal.
  EXPECT_NEAR(expected_accepted_length(kMtp5), 5.0, 0.05);
  EXPECT_NEAR(expected_accepted_length(kMtp3), 3.6, 0.05);
  EXPECT_NEAR(expected_accepted_length(kMtp7), 6.1, 0.05);
}

TEST(ExpectedLength, Floors) {
  const std::vector<double> zeros(5, 0.0);
  EXPECT_EQ(expected_accepted_length(zeros), 1.0);
  EXPECT_THROW(expected_accepted_length(std::span<const double>{}), std::invalid_argument);
}

TEST(ExpectedLength, RejectsInvalidRates) {
  const std::vector<double> increasing{0.5, 0.6};
  const std::vector<double> negative{-0.1};
  const std::vector<double> above_one{1.2};
  EXPECT_THROW(expected_accepted_length(increasing), std::invalid_argument);
  EXPECT_THROW(expected_accepted_length(negative), std::invalid_argument);
  EXPECT_THROW(expected_accepted_length(above_one), std::invalid_argument);
  EXPECT_THROW(simulate_acceptance(increasing, 10, 1), std::invalid_argument);
  EXPECT_THROW(simulate_acceptance(kMtp5, 0, 1), std::invalid_argument);
}

TEST(Simulate, AllOnesAcceptsEverything) {
  const std::vector<double> ones(5, 1.0);
  const auto stats = simulate_acceptance(ones, 1000, 3);
  EXPECT_EQ(stats.accepts, std::vector<std::uint64_t>(5, 1000));
  EXPECT_EQ(stats.average_accepted_length(), 6.0);
}

TEST(Simulate, AllZerosAcceptsNothing) {
  const std::vector<double> zeros(3, 0.0);
  const auto stats = simulate_acceptance(zeros, 1000, 3);
  EXPECT_EQ(stats.accepts, std::vector<std::uint64_t>(3, 0));
  EXPECT_EQ(stats.average_accepted_length(), 1.0);
}

TEST(Simulate, ConvergesWithinBinomialError) {
  constexpr std::uint64_t kSteps = 200000;
  const auto stats = simulate_acceptance(kMtp5, kSteps, 42);
  const auto rates = stats.strict_rates();
  for (std::size_t h = 0; h < kMtp5.size(); ++h) {
    const double se = std::sqrt(kMtp5[h] * (1 - kMtp5[h]) / static_cast<double>(kSteps));
    EXPECT_LE(std::abs(rates[h] - kMtp5[h]), 3 * se) << "position " << h + 1;
  }
  EXPECT_NEAR(stats.average_accepted_length(), 4.98, 0.01);
  EXPECT_DOUBLE_EQ(stats.average_accepted_length(), stats.rate_identity_length());
}

TEST(Simulate, DeterministicInSeed) {
  EXPECT_EQ(simulate_acceptance(kMtp5, 1000, 9), simulate_acceptance(kMtp5, 1000, 9));
  EXPECT_NE(simulate_acceptance(kMtp5, 1000, 9), simulate_acceptance(kMtp5, 1000, 10));
}

TEST(Summary, FullyAccepted) {
  AcceptanceStats stats(5);
  for (int i = 0; i < 10; ++i) stats.record_step(5, 5);
  stats.emitted_tokens = 60;
  stats.forward_passes = 11;
  const auto report = acceptance_summary(stats);
  EXPECT_EQ(report.rates, std::vector<double>(5, 1.0));
  EXPECT_EQ(report.length_display(1), "6.0 / 6");
  EXPECT_DOUBLE_EQ(report.tokens_per_forward_pass, 60.0 / 11.0);
}

TEST(Summary, NothingAccepted) {
  AcceptanceStats stats(5);
  for (int i = 0; i < 10; ++i) stats.record_step(5, 0);
  const auto report = acceptance_summary(stats);
  EXPECT_EQ(report.rates, std::vector<double>(5, 0.0));
  EXPECT_EQ(report.length_display(1), "1.0 / 6");
}

TEST(Summary, MixedCounters) {
  // Accepted prefixes 3, 1, 0, 2 over four steps at H=3.
  AcceptanceStats stats(3);
  stats.record_step(3, 3);
  stats.record_step(3, 1);
  stats.record_step(3, 0);
  stats.record_step(3, 2);
  stats.emitted_tokens = 10;
  stats.forward_passes = 5;
  stats.rollbacks = 3;
  const auto report = acceptance_summary(stats);
  EXPECT_DOUBLE_EQ(report.rates[0], 0.75);
  EXPECT_DOUBLE_EQ(report.rates[1], 0.5);
  EXPECT_DOUBLE_EQ(report.rates[2], 0.25);
  EXPECT_DOUBLE_EQ(report.avg_accepted_length, 2.5);
  EXPECT_EQ(report.length_display(), "2.50 / 4");
  EXPECT_DOUBLE_EQ(report.tokens_per_forward_pass, 2.0);
  EXPECT_EQ(report.rollbacks, 3u);
}

TEST(Summary, EmptyStatsRejected) {
  EXPECT_THROW(acceptance_summary(AcceptanceStats(5)), std::invalid_argument);
}

TEST(Stats, ExcludedAttemptsBreakOnlyTheRateIdentity) {
  AcceptanceStats stats(3);
  stats.record_step(3, 1);
  stats.record_step(1, 1);  // eos accepted at position 1
  EXPECT_DOUBLE_EQ(stats.average_accepted_length(), 2.0);
  EXPECT_DOUBLE_EQ(stats.rate_identity_length(), 2.0);
  EXPECT_EQ(stats.attempts, (std::vector<std::uint64_t>{2, 1, 1}));
  stats.record_step(3, 2);
  EXPECT_DOUBLE_EQ(stats.average_accepted_length(), 7.0 / 3.0);
  EXPECT_DOUBLE_EQ(stats.rate_identity_length(), 1.0 + 1.0 + 0.5 + 0.0);
}

TEST(Stats, RecordStepValidatesArguments) {
  AcceptanceStats stats(3);
  EXPECT_THROW(stats.record_step(2, 3), std::invalid_argument);
  EXPECT_THROW(stats.record_step(4, 1), std::invalid_argument);
}

TEST(Stats, MergeAddsCounters) {
  AcceptanceStats a = simulate_acceptance(kMtp3, 100, 1);
  const AcceptanceStats b = simulate_acceptance(kMtp3, 50, 2);
  const auto accepts0 = a.accepts[0] + b.accepts[0];
  a.merge(b);
  EXPECT_EQ(a.steps, 150u);
  EXPECT_EQ(a.accepts[0], accepts0);
  EXPECT_THROW(a.merge(AcceptanceStats(5)), std::invalid_argument);
}

TEST(Stats, ValidateCatchesBrokenPrefix) {
  AcceptanceStats stats(2);
  stats.steps = 1;
  stats.attempts = {1, 1};
  stats.accepts = {0, 1};
  EXPECT_THROW(stats.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace mtpasr
