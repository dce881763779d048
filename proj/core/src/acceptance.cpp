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

#include "mtpasr/acceptance.h"

#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>

namespace mtpasr {

namespace {

void check_rates(std::span<const double> rates) {
  if (rates.empty()) {
    throw std::invalid_argument("at least one acceptance rate is required");
  }
  double previous = 1.0;
  for (std::size_t h = 0; h < rates.size(); ++h) {
    const double r = rates[h];
    if (!(r >= 0.0 && r <= 1.0)) {
      throw std::invalid_argument("rate at position " + std::to_string(h + 1) +
                                  " outside [0, 1]");
    }
    if (r > previous) {
      throw std::invalid_argument("rate at position " + std::to_string(h + 1) +
                                  " exceeds the previous position's rate; strict acceptance "
                                  "rates must be non-increasing");
    }
    previous = r;
  }
}

}  // namespace

AcceptanceStats::AcceptanceStats(int branches)
    : num_branches(branches),
      attempts(static_cast<std::size_t>(branches), 0),
      accepts(static_cast<std::size_t>(branches), 0) {
  if (branches < 0) {
    throw std::invalid_argument("negative branch count");
  }
}

void AcceptanceStats::record_step(int reached, int accepted) {
  if (reached < 0 || reached > num_branches || accepted < 0 || accepted > reached) {
    throw std::invalid_argument("inconsistent step record");
  }
  ++steps;
  for (int h = 0; h < reached; ++h) {
    ++attempts[static_cast<std::size_t>(h)];
  }
  for (int h = 0; h < accepted; ++h) {
    ++accepts[static_cast<std::size_t>(h)];
  }
}

std::vector<double> AcceptanceStats::strict_rates() const {
  std::vector<double> rates(attempts.size(), 0.0);
  for (std::size_t h = 0; h < attempts.size(); ++h) {
    if (attempts[h] > 0) {
      rates[h] = static_cast<double>(accepts[h]) / static_cast<double>(attempts[h]);
    }
  }
  return rates;
}

double AcceptanceStats::average_accepted_length() const {
  if (steps == 0) {
    return 0.0;
  }
  std::uint64_t verified = steps;
  for (auto a : accepts) {
    verified += a;
  }
  return static_cast<double>(verified) / static_cast<double>(steps);
}

double AcceptanceStats::rate_identity_length() const {
  double length = 1.0;
  for (double r : strict_rates()) {
    length += r;
  }
  return length;
}

void AcceptanceStats::merge(const AcceptanceStats& other) {
  if (other.num_branches != num_branches) {
    throw std::invalid_argument("cannot merge stats with different branch counts");
  }
  for (std::size_t h = 0; h < attempts.size(); ++h) {
    attempts[h] += other.attempts[h];
    accepts[h] += other.accepts[h];
  }
  steps += other.steps;
  emitted_tokens += other.emitted_tokens;
  forward_passes += other.forward_passes;
  rollbacks += other.rollbacks;
}

void AcceptanceStats::validate() const {
  const auto n = static_cast<std::size_t>(num_branches);
  if (num_branches < 0 || attempts.size() != n || accepts.size() != n) {
    throw std::invalid_argument("counter arrays do not match the branch count");
  }
  for (std::size_t h = 0; h < n; ++h) {
    if (accepts[h] > attempts[h] || attempts[h] > steps) {
      throw std::invalid_argument("position " + std::to_string(h + 1) +
                                  " has more accepts than attempts or steps");
    }
    if (h > 0 && (accepts[h] > accepts[h - 1] || attempts[h] > attempts[h - 1])) {
      throw std::invalid_argument("position " + std::to_string(h + 1) +
                                  " breaks the strict-prefix property");
    }
  }
}

std::string AcceptanceReport::length_display(int precision) const {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << avg_accepted_length << " / "
     << num_branches + 1;
  return os.str();
}

AcceptanceReport acceptance_summary(const AcceptanceStats& stats) {
  if (stats.steps == 0) {
    throw std::invalid_argument("no decode steps recorded");
  }
  AcceptanceReport report;
  report.num_branches = stats.num_branches;
  report.rates = stats.strict_rates();
  report.avg_accepted_length = stats.average_accepted_length();
  report.steps = stats.steps;
  report.tokens = stats.emitted_tokens;
  report.forward_passes = stats.forward_passes;
  report.rollbacks = stats.rollbacks;
  report.tokens_per_forward_pass =
      stats.forward_passes == 0
          ? 0.0
          : static_cast<double>(stats.emitted_tokens) / static_cast<double>(stats.forward_passes);
  return report;
}

double expected_accepted_length(std::span<const double> rates) {
  check_rates(rates);
  double length = 1.0;
  for (double r : rates) {
    length += r;
  }
  return length;
}

AcceptanceStats simulate_acceptance(std::span<const double> rates, std::uint64_t steps,
                                    std::uint64_t seed) {
  check_rates(rates);
  if (steps == 0) {
    throw std::invalid_argument("simulation needs at least one step");
  }
  const int branches = static_cast<int>(rates.size());
  std::vector<double> conditional(rates.size());
  double previous = 1.0;
  for (std::size_t h = 0; h < rates.size(); ++h) {
    conditional[h] = previous > 0.0 ? rates[h] / previous : 0.0;
    if (conditional[h] > 1.0) {
      throw std::invalid_argument("rates imply a conditional acceptance probability above 1");
    }
    previous = rates[h];
  }

  std::mt19937_64 rng(seed);
  AcceptanceStats stats(branches);
  for (std::uint64_t s = 0; s < steps; ++s) {
    int accepted = 0;
    while (accepted < branches) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      if (!(u < conditional[static_cast<std::size_t>(accepted)])) {
        break;
      }
      ++accepted;
    }
    stats.record_step(branches, accepted);
    stats.emitted_tokens += static_cast<std::uint64_t>(1 + accepted);
    stats.forward_passes += 1;
    stats.rollbacks += accepted < branches ? 1 : 0;
  }
  return stats;
}

}  // namespace mtpasr
