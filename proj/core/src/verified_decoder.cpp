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

#include "mtpasr/verified_decoder.h"

#include <algorithm>
#include <string>

namespace mtpasr {

namespace {

class Session {
 public:
  Session(const StepModel& model, std::span<const TokenId> prompt, const DecodeConfig& config,
          int branches)
      : model_(model), prompt_(prompt), config_(config), branches_(branches) {}

  // Runs the model on the current cache and checks the output's shape.
  ModelStepOutput step(std::size_t step_index) const {
    try {
      ModelStepOutput out = model_.step(cache_);
      if (out.main.size() != model_.vocab_size()) {
        throw InvalidDistribution("main distribution has vocabulary size " +
                                  std::to_string(out.main.size()) + ", model declares " +
                                  std::to_string(model_.vocab_size()));
      }
      if (out.branches.size() < static_cast<std::size_t>(branches_)) {
        throw InvalidDistribution("model produced " + std::to_string(out.branches.size()) +
                                  " branch distributions, decoder needs " +
                                  std::to_string(branches_));
      }
      check_step_output(out);
      return out;
    } catch (const DecodeError&) {
      throw;
    } catch (const std::exception& e) {
      throw DecodeError(step_index, e.what());
    }
  }

  void extend(TokenId token, std::size_t step_index) {
    try {
      model_.extend(cache_, token);
    } catch (const std::exception& e) {
      throw DecodeError(step_index, e.what());
    }
  }

  void prefill() {
    for (TokenId token : prompt_) {
      extend(token, 0);
    }
  }

  DecodeCache& cache() { return cache_; }

  bool is_eos(TokenId token) const { return config_.eos_token && *config_.eos_token == token; }

  void check_cache(const std::vector<TokenId>& committed, const ModelStepOutput& frontier,
                   std::size_t step_index) const {
    std::vector<TokenId> all(prompt_.begin(), prompt_.end());
    all.insert(all.end(), committed.begin(), committed.end());
    if (cache_.tokens().size() != all.size() ||
        !std::equal(all.begin(), all.end(), cache_.tokens().begin())) {
      throw DecodeError(step_index, "cache does not hold the committed tokens");
    }
    const DecodeCache fresh = mtpasr::prefill(model_, all);
    if (!(fresh == cache_) || !(model_.step(fresh) == frontier)) {
      throw DecodeError(step_index, "rolled-back cache diverges from a fresh prefill");
    }
  }

 private:
  const StepModel& model_;
  std::span<const TokenId> prompt_;
  const DecodeConfig& config_;
  int branches_;
  DecodeCache cache_;
};

void check_inputs(const StepModel& model, std::span<const TokenId> prompt,
                  const DecodeConfig& config) {
  config.validate();
  if (prompt.empty()) {
    throw std::invalid_argument("prompt must not be empty");
  }
  if (model.num_branches() < config.mtp.num_branches) {
    throw std::invalid_argument("decoder wants " + std::to_string(config.mtp.num_branches) +
                                " branches, model has " + std::to_string(model.num_branches()));
  }
}

}  // namespace

void DecodeConfig::validate() const {
  mtp.validate();
  if (max_tokens < 1) {
    throw std::invalid_argument("max_tokens must be >= 1");
  }
}

DecodeError::DecodeError(std::size_t step, const std::string& what)
    : std::runtime_error("decode step " + std::to_string(step) + ": " + what), step_(step) {}

TokenId greedy_pick(const Distribution& dist) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < dist.size(); ++i) {
    if (dist[i] > dist[best]) {
      best = i;
    }
  }
  return static_cast<TokenId>(best);
}

DecodeResult autoregressive_decode(const StepModel& model, std::span<const TokenId> prompt,
                                   const DecodeConfig& config) {
  check_inputs(model, prompt, config);
  Session session(model, prompt, config, 0);
  session.prefill();
  DecodeResult result{{}, AcceptanceStats(0)};
  result.stats.forward_passes = 1;

  for (std::size_t step = 1;; ++step) {
    const TokenId token = greedy_pick(session.step(step).main);
    result.tokens.push_back(token);
    result.stats.record_step(0, 0);
    if (session.is_eos(token) || result.tokens.size() >= static_cast<std::size_t>(config.max_tokens)) {
      break;
    }
    session.extend(token, step);
    ++result.stats.forward_passes;
  }
  result.stats.emitted_tokens = result.tokens.size();
  return result;
}

DecodeResult verified_decode(const StepModel& model, std::span<const TokenId> prompt,
                             const DecodeConfig& config, const DecodeOptions& options) {
  check_inputs(model, prompt, config);
  const int branches = config.mtp.num_branches;
  const auto budget = static_cast<std::size_t>(config.max_tokens);

  Session session(model, prompt, config, branches);
  session.prefill();
  DecodeResult result{{}, AcceptanceStats(branches)};
  AcceptanceStats& stats = result.stats;
  std::vector<TokenId>& tokens = result.tokens;

  stats.forward_passes = 1;
  ModelStepOutput frontier = session.step(0);

  std::vector<TokenId> proposal(static_cast<std::size_t>(branches) + 1);
  for (std::size_t step = 1;; ++step) {
    proposal[0] = greedy_pick(frontier.main);
    for (int h = 1; h <= branches; ++h) {
      proposal[static_cast<std::size_t>(h)] =
          greedy_pick(frontier.branches[static_cast<std::size_t>(h - 1)]);
    }

    // The main head's pick is the greedy token by definition.
    tokens.push_back(proposal[0]);
    if (session.is_eos(proposal[0]) || tokens.size() >= budget) {
      break;
    }

    const std::size_t base = session.cache().committed_len();
    int accepted = 0;
    if (options.mode == VerifyMode::batched) {
      // verify[i] is the output after proposal[0..i]; verify[h-1] checks proposal h
      // and verify[accepted] becomes the next frontier.
      std::vector<ModelStepOutput> verify;
      verify.reserve(proposal.size());
      for (TokenId token : proposal) {
        session.extend(token, step);
        verify.push_back(session.step(step));
      }
      ++stats.forward_passes;
      while (accepted < branches &&
             proposal[static_cast<std::size_t>(accepted + 1)] ==
                 greedy_pick(verify[static_cast<std::size_t>(accepted)].main)) {
        ++accepted;
      }
      frontier = std::move(verify[static_cast<std::size_t>(accepted)]);
    } else {
      session.extend(proposal[0], step);
      ++stats.forward_passes;
      frontier = session.step(step);
      while (accepted < branches &&
             proposal[static_cast<std::size_t>(accepted + 1)] == greedy_pick(frontier.main)) {
        ++accepted;
        if (session.is_eos(proposal[static_cast<std::size_t>(accepted)])) {
          break;
        }
        session.extend(proposal[static_cast<std::size_t>(accepted)], step);
        ++stats.forward_passes;
        frontier = session.step(step);
      }
    }

    // Positions past an accepted end-of-sequence token are unreachable.
    int reached = branches;
    for (int h = 1; h <= accepted; ++h) {
      if (session.is_eos(proposal[static_cast<std::size_t>(h)])) {
        reached = h;
        accepted = h;
        break;
      }
    }
    stats.record_step(reached, accepted);

    bool finished = false;
    int committed = 0;
    for (int h = 1; h <= accepted; ++h) {
      if (tokens.size() >= budget) {
        finished = true;
        break;
      }
      tokens.push_back(proposal[static_cast<std::size_t>(h)]);
      ++committed;
      if (session.is_eos(tokens.back())) {
        finished = true;
        break;
      }
    }
    if (tokens.size() >= budget) {
      finished = true;
    }

    const std::size_t keep = base + 1 + static_cast<std::size_t>(committed);
    if (session.cache().committed_len() > keep) {
      session.cache().truncate(keep);
      ++stats.rollbacks;
    }
    if (finished) {
      break;
    }
    if (options.check_cache) {
      session.check_cache(tokens, frontier, step);
    }
  }
  stats.emitted_tokens = tokens.size();
  return result;
}

}  // namespace mtpasr
