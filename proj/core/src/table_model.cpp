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

#include "mtpasr/table_model.h"

#include <stdexcept>
#include <string>

namespace mtpasr {

namespace {

ModelStepOutput uniform_output(std::size_t vocab_size, int num_branches) {
  ModelStepOutput out{Distribution::uniform(vocab_size), {}};
  out.branches.assign(static_cast<std::size_t>(num_branches), Distribution::uniform(vocab_size));
  return out;
}

}  // namespace

TableModel::TableModel(std::size_t vocab_size, int num_branches, std::size_t context_order)
    : vocab_size_(vocab_size),
      num_branches_(num_branches),
      context_order_(context_order),
      fallback_(uniform_output(vocab_size, num_branches < 0 ? 0 : num_branches)) {
  if (num_branches < 1) {
    throw std::invalid_argument("table model needs at least one branch");
  }
  if (context_order == 0) {
    throw std::invalid_argument("table model context order must be >= 1");
  }
}

void TableModel::check_shape(const ModelStepOutput& output) const {
  if (output.main.size() != vocab_size_) {
    throw std::invalid_argument("table entry vocabulary " + std::to_string(output.main.size()) +
                                " != " + std::to_string(vocab_size_));
  }
  if (output.branches.size() != static_cast<std::size_t>(num_branches_)) {
    throw std::invalid_argument("table entry has " + std::to_string(output.branches.size()) +
                                " branches, model has " + std::to_string(num_branches_));
  }
  check_step_output(output);
}

void TableModel::set(std::vector<TokenId> key, ModelStepOutput output) {
  if (key.size() != context_order_) {
    throw std::invalid_argument("table key must hold exactly " + std::to_string(context_order_) +
                                " tokens");
  }
  check_shape(output);
  entries_.insert_or_assign(std::move(key), std::move(output));
}

void TableModel::set_fallback(ModelStepOutput output) {
  check_shape(output);
  fallback_ = std::move(output);
}

const ModelStepOutput& TableModel::lookup(std::span<const TokenId> context) const {
  if (context.size() < context_order_) {
    return fallback_;
  }
  const std::vector<TokenId> key(context.end() - static_cast<std::ptrdiff_t>(context_order_),
                                 context.end());
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback_ : it->second;
}

std::vector<double> TableModel::position_state(const DecodeCache&, TokenId token) const {
  if (token < 0 || static_cast<std::size_t>(token) >= vocab_size_) {
    throw std::out_of_range("token " + std::to_string(token) + " outside table vocabulary");
  }
  return {};
}

ModelStepOutput TableModel::step(const DecodeCache& cache) const {
  return lookup(cache.tokens());
}

}  // namespace mtpasr
