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

#include "mtpasr/linear_model.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "mtpasr/greedy.h"

namespace mtpasr {

namespace {

using Vec = std::vector<double>;

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void fill_uniform(Matrix& m, std::mt19937_64& rng, double range) {
  for (double& x : m.data) {
    x = -range + 2.0 * range * uniform01(rng);
  }
}

Vec matvec(const Matrix& m, std::span<const double> x) {
  Vec y(m.rows, 0.0);
  for (std::size_t r = 0; r < m.rows; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < m.cols; ++c) {
      acc += m(r, c) * x[c];
    }
    y[r] = acc;
  }
  return y;
}

// y += m^T * g
void add_matvec_transposed(const Matrix& m, std::span<const double> g, std::span<double> y) {
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      y[c] += m(r, c) * g[r];
    }
  }
}

// m += a * b^T
void add_outer(Matrix& m, std::span<const double> a, std::span<const double> b) {
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      m(r, c) += a[r] * b[c];
    }
  }
}

double stabilized_norm(std::span<const double> v) {
  double sq = LinearMtpModel::kNormEpsilon;
  for (double x : v) {
    sq += x * x;
  }
  return std::sqrt(sq);
}

void normalize_into(std::span<const double> v, std::span<double> out) {
  const double n = stabilized_norm(v);
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = v[i] / n;
  }
}

// out += J^T g for J the Jacobian of normalize at v (J is symmetric).
void normalize_backward(std::span<const double> v, std::span<const double> g,
                        std::span<double> out) {
  const double n = stabilized_norm(v);
  double dot = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    dot += v[i] * g[i];
  }
  const double n2 = n * n;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] += (g[i] - v[i] * dot / n2) / n;
  }
}

std::span<const TokenId> clip_context(std::span<const TokenId> context, std::size_t window) {
  if (window == 0 || context.size() <= window) {
    return context;
  }
  return context.subspan(context.size() - window);
}

void check_token(const LinearMtpShape& shape, TokenId token) {
  if (token < 0 || static_cast<std::size_t>(token) >= shape.vocab_size) {
    throw std::out_of_range("token " + std::to_string(token) + " outside vocabulary of size " +
                            std::to_string(shape.vocab_size));
  }
}

// Intermediate values of one position, kept for the backward pass.
struct Trace {
  std::vector<TokenId> context;
  Vec mean;
  std::vector<Vec> hidden;  // h_0 .. h_B
  std::vector<Vec> input;   // x_1 .. x_B, each 2d
  std::vector<Distribution> dists;
};

class Forward {
 public:
  explicit Forward(const LinearMtpModel& model) : m_(model), d_(model.hidden_dim()) {}

  Trace run(std::span<const TokenId> context, std::span<const TokenId> shifts) const {
    Trace trace;
    const auto ctx = clip_context(context, m_.shape().context_window);
    trace.context.assign(ctx.begin(), ctx.end());
    trace.mean.assign(d_, 0.0);
    for (TokenId token : ctx) {
      check_token(m_.shape(), token);
      const auto row = m_.embedding().row(static_cast<std::size_t>(token));
      for (std::size_t i = 0; i < d_; ++i) {
        trace.mean[i] += row[i];
      }
    }
    if (!ctx.empty()) {
      for (double& x : trace.mean) {
        x /= static_cast<double>(ctx.size());
      }
    }
    start(trace);
    const std::size_t branches =
        std::min(shifts.size(), static_cast<std::size_t>(m_.num_branches()));
    for (std::size_t k = 1; k <= branches; ++k) {
      add_branch(trace, k, shifts[k - 1]);
    }
    return trace;
  }

  void start(Trace& trace) const {
    trace.hidden.push_back(matvec(m_.backbone(), trace.mean));
    trace.dists.push_back(Distribution::from_logits(matvec(m_.output_head(), trace.hidden[0])));
  }

  void add_branch(Trace& trace, std::size_t k, TokenId shift) const {
    check_token(m_.shape(), shift);
    Vec x(2 * d_);
    normalize_into(trace.hidden[k - 1], std::span<double>(x).first(d_));
    normalize_into(m_.embedding().row(static_cast<std::size_t>(shift)),
                   std::span<double>(x).subspan(d_));
    trace.hidden.push_back(matvec(m_.branch_projection(static_cast<int>(k)), x));
    trace.input.push_back(std::move(x));
    trace.dists.push_back(Distribution::from_logits(matvec(m_.output_head(), trace.hidden[k])));
  }

 private:
  const LinearMtpModel& m_;
  std::size_t d_;
};

ModelStepOutput to_output(Trace&& trace) {
  ModelStepOutput out{std::move(trace.dists.front()), {}};
  for (std::size_t k = 1; k < trace.dists.size(); ++k) {
    out.branches.push_back(std::move(trace.dists[k]));
  }
  return out;
}

LinearMtpGradients zero_gradients(const LinearMtpModel& model) {
  const auto& s = model.shape();
  LinearMtpGradients g;
  g.embedding = Matrix(s.vocab_size, s.hidden_dim);
  g.backbone = Matrix(s.hidden_dim, s.hidden_dim);
  g.branch_projection.assign(static_cast<std::size_t>(s.num_branches),
                             Matrix(s.hidden_dim, 2 * s.hidden_dim));
  g.output_head = Matrix(s.vocab_size, s.hidden_dim);
  return g;
}

std::size_t active_branches(std::size_t sequence_len, std::size_t t, int num_branches,
                            bool include_branches) {
  if (!include_branches) {
    return 0;
  }
  // Branch k at position t needs the target x_{t+1+k}.
  const std::size_t available = sequence_len - 2 - t;
  return std::min(available, static_cast<std::size_t>(num_branches));
}

// Accumulates loss (and gradients when `grads` is non-null) of the batch.
LossAndGradients accumulate(const LinearMtpModel& model,
                            std::span<const std::vector<TokenId>> batch, const MtpConfig& config,
                            const BackwardOptions& options, bool with_grads) {
  config.validate();
  if (config.num_branches > model.num_branches()) {
    throw std::invalid_argument("objective uses " + std::to_string(config.num_branches) +
                                " branches, model has " + std::to_string(model.num_branches()));
  }
  std::size_t trainable = 0;
  for (const auto& seq : batch) {
    trainable += seq.size() >= 2 ? 1 : 0;
  }
  if (trainable == 0) {
    throw std::invalid_argument("batch has no trainable positions");
  }

  const LossWeights weights = branch_weights(config);
  const std::size_t d = model.hidden_dim();
  const std::size_t vocab = model.vocab_size();
  const Forward forward(model);

  LossAndGradients result;
  if (with_grads) {
    result.grads = zero_gradients(model);
  }
  auto& grads = result.grads;

  for (const auto& seq : batch) {
    if (seq.size() < 2) {
      continue;
    }
    const std::size_t positions = seq.size() - 1;
    const double scale =
        1.0 / (static_cast<double>(trainable) * static_cast<double>(positions));
    const std::span<const TokenId> tokens(seq);

    for (std::size_t t = 0; t < positions; ++t) {
      const std::size_t branches =
          active_branches(seq.size(), t, config.num_branches, options.include_branches);
      const Trace trace = forward.run(tokens.first(t + 1), tokens.subspan(t + 1, branches));

      // Output-layer error signal per head: coef * (p - onehot(target)).
      std::vector<Vec> dlogits(branches + 1);
      for (std::size_t k = 0; k <= branches; ++k) {
        const TokenId target = seq[t + 1 + k];
        const double coef = (k == 0 ? 1.0 : weights[k - 1]) * scale;
        const double p = trace.dists[k].prob(target);
        const double ce = -std::log(std::max(p, options.probability_floor));
        result.loss += coef * ce;
        if (k > 0) {
          result.branch_loss += coef * ce;
        }
        if (!with_grads) {
          continue;
        }
        dlogits[k].assign(vocab, 0.0);
        if (p < options.probability_floor) {
          continue;
        }
        for (std::size_t v = 0; v < vocab; ++v) {
          dlogits[k][v] = coef * trace.dists[k][v];
        }
        dlogits[k][static_cast<std::size_t>(target)] -= coef;
      }
      if (!with_grads) {
        continue;
      }

      // Walk the branch chain backwards; `carry` is dL/dh_{k} from branch k+1.
      Vec carry(d, 0.0);
      for (std::size_t k = branches; k >= 1; --k) {
        Vec dh = carry;
        add_outer(grads.output_head, dlogits[k], trace.hidden[k]);
        add_matvec_transposed(model.output_head(), dlogits[k], dh);

        const Matrix& proj = model.branch_projection(static_cast<int>(k));
        add_outer(grads.branch_projection[k - 1], dh, trace.input[k - 1]);
        Vec dx(2 * d, 0.0);
        add_matvec_transposed(proj, dh, dx);

        std::fill(carry.begin(), carry.end(), 0.0);
        normalize_backward(trace.hidden[k - 1], std::span<const double>(dx).first(d), carry);

        const auto shift = static_cast<std::size_t>(seq[t + k]);
        Vec demb(d, 0.0);
        normalize_backward(model.embedding().row(shift), std::span<const double>(dx).subspan(d),
                           demb);
        for (std::size_t i = 0; i < d; ++i) {
          grads.embedding(shift, i) += demb[i];
        }
      }

      Vec dh0 = carry;
      add_outer(grads.output_head, dlogits[0], trace.hidden[0]);
      add_matvec_transposed(model.output_head(), dlogits[0], dh0);
      add_outer(grads.backbone, dh0, trace.mean);
      Vec dmean(d, 0.0);
      add_matvec_transposed(model.backbone(), dh0, dmean);
      const double share = 1.0 / static_cast<double>(trace.context.size());
      for (TokenId token : trace.context) {
        for (std::size_t i = 0; i < d; ++i) {
          grads.embedding(static_cast<std::size_t>(token), i) += share * dmean[i];
        }
      }
    }
  }
  return result;
}

}  // namespace

void LinearMtpShape::validate() const {
  if (vocab_size == 0 || hidden_dim == 0) {
    throw std::invalid_argument("vocab_size and hidden_dim must be positive");
  }
  if (num_branches < 1) {
    throw std::invalid_argument("linear model needs at least one branch");
  }
}

LinearMtpModel::LinearMtpModel(const LinearMtpShape& shape)
    : shape_(shape),
      embedding_(shape.vocab_size, shape.hidden_dim),
      backbone_(shape.hidden_dim, shape.hidden_dim),
      head_(shape.vocab_size, shape.hidden_dim) {
  shape_.validate();
  branch_proj_.assign(static_cast<std::size_t>(shape.num_branches),
                      Matrix(shape.hidden_dim, 2 * shape.hidden_dim));
}

LinearMtpModel LinearMtpModel::random(const LinearMtpShape& shape, std::uint64_t seed) {
  LinearMtpModel model(shape);
  std::mt19937_64 rng(seed);
  fill_uniform(model.embedding_, rng, kInitRange);
  fill_uniform(model.backbone_, rng, kInitRange);
  for (Matrix& g : model.branch_proj_) {
    fill_uniform(g, rng, kInitRange);
  }
  fill_uniform(model.head_, rng, kInitRange);
  return model;
}

ModelStepOutput LinearMtpModel::forward(std::span<const TokenId> context,
                                        std::span<const TokenId> shift_tokens) const {
  return to_output(Forward(*this).run(context, shift_tokens));
}

std::vector<double> LinearMtpModel::position_state(const DecodeCache&, TokenId token) const {
  check_token(shape_, token);
  const auto row = embedding_.row(static_cast<std::size_t>(token));
  return {row.begin(), row.end()};
}

ModelStepOutput LinearMtpModel::step(const DecodeCache& cache) const {
  const std::size_t len = cache.committed_len();
  const std::size_t window =
      shape_.context_window == 0 ? len : std::min(len, shape_.context_window);
  Trace trace;
  trace.mean.assign(shape_.hidden_dim, 0.0);
  for (std::size_t pos = len - window; pos < len; ++pos) {
    const auto state = cache.state(pos);
    for (std::size_t i = 0; i < shape_.hidden_dim; ++i) {
      trace.mean[i] += state[i];
    }
  }
  if (window > 0) {
    for (double& x : trace.mean) {
      x /= static_cast<double>(window);
    }
  }
  const Forward forward(*this);
  forward.start(trace);
  for (std::size_t k = 1; k <= static_cast<std::size_t>(shape_.num_branches); ++k) {
    forward.add_branch(trace, k, greedy_pick(trace.dists[k - 1]));
  }
  return to_output(std::move(trace));
}

double batch_loss(const LinearMtpModel& model, std::span<const std::vector<TokenId>> batch,
                  const MtpConfig& config, const BackwardOptions& options) {
  return accumulate(model, batch, config, options, false).loss;
}

LossAndGradients linear_backward(const LinearMtpModel& model,
                                 std::span<const std::vector<TokenId>> batch,
                                 const MtpConfig& config, const BackwardOptions& options) {
  return accumulate(model, batch, config, options, true);
}

LinearMtpModel init_branches_from_backbone(const LinearMtpModel& model, std::uint64_t seed) {
  LinearMtpModel out = model;
  const std::size_t d = model.hidden_dim();
  std::mt19937_64 rng(seed);
  for (int k = 1; k <= model.num_branches(); ++k) {
    Matrix& proj = out.branch_projection(k);
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) {
        proj(r, c) = model.backbone()(r, c);
      }
      for (std::size_t c = d; c < 2 * d; ++c) {
        proj(r, c) = -LinearMtpModel::kInitRange +
                     2.0 * LinearMtpModel::kInitRange * uniform01(rng);
      }
    }
  }
  return out;
}

}  // namespace mtpasr
