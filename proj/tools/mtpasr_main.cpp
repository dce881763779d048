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

// mtpasr command line tool: decode, simulate, train, fuse, score.

#include <CLI11.hpp>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mtpasr/mtpasr.h"

namespace {

using namespace mtpasr;

/// A user-facing failure; main prints it and exits nonzero.
class CliError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename T>
bool parse_number(std::string_view text, T& value) {
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string_view> split_list(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ',' || std::isspace(static_cast<unsigned char>(text[i])))) ++i;
    const std::size_t start = i;
    while (i < text.size() && text[i] != ',' && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) out.push_back(text.substr(start, i - start));
  }
  return out;
}

std::vector<TokenId> parse_tokens(std::string_view text, const std::string& where) {
  std::vector<TokenId> tokens;
  for (auto field : split_list(text)) {
    TokenId t = 0;
    if (!parse_number(field, t) || t < 0) {
      throw CliError(where + ": '" + std::string(field) + "' is not a token id");
    }
    tokens.push_back(t);
  }
  return tokens;
}

std::vector<double> parse_rates(std::string_view text) {
  std::vector<double> rates;
  for (auto field : split_list(text)) {
    double r = 0.0;
    if (!parse_number(field, r)) throw CliError("--rates: '" + std::string(field) + "' is not a number");
    rates.push_back(r);
  }
  if (rates.empty()) throw CliError("--rates: no values given");
  return rates;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CliError("cannot open '" + path + "' for writing");
  return out;
}

/// Writes to `path`, or to stdout when the path is empty or "-".
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  auto out = open_output(path);
  fn(out);
  if (!out) throw CliError("failed writing '" + path + "'");
}

// ---------------------------------------------------------------- decode

struct DecodeArgs {
  std::string model;
  std::string prompt;
  int max_tokens = 256;
  std::optional<TokenId> eos;
  std::optional<int> branches;
  std::string out;
  std::string stats;
  bool force_autoregressive = false;
  bool check_cache = false;
};

void run_decode(const DecodeArgs& a) {
  const LinearMtpModel model = load_model(a.model);
  const auto prompt = parse_tokens(a.prompt, "--prompt");
  if (prompt.empty()) throw CliError("--prompt: at least one token is required");
  for (TokenId t : prompt) {
    if (static_cast<std::size_t>(t) >= model.vocab_size()) {
      throw CliError("--prompt: token " + std::to_string(t) + " outside the model vocabulary of " +
                     std::to_string(model.vocab_size()));
    }
  }
  DecodeConfig config;
  config.mtp = {a.branches.value_or(model.num_branches()), defaults::kBranchDecay};
  config.max_tokens = a.max_tokens;
  config.eos_token = a.eos;

  DecodeOptions options;
  options.check_cache = a.check_cache;
  const DecodeResult result = a.force_autoregressive
                                  ? autoregressive_decode(model, prompt, config)
                                  : verified_decode(model, prompt, config, options);

  with_output(a.out, [&](std::ostream& os) {
    for (std::size_t i = 0; i < result.tokens.size(); ++i) os << (i ? " " : "") << result.tokens[i];
    os << '\n';
  });
  if (!a.stats.empty()) {
    with_output(a.stats, [&](std::ostream& os) { os << stats_to_json(result.stats) << '\n'; });
  }
  if (result.stats.steps > 0 && result.stats.num_branches > 0) {
    const auto report = acceptance_summary(result.stats);
    std::fprintf(stderr, "decoded %llu tokens in %llu forward passes; accepted length %s\n",
                 static_cast<unsigned long long>(report.tokens),
                 static_cast<unsigned long long>(report.forward_passes),
                 report.length_display().c_str());
  }
}

// -------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string rates;
  std::uint64_t steps = 1000000;
  std::uint64_t seed = 0;
  std::string out;
};

void run_simulate(const SimulateArgs& a) {
  const auto rates = parse_rates(a.rates);
  const AcceptanceStats stats = simulate_acceptance(rates, a.steps, a.seed);
  with_output(a.out, [&](std::ostream& os) { os << stats_to_json(stats) << '\n'; });
  std::fprintf(stderr, "expected length %.4f, simulated %s\n", expected_accepted_length(rates),
               acceptance_summary(stats).length_display(4).c_str());
}

// ----------------------------------------------------------------- train

struct TrainArgs {
  std::string corpus;
  std::string out;
  std::uint64_t seed = 0;
  std::size_t vocab_size = 0;
  std::size_t hidden_dim = 16;
  int branches = defaults::kNumBranches;
  double decay = defaults::kBranchDecay;
  std::size_t window = 1;
  int pretrain_steps = 300;
  int align_steps = 400;
  int calibrate_steps = 200;
  double pretrain_lr = defaults::kAlignmentLearningRate;
  double align_lr = defaults::kAlignmentLearningRate;
  double calibrate_lr = defaults::kCalibrationLearningRate;
  std::size_t batch_size = 0;
};

std::vector<std::vector<TokenId>> read_corpus(const std::string& path) {
  auto in = open_input(path);
  std::vector<std::vector<TokenId>> corpus;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto tokens = parse_tokens(line, path + ":" + std::to_string(lineno));
    if (tokens.empty()) continue;
    if (tokens.size() < 2) {
      throw CliError(path + ":" + std::to_string(lineno) + ": a sequence needs at least 2 tokens");
    }
    corpus.push_back(std::move(tokens));
  }
  if (corpus.empty()) throw CliError(path + ": no training sequences");
  return corpus;
}

void run_train(const TrainArgs& a) {
  const auto corpus = read_corpus(a.corpus);
  std::size_t vocab = a.vocab_size;
  TokenId max_token = 0;
  for (const auto& seq : corpus)
    for (TokenId t : seq) max_token = std::max(max_token, t);
  if (vocab == 0) vocab = static_cast<std::size_t>(max_token) + 1;
  if (static_cast<std::size_t>(max_token) >= vocab) {
    throw CliError("corpus token " + std::to_string(max_token) + " outside --vocab-size " +
                   std::to_string(vocab));
  }
  const MtpConfig mtp{a.branches, a.decay};
  mtp.validate();

  LinearMtpModel model = LinearMtpModel::random({vocab, a.hidden_dim, a.branches, a.window}, a.seed);
  auto stage = [&](TrainStage kind, double lr, int steps, std::uint64_t seed) {
    const auto result = train_stage(model, corpus, {kind, lr, steps, seed, a.batch_size}, mtp);
    if (!result.loss.empty()) {
      std::fprintf(stderr, "%-24s %5d steps  loss %.6f -> %.6f\n",
                   std::string(to_string(kind)).c_str(), steps, result.loss.front(),
                   result.loss.back());
    }
    model = result.model;
  };
  stage(TrainStage::next_token_pretraining, a.pretrain_lr, a.pretrain_steps, a.seed + 1);
  model = init_branches_from_backbone(model, a.seed + 2);
  stage(TrainStage::frozen_branch_alignment, a.align_lr, a.align_steps, a.seed + 3);
  stage(TrainStage::joint_calibration, a.calibrate_lr, a.calibrate_steps, a.seed + 4);
  save_model(a.out, model);
}

// ------------------------------------------------------------------ fuse

struct FuseArgs {
  std::string input;
  std::string output;
  std::string samples;
  double threshold = defaults::kDisagreementThreshold;
  double max_duration = 300.0;
  unsigned threads = 1;
};

void run_fuse(const FuseArgs& a) {
  auto in = open_input(a.input);
  FuseOptions options;
  options.threshold = a.threshold;
  options.max_duration = a.max_duration;
  options.threads = a.threads;
  // Buffer everything so a malformed input leaves no partial output behind.
  std::ostringstream results;
  std::ostringstream samples;
  FuseSummary summary;
  try {
    summary = run_fuse_pipeline(in, results, samples, options);
  } catch (const RecordParseError& e) {
    throw CliError(a.input + ": " + e.what());
  }
  with_output(a.output, [&](std::ostream& os) { os << results.str(); });
  if (!a.samples.empty()) {
    with_output(a.samples, [&](std::ostream& os) { os << samples.str(); });
  }
  std::fprintf(stderr, "%zu clips: %zu kept, %zu high disagreement, %zu empty; %zu samples\n",
               summary.clips, summary.kept, summary.high_disagreement, summary.empty_hypothesis,
               summary.samples);
}

// ----------------------------------------------------------------- score

struct ScoreArgs {
  std::string ref;
  std::string hyp;
  std::string out;
  std::string mode = "word";
};

void run_score(const ScoreArgs& a) {
  auto ref = open_input(a.ref);
  auto hyp = open_input(a.hyp);
  ScoreReport report;
  try {
    report = score_transcripts(ref, hyp, a.mode == "char" ? "char" : "");
  } catch (const RecordParseError& e) {
    throw CliError(std::string(e.what()) + " (in " + a.ref + " or " + a.hyp + ")");
  }
  with_output(a.out, [&](std::ostream& os) { os << score_report_to_json(report) << '\n'; });
  const char* label = a.mode == "char" ? "CER" : "WER";
  if (report.corpus.reference_length == 0) {
    std::fprintf(stderr, "%s undefined: empty reference\n", label);
  } else {
    std::fprintf(stderr, "%s %.2f%% [S=%zu D=%zu I=%zu N=%zu]\n", label,
                 100.0 * error_rate(report.corpus), report.corpus.substitutions,
                 report.corpus.deletions, report.corpus.insertions,
                 report.corpus.reference_length);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verified multi-token decoding, acceptance analytics and hypothesis fusion"};
  app.set_config("--config", "", "Read options from a TOML/INI file");
  app.require_subcommand(1);

  DecodeArgs decode;
  auto* d = app.add_subcommand("decode", "Greedy decoding with verified lookahead proposals");
  d->add_option("--model", decode.model, "Serialized model")->required()->check(CLI::ExistingFile);
  d->add_option("--prompt", decode.prompt, "Prompt token ids, space or comma separated")->required();
  d->add_option("--max-tokens", decode.max_tokens, "Token budget")->check(CLI::PositiveNumber);
  d->add_option("--eos", decode.eos, "End-of-sequence token id");
  d->add_option("--branches", decode.branches, "Proposal branches to use (default: all)");
  d->add_option("--out", decode.out, "Token output file (default: stdout)");
  d->add_option("--stats", decode.stats, "Write the acceptance stats document here");
  d->add_flag("--force-autoregressive", decode.force_autoregressive,
              "Decode one token per forward pass");
  d->add_flag("--check-cache", decode.check_cache,
              "Re-prefill after every step and compare against the rolled-back cache");

  SimulateArgs simulate;
  auto* s = app.add_subcommand("simulate", "Monte Carlo model of strict acceptance");
  s->add_option("--rates", simulate.rates, "Strict per-position rates")->required();
  s->add_option("--steps", simulate.steps, "Simulated decode steps")->check(CLI::PositiveNumber);
  s->add_option("--seed", simulate.seed, "RNG seed")->required();
  s->add_option("--out", simulate.out, "Stats document output (default: stdout)");

  TrainArgs train;
  auto* t = app.add_subcommand("train", "Staged training of the linear toy model");
  t->add_option("--corpus", train.corpus, "One token sequence per line")
      ->required()
      ->check(CLI::ExistingFile);
  t->add_option("--out", train.out, "Model output path")->required();
  t->add_option("--seed", train.seed, "Initialization and batching seed")->required();
  t->add_option("--vocab-size", train.vocab_size, "Vocabulary size (default: max token + 1)");
  t->add_option("--hidden-dim", train.hidden_dim)->check(CLI::PositiveNumber);
  t->add_option("--branches", train.branches)->check(CLI::PositiveNumber);
  t->add_option("--decay", train.decay, "Branch weight decay");
  t->add_option("--window", train.window, "Context tokens averaged by the backbone (0: all)");
  t->add_option("--pretrain-steps", train.pretrain_steps)->check(CLI::NonNegativeNumber);
  t->add_option("--align-steps", train.align_steps)->check(CLI::NonNegativeNumber);
  t->add_option("--calibrate-steps", train.calibrate_steps)->check(CLI::NonNegativeNumber);
  t->add_option("--pretrain-lr", train.pretrain_lr);
  t->add_option("--align-lr", train.align_lr);
  t->add_option("--calibrate-lr", train.calibrate_lr);
  t->add_option("--batch-size", train.batch_size, "Sequences per update (0: full corpus)");

  FuseArgs fuse;
  auto* f = app.add_subcommand("fuse", "Three-system hypothesis fusion and long-form grouping");
  f->add_option("--input", fuse.input, "Clip records (JSONL)")->required()->check(CLI::ExistingFile);
  f->add_option("--output", fuse.output, "Fusion results (JSONL, default: stdout)");
  f->add_option("--samples", fuse.samples, "Long-form samples (JSONL)");
  f->add_option("--threshold", fuse.threshold, "Maximum kept disagreement rate")
      ->check(CLI::Range(0.0, 1.0));
  f->add_option("--max-duration", fuse.max_duration, "Long-form sample budget in seconds")
      ->check(CLI::PositiveNumber);
  f->add_option("--threads", fuse.threads)->check(CLI::PositiveNumber);

  ScoreArgs score;
  auto* sc = app.add_subcommand("score", "Word or character error rate of Kaldi-style transcripts");
  sc->add_option("--ref", score.ref)->required()->check(CLI::ExistingFile);
  sc->add_option("--hyp", score.hyp)->required()->check(CLI::ExistingFile);
  sc->add_option("--out", score.out, "Score report (JSON, default: stdout)");
  sc->add_option("--mode", score.mode)->check(CLI::IsMember({"word", "char"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*d) run_decode(decode);
    if (*s) run_simulate(simulate);
    if (*t) run_train(train);
    if (*f) run_fuse(fuse);
    if (*sc) run_score(score);
  } catch (const TrainingDiverged& e) {
    std::fprintf(stderr, "mtpasr: error: %s; lower the learning rate\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "mtpasr: error: %s\n", e.what());
    return 2;
  }
  return 0;
}
