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

#include "mtpasr/records_io.h"

#include <istream>
#include <json.hpp>

namespace mtpasr {

using nlohmann::json;

namespace {

template <typename Parse>
auto parse_json(std::string_view text, Parse&& parse) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw RecordParseError(0, std::string("invalid JSON: ") + e.what());
  }
  try {
    return parse(j);
  } catch (const json::exception& e) {
    throw RecordParseError(0, e.what());
  } catch (const std::invalid_argument& e) {
    throw RecordParseError(0, e.what());
  }
}

template <typename Record, typename Parse>
std::vector<Record> read_lines(std::istream& in, Parse&& parse,
                               std::vector<std::size_t>* line_numbers = nullptr) {
  std::vector<Record> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    try {
      out.push_back(parse(line));
    } catch (const RecordParseError& e) {
      throw RecordParseError(lineno, e.what());
    }
    if (line_numbers) {
      line_numbers->push_back(lineno);
    }
  }
  return out;
}

json stats_document(const AcceptanceStats& stats) {
  json j;
  j["num_branches"] = stats.num_branches;
  j["rates"] = stats.strict_rates();
  j["avg_accepted_length"] = stats.average_accepted_length();
  j["steps"] = stats.steps;
  j["tokens"] = stats.emitted_tokens;
  j["forward_passes"] = stats.forward_passes;
  j["rollbacks"] = stats.rollbacks;
  j["tokens_per_forward_pass"] =
      stats.forward_passes == 0
          ? 0.0
          : static_cast<double>(stats.emitted_tokens) / static_cast<double>(stats.forward_passes);
  j["attempts"] = stats.attempts;
  j["accepts"] = stats.accepts;
  return j;
}

json counts_document(const EditCounts& c) {
  json j;
  j["substitutions"] = c.substitutions;
  j["deletions"] = c.deletions;
  j["insertions"] = c.insertions;
  j["reference_length"] = c.reference_length;
  j["errors"] = c.distance();
  j["error_rate"] = c.reference_length == 0 ? json(nullptr) : json(error_rate(c));
  return j;
}

}  // namespace

RecordParseError::RecordParseError(std::size_t line, const std::string& what)
    : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
      line_(line) {}

std::string to_json_line(const ClipRecord& clip) {
  json j;
  j["clip_id"] = clip.clip_id;
  j["start"] = clip.start;
  j["end"] = clip.end;
  j["hyps"] = clip.hypotheses;
  if (clip.language) {
    j["lang"] = *clip.language;
  }
  return j.dump();
}

std::string to_json_line(const FusionResult& r) {
  json j;
  j["clip_id"] = r.clip_id;
  j["fused_tokens"] = r.fused_tokens;
  j["disagreed_positions"] = r.disagreed_positions;
  j["text_units"] = r.text_units;
  j["e_hat"] = r.e_hat;
  j["kept"] = r.kept;
  j["verdict"] = to_string(r.verdict);
  return j.dump();
}

std::string to_json_line(const LongFormSample& s) {
  json j;
  j["sample_id"] = s.sample_id;
  j["clip_ids"] = s.clip_ids;
  j["text"] = s.text;
  j["total_duration"] = s.total_duration;
  j["unrefined"] = s.unrefined;
  return j.dump();
}

ClipRecord parse_clip_record(std::string_view line) {
  return parse_json(line, [](const json& j) {
    ClipRecord clip;
    clip.clip_id = j.at("clip_id").get<std::string>();
    clip.start = j.at("start").get<double>();
    clip.end = j.at("end").get<double>();
    const auto& hyps = j.at("hyps");
    if (!hyps.is_array() || hyps.size() != kNumSystems) {
      throw std::invalid_argument("'hyps' must be an array of exactly 3 strings");
    }
    for (std::size_t s = 0; s < kNumSystems; ++s) {
      clip.hypotheses[s] = hyps[s].get<std::string>();
    }
    if (const auto it = j.find("lang"); it != j.end() && !it->is_null()) {
      clip.language = it->get<std::string>();
    }
    clip.validate();
    return clip;
  });
}

FusionResult parse_fusion_result(std::string_view line) {
  return parse_json(line, [](const json& j) {
    FusionResult r;
    r.clip_id = j.at("clip_id").get<std::string>();
    r.fused_tokens = j.at("fused_tokens").get<TokenSequence>();
    r.disagreed_positions = j.at("disagreed_positions").get<std::size_t>();
    r.text_units = j.at("text_units").get<std::size_t>();
    r.e_hat = j.at("e_hat").get<double>();
    r.kept = j.at("kept").get<bool>();
    r.verdict = parse_fusion_verdict(j.at("verdict").get<std::string>());
    if (r.e_hat < 0.0 || r.e_hat > 1.0 || r.disagreed_positions > r.text_units) {
      throw std::invalid_argument("inconsistent disagreement counts");
    }
    return r;
  });
}

LongFormSample parse_long_form_sample(std::string_view line) {
  return parse_json(line, [](const json& j) {
    LongFormSample s;
    s.sample_id = j.at("sample_id").get<std::string>();
    s.clip_ids = j.at("clip_ids").get<std::vector<std::string>>();
    s.text = j.at("text").get<std::string>();
    s.total_duration = j.at("total_duration").get<double>();
    s.unrefined = j.at("unrefined").get<bool>();
    return s;
  });
}

std::vector<ClipRecord> read_clip_records(std::istream& in,
                                          std::vector<std::size_t>* line_numbers) {
  return read_lines<ClipRecord>(
      in, [](const std::string& l) { return parse_clip_record(l); }, line_numbers);
}

std::vector<FusionResult> read_fusion_results(std::istream& in) {
  return read_lines<FusionResult>(in, [](const std::string& l) { return parse_fusion_result(l); });
}

std::vector<LongFormSample> read_long_form_samples(std::istream& in) {
  return read_lines<LongFormSample>(
      in, [](const std::string& l) { return parse_long_form_sample(l); });
}

std::string stats_to_json(const AcceptanceStats& stats, int indent) {
  return stats_document(stats).dump(indent);
}

AcceptanceStats stats_from_json(std::string_view text) {
  return parse_json(text, [](const json& j) {
    AcceptanceStats stats;
    stats.num_branches = j.at("num_branches").get<int>();
    stats.attempts = j.at("attempts").get<std::vector<std::uint64_t>>();
    stats.accepts = j.at("accepts").get<std::vector<std::uint64_t>>();
    stats.steps = j.at("steps").get<std::uint64_t>();
    stats.emitted_tokens = j.at("tokens").get<std::uint64_t>();
    stats.forward_passes = j.at("forward_passes").get<std::uint64_t>();
    stats.rollbacks = j.at("rollbacks").get<std::uint64_t>();
    stats.validate();
    return stats;
  });
}

std::string score_report_to_json(const ScoreReport& report, int indent) {
  json j;
  j["utterances"] = json::array();
  for (const auto& u : report.utterances) {
    json entry = counts_document(u.counts);
    entry["id"] = u.id;
    j["utterances"].push_back(std::move(entry));
  }
  j["corpus"] = counts_document(report.corpus);
  return j.dump(indent);
}

}  // namespace mtpasr
