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
#include <sstream>

#include "mtpasr/records_io.h"

namespace mtpasr {
namespace {

TEST(Records, FusionResultRoundTrip) {
  FusionResult r;
  r.clip_id = "clip-\"7\"";
  r.fused_tokens = {"你", "好", "don't"};
  r.disagreed_positions = 1;
  r.text_units = 20;
  r.e_hat = 0.05;
  r.kept = true;
  r.verdict = FusionVerdict::kept;
  EXPECT_EQ(parse_fusion_result(to_json_line(r)), r);
}

TEST(Records, ClipAndSampleRoundTrip) {
  const ClipRecord c{"c", 1.25, 3.5, {"a", "b", "c"}, std::string("zh")};
  EXPECT_EQ(parse_clip_record(to_json_line(c)), c);
  const ClipRecord no_lang{"c", 1.25, 3.5, {"a", "b", "c"}, {}};
  EXPECT_EQ(parse_clip_record(to_json_line(no_lang)), no_lang);
  const LongFormSample s{"sample-000001", {"a", "b"}, "a b", 12.5, true};
  EXPECT_EQ(parse_long_form_sample(to_json_line(s)), s);
}

TEST(Records, LargeJsonlRoundTrip) {
  std::mt19937_64 rng(1);
  std::vector<ClipRecord> clips;
  std::ostringstream out;
  for (int i = 0; i < 10000; ++i) {
    ClipRecord c;
    c.clip_id = "clip-" + std::to_string(i);
    c.start = static_cast<double>(i) * 0.1 + static_cast<double>(rng() % 1000) / 7.0;
    c.end = c.start + 0.5 + static_cast<double>(rng() % 100) / 9.0;
    for (auto& h : c.hypotheses) h = "w" + std::to_string(rng() % 50);
    if (i % 3 == 0) c.language = "en";
    out << to_json_line(c) << '\n';
    clips.push_back(std::move(c));
  }
  std::istringstream in(out.str());
  EXPECT_EQ(read_clip_records(in), clips);
}

TEST(Records, MalformedInputNamesLine) {
  const std::string good = to_json_line(ClipRecord{"c", 0, 1, {"a", "b", "c"}, {}});
  const std::string cases[] = {
      "not json",
      R"({"clip_id":"c","start":0,"end":1,"hyps":["a","b"]})",
      R"({"clip_id":"c","start":0,"end":40,"hyps":["a","b","c"]})",
      R"({"clip_id":"c","start":0,"hyps":["a","b","c"]})",
  };
  for (const auto& bad : cases) {
    std::istringstream in(good + "\n\n" + bad + "\n");
    try {
      read_clip_records(in);
      FAIL() << bad;
    } catch (const RecordParseError& e) {
      EXPECT_EQ(e.line(), 3u) << bad;
      EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
  }
}

TEST(Records, StatsDocumentRoundTrip) {
  AcceptanceStats stats(3);
  stats.record_step(3, 2);
  stats.record_step(1, 1);
  stats.emitted_tokens = 6;
  stats.forward_passes = 3;
  stats.rollbacks = 1;
  const std::string doc = stats_to_json(stats);
  EXPECT_NE(doc.find("\"avg_accepted_length\""), std::string::npos);
  EXPECT_NE(doc.find("\"rates\""), std::string::npos);
  EXPECT_EQ(stats_from_json(doc), stats);
  EXPECT_THROW(stats_from_json("{}"), RecordParseError);
}

}  // namespace
}  // namespace mtpasr
