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

// Writes a deterministic synthetic clip session (JSONL) for CLI tests.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <random>
#include <string>

#include "mtpasr/records_io.h"

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: make_fuse_session <clips> <seed>\n");
    return 2;
  }
  const long clips = std::atol(argv[1]);
  std::mt19937_64 rng(std::strtoull(argv[2], nullptr, 10));
  const char* words[] = {"Ｔhe", "cat", "SAT,", "on", "a", "mat.", "你", "好"};
  double t = 0.0;
  for (long i = 0; i < clips; ++i) {
    mtpasr::ClipRecord c;
    c.clip_id = "clip-" + std::to_string(i);
    c.start = t;
    c.end = t + 1.0 + static_cast<double>(rng() % 280) / 10.0;
    t = c.end;
    std::string base;
    for (std::size_t w = 0, n = 3 + rng() % 20; w < n; ++w) base += std::string(words[rng() % 8]) + " ";
    for (auto& h : c.hypotheses) h = rng() % 3 == 0 ? base + words[rng() % 8] : base;
    if (i % 7 == 0) c.language = "zh";
    std::cout << mtpasr::to_json_line(c) << '\n';
  }
  return 0;
}
