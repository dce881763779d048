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

#pragma once

#include <cstdint>

namespace mtpasr {

using TokenId = std::int32_t;

// Reference constants of the ASR recipe. Every default in the library and the
// CLI refers back to these; do not repeat the literals elsewhere.
namespace defaults {

inline constexpr int kNumBranches = 5;
inline constexpr double kBranchDecay = 0.9;

inline constexpr double kAlignmentLearningRate = 2e-4;
inline constexpr double kCalibrationLearningRate = 2e-5;

inline constexpr double kDisagreementThreshold = 0.05;
inline constexpr double kMaxClipSeconds = 30.0;

}  // namespace defaults
}  // namespace mtpasr
