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
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "mtpasr/linear_model.h"

namespace mtpasr {

/// Binary layout of a serialized LinearMtpModel (all integers little-endian
/// uint32, all parameters little-endian IEEE-754 binary64):
///
///   offset 0   magic "MTPASRLM" (8 bytes)
///   offset 8   format version (currently 1)
///   offset 12  vocab_size, hidden_dim, num_branches, context_window
///   offset 28  E (V x d), F (d x d), G_1 .. G_H (d x 2d each), U (V x d),
///              each block row-major
///
/// The file ends exactly after U. See docs/model_format.md.
inline constexpr std::uint32_t kModelFormatVersion = 1;

class ModelFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_model(std::ostream& out, const LinearMtpModel& model);
/// Throws ModelFormatError on a bad magic, a version mismatch, an invalid
/// shape header, or a stream that ends early or carries trailing bytes.
LinearMtpModel read_model(std::istream& in);

void save_model(const std::filesystem::path& path, const LinearMtpModel& model);
LinearMtpModel load_model(const std::filesystem::path& path);

}  // namespace mtpasr
