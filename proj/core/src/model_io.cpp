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

#include "mtpasr/model_io.h"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace mtpasr {

namespace {

constexpr std::array<char, 8> kMagic = {'M', 'T', 'P', 'A', 'S', 'R', 'L', 'M'};
// Sanity bound on header dimensions so a corrupt header cannot request an
// absurd allocation.
constexpr std::uint32_t kMaxDim = 1u << 20;

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> b{};
  for (int i = 0; i < 4; ++i) {
    b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xFFu);
  }
  out.write(b.data(), b.size());
}

void put_f64(std::ostream& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) {
    b[static_cast<std::size_t>(i)] = static_cast<char>((bits >> (8 * i)) & 0xFFu);
  }
  out.write(b.data(), b.size());
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  void read(char* dst, std::size_t n, const char* what) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw ModelFormatError("model file truncated while reading " + std::string(what) +
                             " at byte " + std::to_string(offset_ + in_.gcount()));
    }
    offset_ += n;
  }

  std::uint32_t u32(const char* what) {
    std::array<unsigned char, 4> b{};
    read(reinterpret_cast<char*>(b.data()), b.size(), what);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) {
      v = (v << 8) | b[static_cast<std::size_t>(i)];
    }
    return v;
  }

  void block(Matrix& m, const char* what) {
    std::vector<unsigned char> raw(m.data.size() * 8);
    read(reinterpret_cast<char*>(raw.data()), raw.size(), what);
    for (std::size_t i = 0; i < m.data.size(); ++i) {
      std::uint64_t bits = 0;
      for (int j = 7; j >= 0; --j) {
        bits = (bits << 8) | raw[i * 8 + static_cast<std::size_t>(j)];
      }
      m.data[i] = std::bit_cast<double>(bits);
    }
  }

 private:
  std::istream& in_;
  std::size_t offset_ = 0;
};

}  // namespace

void write_model(std::ostream& out, const LinearMtpModel& model) {
  const auto& s = model.shape();
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, kModelFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(s.vocab_size));
  put_u32(out, static_cast<std::uint32_t>(s.hidden_dim));
  put_u32(out, static_cast<std::uint32_t>(s.num_branches));
  put_u32(out, static_cast<std::uint32_t>(s.context_window));
  auto block = [&](const Matrix& m) {
    for (double v : m.data) {
      put_f64(out, v);
    }
  };
  block(model.embedding());
  block(model.backbone());
  for (int k = 1; k <= model.num_branches(); ++k) {
    block(model.branch_projection(k));
  }
  block(model.output_head());
  if (!out) {
    throw ModelFormatError("failed to write model");
  }
}

LinearMtpModel read_model(std::istream& in) {
  Reader r(in);
  std::array<char, 8> magic{};
  r.read(magic.data(), magic.size(), "magic");
  if (magic != kMagic) {
    throw ModelFormatError("not a model file (bad magic)");
  }
  const std::uint32_t version = r.u32("version");
  if (version != kModelFormatVersion) {
    throw ModelFormatError("unsupported model file version " + std::to_string(version) +
                           " (expected " + std::to_string(kModelFormatVersion) + ")");
  }
  LinearMtpShape shape;
  shape.vocab_size = r.u32("vocab_size");
  shape.hidden_dim = r.u32("hidden_dim");
  const std::uint32_t branches = r.u32("num_branches");
  shape.context_window = r.u32("context_window");
  if (shape.vocab_size == 0 || shape.hidden_dim == 0 || branches == 0 ||
      shape.vocab_size > kMaxDim || shape.hidden_dim > kMaxDim || branches > 1024) {
    throw ModelFormatError("invalid shape header");
  }
  shape.num_branches = static_cast<int>(branches);

  LinearMtpModel model(shape);
  r.block(model.embedding(), "embedding");
  r.block(model.backbone(), "backbone");
  for (int k = 1; k <= model.num_branches(); ++k) {
    r.block(model.branch_projection(k), "branch projection");
  }
  r.block(model.output_head(), "output head");
  if (in.peek() != std::char_traits<char>::eof()) {
    throw ModelFormatError("trailing bytes after model payload");
  }
  return model;
}

void save_model(const std::filesystem::path& path, const LinearMtpModel& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw ModelFormatError("cannot open " + path.string() + " for writing");
  }
  write_model(out, model);
}

LinearMtpModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ModelFormatError("cannot open " + path.string());
  }
  return read_model(in);
}

}  // namespace mtpasr
