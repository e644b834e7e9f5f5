// Copyright 2026 The kgalign Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <bit>
#include <cstdint>
#include <fstream>

#include "kgalign/error.hpp"
#include "kgalign/matrix.hpp"

namespace kgalign {

std::string_view to_string(View v) {
  switch (v) {
    case View::kAttribute: return "attribute-view";
    case View::kRelationship: return "relationship-view";
    case View::kMerged: return "merged";
  }
  return "unknown";
}

namespace {

void put_u32(std::ostream& out, std::uint32_t x) {
  const char b[4] = {static_cast<char>(x & 0xFF), static_cast<char>((x >> 8) & 0xFF),
                     static_cast<char>((x >> 16) & 0xFF), static_cast<char>((x >> 24) & 0xFF)};
  out.write(b, 4);
}

std::uint32_t get_u32(const unsigned char* b) {
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

void save_similarity(const Matrix& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  put_u32(out, static_cast<std::uint32_t>(m.rows));
  put_u32(out, static_cast<std::uint32_t>(m.cols));
  for (double x : m.data) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(x)));
  if (!out) throw IoError("write failure on " + path.string());
}

Matrix load_similarity(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 8) throw ShapeError(path.string() + ": truncated similarity header");
  const std::size_t rows = get_u32(bytes.data());
  const std::size_t cols = get_u32(bytes.data() + 4);
  if (bytes.size() != 8 + 4 * rows * cols)
    throw ShapeError(path.string() + ": payload does not match header " + std::to_string(rows) +
                     "x" + std::to_string(cols));
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows * cols; ++i)
    m.data[i] = static_cast<double>(std::bit_cast<float>(get_u32(bytes.data() + 8 + 4 * i)));
  return m;
}

}  // namespace kgalign
