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

#include "kgalign/error.hpp"
#include "kgalign/kernels.hpp"

namespace kgalign::kernels {

void check_slot_view(const SlotTensorView& v, const char* which);

void check_slot_view(const SlotTensorView& v, const char* which) {
  if (v.values.size() != v.entities * v.slots * v.dim || v.ids.size() != v.entities * v.slots)
    throw ShapeError(std::string(which) + " slot tensor buffers do not match its shape");
}

Matrix masked_similarity_reference(const SlotTensorView& left, const SlotTensorView& right) {
  check_slot_view(left, "left");
  check_slot_view(right, "right");
  if (left.dim != right.dim) throw ShapeError("value embedding dimensions differ");
  Matrix s(left.entities, right.entities);
  for (std::size_t m = 0; m < left.entities; ++m)
    for (std::size_t n = 0; n < right.entities; ++n) {
      double acc = 0.0;
      for (std::size_t i = 0; i < left.slots; ++i)
        for (std::size_t j = 0; j < right.slots; ++j) {
          const auto k = left.id(m, i);
          if (k < 0 || k != right.id(n, j)) continue;
          acc += dot(left.slot(m, i), right.slot(n, j), left.dim);
        }
      s(m, n) = acc;
    }
  return s;
}

Matrix dot_similarity_reference(std::span<const double> left, std::size_t n_left,
                                std::span<const double> right, std::size_t n_right,
                                std::size_t dim) {
  if (left.size() != n_left * dim || right.size() != n_right * dim)
    throw ShapeError("embedding tables do not match their shapes");
  Matrix s(n_left, n_right);
  for (std::size_t m = 0; m < n_left; ++m)
    for (std::size_t n = 0; n < n_right; ++n)
      s(m, n) = dot(left.data() + m * dim, right.data() + n * dim, dim);
  return s;
}

}  // namespace kgalign::kernels
