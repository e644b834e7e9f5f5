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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "kgalign/matrix.hpp"

namespace kgalign::kernels {

/// Read-only view of a slot tensor: values is entities x slots x dim,
/// ids is entities x slots with -1 marking padding.
struct SlotTensorView {
  std::span<const double> values;
  std::span<const std::int32_t> ids;
  std::size_t entities = 0;
  std::size_t slots = 0;
  std::size_t dim = 0;

  const double* slot(std::size_t e, std::size_t i) const { return values.data() + (e * slots + i) * dim; }
  std::int32_t id(std::size_t e, std::size_t i) const { return ids[e * slots + i]; }
};

struct KernelOptions {
  std::size_t block_rows = 1024;
  /// 0 leaves the OpenMP default in place.
  int threads = 0;
};

/// S[m][n] = sum_{i,j} <V[m][i], V'[n][j]> * [ids[m][i] == ids'[n][j] != -1],
/// evaluated literally (O(N N' M^2 D)). Serial reference for tests and
/// benchmarks.
Matrix masked_similarity_reference(const SlotTensorView& left, const SlotTensorView& right);

/// Same contract, computed by grouping slots under their id: per entity and id
/// the slot vectors are summed once, and only entity pairs sharing an id are
/// touched. Rows are processed in blocks in parallel; every output entry is
/// accumulated by one thread in ascending id order, so the result does not
/// depend on the thread count.
Matrix masked_similarity(const SlotTensorView& left, const SlotTensorView& right,
                         const KernelOptions& options = {});

/// Plain row-by-row dot products of two row-major embedding tables.
Matrix dot_similarity_reference(std::span<const double> left, std::size_t n_left,
                                std::span<const double> right, std::size_t n_right,
                                std::size_t dim);

/// Blocked, OpenMP-parallel version of dot_similarity_reference.
Matrix dot_similarity(std::span<const double> left, std::size_t n_left,
                      std::span<const double> right, std::size_t n_right, std::size_t dim,
                      const KernelOptions& options = {});

inline double dot(const double* a, const double* b, std::size_t dim) {
  double s = 0.0;
  for (std::size_t d = 0; d < dim; ++d) s += a[d] * b[d];
  return s;
}

}  // namespace kgalign::kernels
