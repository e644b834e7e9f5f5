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

#include <algorithm>
#include <omp.h>
#include <vector>

#include "kgalign/error.hpp"
#include "kgalign/kernels.hpp"

namespace kgalign::kernels {

void check_slot_view(const SlotTensorView& v, const char* which);

namespace {

// Per-entity sums of slot vectors, one entry per distinct id of the entity,
// ids ascending.
struct Aggregated {
  std::vector<std::size_t> offsets;  // entities + 1
  std::vector<std::int32_t> ids;
  std::vector<double> vectors;  // ids.size() x dim
};

Aggregated aggregate(const SlotTensorView& v) {
  Aggregated a;
  a.offsets.assign(v.entities + 1, 0);
  std::vector<std::int32_t> distinct;
  for (std::size_t e = 0; e < v.entities; ++e) {
    distinct.clear();
    for (std::size_t i = 0; i < v.slots; ++i)
      if (v.id(e, i) >= 0) distinct.push_back(v.id(e, i));
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    const std::size_t base = a.ids.size();
    a.ids.insert(a.ids.end(), distinct.begin(), distinct.end());
    a.vectors.resize(a.ids.size() * v.dim, 0.0);
    for (std::size_t i = 0; i < v.slots; ++i) {
      const auto k = v.id(e, i);
      if (k < 0) continue;
      const auto pos = base + static_cast<std::size_t>(
                                  std::lower_bound(distinct.begin(), distinct.end(), k) - distinct.begin());
      const double* src = v.slot(e, i);
      double* dst = a.vectors.data() + pos * v.dim;
      for (std::size_t d = 0; d < v.dim; ++d) dst[d] += src[d];
    }
    a.offsets[e + 1] = a.ids.size();
  }
  return a;
}

}  // namespace

Matrix masked_similarity(const SlotTensorView& left, const SlotTensorView& right,
                         const KernelOptions& options) {
  check_slot_view(left, "left");
  check_slot_view(right, "right");
  if (left.dim != right.dim) throw ShapeError("value embedding dimensions differ");
  const std::size_t dim = left.dim;

  const Aggregated la = aggregate(left);
  const Aggregated ra = aggregate(right);

  // Invert the right side: for each id, the (entity, aggregate row) list.
  std::int32_t max_id = -1;
  for (auto k : la.ids) max_id = std::max(max_id, k);
  for (auto k : ra.ids) max_id = std::max(max_id, k);
  const std::size_t n_ids = static_cast<std::size_t>(max_id + 1);
  std::vector<std::size_t> group_offsets(n_ids + 1, 0);
  for (auto k : ra.ids) ++group_offsets[static_cast<std::size_t>(k) + 1];
  for (std::size_t k = 0; k < n_ids; ++k) group_offsets[k + 1] += group_offsets[k];
  std::vector<std::size_t> group_entity(ra.ids.size()), group_row(ra.ids.size());
  {
    std::vector<std::size_t> fill(group_offsets.begin(), group_offsets.end() - 1);
    for (std::size_t n = 0; n < right.entities; ++n)
      for (std::size_t p = ra.offsets[n]; p < ra.offsets[n + 1]; ++p) {
        const auto pos = fill[static_cast<std::size_t>(ra.ids[p])]++;
        group_entity[pos] = n;
        group_row[pos] = p;
      }
  }

  Matrix s(left.entities, right.entities);
  const std::size_t block = std::max<std::size_t>(1, options.block_rows);
  const auto n_blocks = static_cast<std::ptrdiff_t>((left.entities + block - 1) / block);
  const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::ptrdiff_t b = 0; b < n_blocks; ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * block;
    const std::size_t end = std::min(left.entities, begin + block);
    for (std::size_t m = begin; m < end; ++m) {
      double* out = s.data.data() + m * s.cols;
      for (std::size_t p = la.offsets[m]; p < la.offsets[m + 1]; ++p) {
        const auto k = static_cast<std::size_t>(la.ids[p]);
        const double* lv = la.vectors.data() + p * dim;
        for (std::size_t q = group_offsets[k]; q < group_offsets[k + 1]; ++q)
          out[group_entity[q]] += dot(lv, ra.vectors.data() + group_row[q] * dim, dim);
      }
    }
  }
  return s;
}

Matrix dot_similarity(std::span<const double> left, std::size_t n_left,
                      std::span<const double> right, std::size_t n_right, std::size_t dim,
                      const KernelOptions& options) {
  if (left.size() != n_left * dim || right.size() != n_right * dim)
    throw ShapeError("embedding tables do not match their shapes");
  Matrix s(n_left, n_right);
  const std::size_t block = std::max<std::size_t>(1, options.block_rows);
  const auto n_blocks = static_cast<std::ptrdiff_t>((n_left + block - 1) / block);
  const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();

#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::ptrdiff_t b = 0; b < n_blocks; ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * block;
    const std::size_t end = std::min(n_left, begin + block);
    for (std::size_t m = begin; m < end; ++m)
      for (std::size_t n = 0; n < n_right; ++n)
        s(m, n) = dot(left.data() + m * dim, right.data() + n * dim, dim);
  }
  return s;
}

}  // namespace kgalign::kernels
