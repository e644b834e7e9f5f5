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

// Serial reference vs OpenMP kernels. Range args: entities per side, then
// threads for the parallel variants (0 = OpenMP default).

#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "kgalign/kernels.hpp"

using namespace kgalign;

namespace {

constexpr std::size_t kSlots = 20;
constexpr std::size_t kDim = 100;
constexpr int kIds = 40;

struct Slots {
  std::vector<double> values;
  std::vector<std::int32_t> ids;
  std::size_t entities;

  kernels::SlotTensorView view() const { return {values, ids, entities, kSlots, kDim}; }
};

Slots make_slots(std::size_t entities, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> id(-1, kIds - 1);
  Slots s{std::vector<double>(entities * kSlots * kDim), std::vector<std::int32_t>(entities * kSlots), entities};
  for (auto& v : s.values) v = normal(rng);
  for (auto& i : s.ids) i = id(rng);
  return s;
}

std::vector<double> make_table(std::size_t rows, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> t(rows * dim);
  for (auto& v : t) v = normal(rng);
  return t;
}

void BM_MaskedReference(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = make_slots(n, 1), b = make_slots(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::masked_similarity_reference(a.view(), b.view()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

void BM_MaskedParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = make_slots(n, 1), b = make_slots(n, 2);
  kernels::KernelOptions opt;
  opt.threads = static_cast<int>(state.range(1));
  opt.block_rows = 64;
  for (auto _ : state) benchmark::DoNotOptimize(kernels::masked_similarity(a.view(), b.view(), opt));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

void BM_DotReference(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t dim = 75;
  const auto a = make_table(n, dim, 3), b = make_table(n, dim, 4);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::dot_similarity_reference(a, n, b, n, dim));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

void BM_DotParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t dim = 75;
  const auto a = make_table(n, dim, 3), b = make_table(n, dim, 4);
  kernels::KernelOptions opt;
  opt.threads = static_cast<int>(state.range(1));
  opt.block_rows = 64;
  for (auto _ : state) benchmark::DoNotOptimize(kernels::dot_similarity(a, n, b, n, dim, opt));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

}  // namespace

BENCHMARK(BM_MaskedReference)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MaskedParallel)->ArgsProduct({{100, 300, 1000}, {1, 0}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DotReference)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DotParallel)->ArgsProduct({{500, 2000}, {1, 0}})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
