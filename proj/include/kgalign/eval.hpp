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

#include <map>
#include <span>
#include <string>
#include <vector>

#include "kgalign/kg.hpp"
#include "kgalign/matrix.hpp"

namespace kgalign {

struct EvalReport {
  std::map<int, double> hr;
  double mrr = 0.0;
  std::size_t n_test = 0;
  View source = View::kMerged;

  /// {"hr": {"1": ..., "10": ...}, "mrr": ..., "n_test": ..., "source": ...}
  std::string to_json() const;
};

/// Ranks every column of each test row by descending score (ties by column
/// ascending) and reports HR@K and MRR of the true counterparts. Throws
/// LookupError naming a test entity that falls outside the matrix.
EvalReport evaluate(const Matrix& scores, std::span<const EntityPair> test, std::span<const int> ks,
                    View source = View::kMerged);

/// 1-based rank of column truth within row, ties broken by column id.
std::size_t rank_of(std::span<const double> row, std::size_t truth);

}  // namespace kgalign
