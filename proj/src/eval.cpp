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

#include "kgalign/eval.hpp"

#include "json.hpp"
#include "kgalign/error.hpp"

namespace kgalign {

std::string EvalReport::to_json() const {
  nlohmann::ordered_json j;
  nlohmann::ordered_json h = nlohmann::ordered_json::object();
  for (const auto& [k, v] : hr) h[std::to_string(k)] = v;
  j["hr"] = h;
  j["mrr"] = mrr;
  j["n_test"] = n_test;
  j["source"] = std::string(to_string(source));
  return j.dump();
}

std::size_t rank_of(std::span<const double> row, std::size_t truth) {
  const double s = row[truth];
  std::size_t rank = 1;
  for (std::size_t n = 0; n < row.size(); ++n)
    if (row[n] > s || (row[n] == s && n < truth)) ++rank;
  return rank;
}

EvalReport evaluate(const Matrix& scores, std::span<const EntityPair> test, std::span<const int> ks,
                    View source) {
  EvalReport report;
  report.source = source;
  report.n_test = test.size();
  for (int k : ks) report.hr[k] = 0.0;
  if (test.empty()) return report;
  double rr = 0.0;
  for (const auto& p : test) {
    if (!p.left.valid() || p.left.index() >= scores.rows)
      throw LookupError("test entity " + std::to_string(p.left.value) + " has no row in the score matrix");
    if (!p.right.valid() || p.right.index() >= scores.cols)
      throw LookupError("test counterpart " + std::to_string(p.right.value) +
                        " has no column in the score matrix");
    const auto r = rank_of(scores.row(p.left.index()), p.right.index());
    rr += 1.0 / static_cast<double>(r);
    for (auto& [k, hits] : report.hr)
      if (r <= static_cast<std::size_t>(k)) hits += 1.0;
  }
  const double n = static_cast<double>(test.size());
  for (auto& [k, hits] : report.hr) hits /= n;
  report.mrr = rr / n;
  return report;
}

}  // namespace kgalign
