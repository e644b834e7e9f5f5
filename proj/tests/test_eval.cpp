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

#include <random>

#include "doctest.h"
#include "json.hpp"
#include "kgalign/error.hpp"
#include "kgalign/eval.hpp"
#include "oracles.hpp"

using namespace kgalign;

namespace {

std::vector<EntityPair> diagonal(std::size_t n) {
  std::vector<EntityPair> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({EntityId(i), EntityId(i)});
  return out;
}

const std::vector<int> kKs{1, 5, 10};

}  // namespace

TEST_CASE("hand arithmetic with ranks one and two") {
  Matrix s(2, 3, 0.0);
  s(0, 0) = 1.0;
  s(1, 0) = 0.9;
  s(1, 1) = 0.5;
  const std::vector<EntityPair> test{{EntityId(0), EntityId(0)}, {EntityId(1), EntityId(1)}};
  const std::vector<int> ks{1, 10};
  const auto r = evaluate(s, test, ks);
  CHECK(r.hr.at(1) == 0.5);
  CHECK(r.hr.at(10) == 1.0);
  CHECK(r.mrr == 0.75);
  CHECK(r.n_test == 2);
}

TEST_CASE("perfect diagonal") {
  Matrix s(4, 4, 0.0);
  for (std::size_t i = 0; i < 4; ++i) s(i, i) = 1.0;
  const auto r = evaluate(s, diagonal(4), kKs);
  CHECK(r.hr.at(1) == 1.0);
  CHECK(r.mrr == 1.0);
}

TEST_CASE("ties rank by column id") {
  Matrix s(1, 4, 0.5);
  CHECK(rank_of(s.row(0), 0) == 1);
  CHECK(rank_of(s.row(0), 3) == 4);
}

TEST_CASE("random matrices match the sort-based oracle") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> coarse(0, 4);  // many ties
  std::normal_distribution<double> fine(0.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    Matrix s(5, 5);
    for (auto& x : s.data) x = trial % 2 ? fine(rng) : coarse(rng);
    const auto want = oracle::rank_metrics(s, diagonal(5), kKs);
    const auto got = evaluate(s, diagonal(5), kKs);
    for (int k : kKs) CHECK(got.hr.at(k) == want.hr.at(k));
    CHECK(std::abs(got.mrr - want.mrr) <= 1e-12);
  }
}

TEST_CASE("metric properties") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix s(12, 12);
    for (auto& x : s.data) x = n(rng);
    const std::vector<int> ks{1, 2, 3, 5, 8, 12};
    const auto r = evaluate(s, diagonal(12), ks);
    double prev = 0.0;
    for (int k : ks) {
      CHECK(r.hr.at(k) >= prev);
      CHECK(r.hr.at(k) <= 1.0);
      prev = r.hr.at(k);
    }
    CHECK(r.mrr >= r.hr.at(1));
    CHECK(r.hr.at(12) == 1.0);
    // Strictly increasing transforms per row do not change anything.
    Matrix t = s;
    for (std::size_t m = 0; m < 12; ++m)
      for (auto& x : t.row(m)) x = std::exp(x) * static_cast<double>(m + 1) + 3.0;
    const auto rt = evaluate(t, diagonal(12), ks);
    CHECK(rt.hr == r.hr);
    CHECK(rt.mrr == r.mrr);
  }
}

TEST_CASE("test entities outside the matrix are named") {
  Matrix s(2, 2, 0.0);
  const std::vector<EntityPair> test{{EntityId(7), EntityId(0)}};
  try {
    evaluate(s, test, kKs);
    FAIL("expected LookupError");
  } catch (const LookupError& e) {
    CHECK(std::string(e.what()).find('7') != std::string::npos);
  }
  const std::vector<EntityPair> bad_col{{EntityId(0), EntityId(9)}};
  CHECK_THROWS_AS(evaluate(s, bad_col, kKs), LookupError);
}

TEST_CASE("report JSON has exactly the requested keys") {
  Matrix s(2, 2, 0.0);
  s(0, 0) = s(1, 1) = 1.0;
  const std::vector<int> ks{1, 10};
  const auto j = nlohmann::json::parse(evaluate(s, diagonal(2), ks, View::kAttribute).to_json());
  CHECK(j["hr"].size() == 2);
  CHECK(j["hr"]["1"] == 1.0);
  CHECK(j["hr"]["10"] == 1.0);
  CHECK(j["mrr"] == 1.0);
  CHECK(j["n_test"] == 2);
  CHECK(j["source"] == "attribute-view");
}

TEST_CASE("similarity dumps round-trip as float32 and check their length") {
  Matrix s(3, 2);
  s.data = {0.5, -1.25, 3.0, 1e-3, 0.1, 7.0};
  oracle::TempDir dir;
  save_similarity(s, dir / "m.bin");
  CHECK(std::filesystem::file_size(dir / "m.bin") == 8 + 6 * 4);
  const auto back = load_similarity(dir / "m.bin");
  CHECK(back.rows == 3);
  CHECK(back.cols == 2);
  for (std::size_t i = 0; i < 6; ++i) CHECK(back.data[i] == static_cast<double>(static_cast<float>(s.data[i])));
  auto bytes = oracle::read_file(dir / "m.bin");
  oracle::write_file(dir / "short.bin", bytes.substr(0, bytes.size() - 2));
  CHECK_THROWS_AS(load_similarity(dir / "short.bin"), ShapeError);
  oracle::write_file(dir / "tiny.bin", "abc");
  CHECK_THROWS_AS(load_similarity(dir / "tiny.bin"), ShapeError);
}
