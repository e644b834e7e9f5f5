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

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "kgalign/joint.hpp"
#include "kgalign/synth.hpp"

namespace kgalign {

struct DataConfig {
  std::filesystem::path rel_triples_1;
  std::filesystem::path attr_triples_1;
  std::filesystem::path rel_triples_2;
  std::filesystem::path attr_triples_2;
  std::filesystem::path ent_links;
  /// train:valid:test proportions applied to ent_links.
  std::string split = "4:1:10";

  friend bool operator==(const DataConfig&, const DataConfig&) = default;
};

/// Everything one align run needs. Either the five data files are given or
/// the synthetic section is enabled (then seed_fraction decides the split).
struct PipelineConfig {
  DataConfig data;
  bool use_synth = false;
  SynthSpec synth;
  PipelineOptions pipeline;
  /// Root seed; the split, word vectors and TransE draw derived seeds.
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = "kgalign-out";
  std::vector<int> eval_ks = {1, 10, 50};

  /// Throws ConfigError on out-of-range values (paths are not checked).
  void validate() const;
  /// Throws ConfigError naming the first data file that does not exist.
  void check_inputs() const;
  /// Proportions parsed from data.split.
  std::array<int, 3> split_proportions() const;
  /// Pipeline options with the derived per-component seeds filled in.
  PipelineOptions resolved_options() const;
  std::uint64_t split_seed() const;
};

bool operator==(const PipelineConfig& a, const PipelineConfig& b);

/// Sectioned key = value text: [data] [synth] [attribute] [relation] [joint]
/// [run]. Values are quoted strings, integers, reals or true/false; '#'
/// starts a comment. Unknown keys and mistyped values throw ConfigError.
PipelineConfig parse_config(std::string_view text, std::string_view origin = "<config>");

/// parse_config on a file; relative data paths resolve against its directory.
PipelineConfig load_config(const std::filesystem::path& path);

/// Writes every field, so parse_config(serialize_config(c)) == c.
std::string serialize_config(const PipelineConfig& config);

/// Sets one field from its "section.key" name and a value in config syntax
/// (bare strings are accepted).
void apply_override(PipelineConfig& config, std::string_view dotted_key, std::string_view value);

/// "M1"/"M2"/"M3" (also "standard"/"score"/"rank").
MergeMode parse_merge_mode(std::string_view s);
std::string_view merge_mode_name(MergeMode m);
/// "joint", "attribute", "relationship".
ViewMode parse_view_mode(std::string_view s);
std::string_view view_mode_name(ViewMode v);

}  // namespace kgalign
