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

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kgalign/config.hpp"
#include "kgalign/error.hpp"
#include "kgalign/eval.hpp"
#include "kgalign/joint.hpp"
#include "kgalign/synth.hpp"

namespace {

using namespace kgalign;

constexpr int kOk = 0;
constexpr int kRuntime = 1;
constexpr int kUsage = 2;

void log(const std::string& msg) { std::cerr << "kgalign: " << msg << "\n"; }

std::vector<int> parse_k_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, ',')) {
    int k = 0;
    auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), k);
    if (ec != std::errc{} || p != part.data() + part.size() || k < 1)
      throw ConfigError("--k expects a comma-separated list of positive integers, got '" + s + "'");
    out.push_back(k);
  }
  if (out.empty()) throw ConfigError("--k must not be empty");
  return out;
}

View view_of(ViewMode m) {
  switch (m) {
    case ViewMode::kAttributeOnly: return View::kAttribute;
    case ViewMode::kRelationshipOnly: return View::kRelationship;
    case ViewMode::kJoint: return View::kMerged;
  }
  return View::kMerged;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write " + p.string());
  return out;
}

struct AlignArgs {
  std::string config;
  std::string merge;
  std::string views;
  std::string output;
  int threads = -1;
  long long seed = -1;
  int max_iterations = 0;
  std::vector<std::string> sets;
};

PipelineConfig align_config(const AlignArgs& a) {
  PipelineConfig c = load_config(a.config);
  for (const auto& s : a.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects section.key=value, got '" + s + "'");
    apply_override(c, s.substr(0, eq), s.substr(eq + 1));
  }
  if (!a.merge.empty()) c.pipeline.merge = parse_merge_mode(a.merge);
  if (!a.views.empty()) c.pipeline.views = parse_view_mode(a.views);
  if (!a.output.empty()) c.output_dir = a.output;
  if (a.threads >= 0) c.pipeline.kernels.threads = a.threads;
  if (a.seed >= 0) c.seed = static_cast<std::uint64_t>(a.seed);
  if (a.max_iterations > 0) c.pipeline.max_iterations = a.max_iterations;
  c.validate();
  c.check_inputs();
  return c;
}

int cmd_align(const AlignArgs& args) {
  PipelineConfig config;
  try {
    config = align_config(args);
  } catch (const ConfigError& e) {
    log(e.what());
    return kUsage;
  }

  KnowledgeGraph g, g2;
  IllSplit split;
  if (config.use_synth) {
    auto data = generate_synth(config.synth);
    g = std::move(data.g);
    g2 = std::move(data.g2);
    split = split_ills_by_fraction(data.entity_links, config.synth.seed_fraction, config.split_seed());
  } else {
    g = load_graph(config.data.rel_triples_1, config.data.attr_triples_1);
    g2 = load_graph(config.data.rel_triples_2, config.data.attr_triples_2);
    const auto links = read_pair_file(config.data.ent_links);
    split = split_ills(links, config.split_seed(), config.split_proportions());
  }
  log("graphs: " + std::to_string(g.num_entities()) + " x " + std::to_string(g2.num_entities()) +
      " entities; split " + std::to_string(split.train.size()) + "/" + std::to_string(split.valid.size()) +
      "/" + std::to_string(split.test.size()));

  const auto valid = resolve_entity_pairs(g, g2, split.valid);
  const auto test = resolve_entity_pairs(g, g2, split.test);
  auto seeds = build_initial_seeds(g, g2, split.train);

  const auto& out_dir = config.output_dir;
  std::filesystem::create_directories(out_dir);
  {
    auto cfg_out = open_out(out_dir / "config.toml");
    cfg_out << serialize_config(config);
  }
  auto log_out = open_out(out_dir / "iteration_log.jsonl");
  const auto options = config.resolved_options();
  auto observer = [&](const IterationRecord& rec, const AlignmentStore& store, const CandidateSet&) {
    log_out << rec.to_json_line() << "\n";
    log_out.flush();
    log("iteration " + std::to_string(rec.iteration) + ": +" + std::to_string(rec.merged) +
        " entities, +" + std::to_string(rec.new_attr) + " attributes, +" + std::to_string(rec.new_rel) +
        " relations, +" + std::to_string(rec.new_val) + " values, |I| = " + std::to_string(store.total_size()));
  };
  const auto result = run_pipeline(g, g2, std::move(seeds), valid, options, observer);
  if (result.truncated) log("stopped at max_iterations with alignments still growing");

  write_alignment_dump(result.store, g, g2, out_dir / "alignments.tsv");
  const auto scores = alignment_scores(result, options.views);
  save_similarity(scores, out_dir / "similarity.bin");
  {
    auto pairs = open_out(out_dir / "test_pairs.tsv");
    for (const auto& p : test) pairs << p.left.value << "\t" << p.right.value << "\n";
  }
  const auto report = evaluate(scores, test, config.eval_ks, view_of(options.views));
  {
    auto eval_out = open_out(out_dir / "eval.json");
    eval_out << report.to_json() << "\n";
  }
  {
    nlohmann::ordered_json summary;
    summary["iterations"] = result.log.size();
    summary["truncated"] = result.truncated;
    summary["entities"] = result.store.entities.size();
    summary["relations"] = result.store.relations.size();
    summary["attributes"] = result.store.attributes.size();
    summary["values"] = result.store.values.size();
    auto s = open_out(out_dir / "run_summary.json");
    s << summary.dump(2) << "\n";
  }
  std::cout << report.to_json() << "\n";
  return kOk;
}

std::vector<EntityPair> read_index_pairs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("test file not found: " + path.string());
  std::vector<EntityPair> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    long long l = -1, r = -1;
    std::string extra;
    if (!(fields >> l >> r) || (fields >> extra) || l < 0 || r < 0)
      throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                        ": expected two non-negative integer indices");
    out.push_back({EntityId(static_cast<std::int32_t>(l)), EntityId(static_cast<std::int32_t>(r))});
  }
  return out;
}

int cmd_eval(const std::string& matrix_path, const std::string& test_path, const std::string& ks_text,
             const std::string& source) {
  try {
    const auto ks = parse_k_list(ks_text);
    View view = View::kMerged;
    if (source == "attribute-view") view = View::kAttribute;
    else if (source == "relationship-view") view = View::kRelationship;
    else if (source != "merged") throw ConfigError("--source must be attribute-view, relationship-view or merged");
    if (!std::filesystem::exists(matrix_path)) throw ConfigError("matrix file not found: " + matrix_path);
    const auto matrix = load_similarity(matrix_path);
    const auto test = read_index_pairs(test_path);
    if (test.empty()) throw ConfigError("no test pairs in " + test_path);
    std::cout << evaluate(matrix, test, ks, view).to_json() << "\n";
    return kOk;
  } catch (const ConfigError& e) {
    log(e.what());
  } catch (const ShapeError& e) {
    log(e.what());
  } catch (const LookupError& e) {
    log(e.what());
  }
  return kUsage;
}

int cmd_gen(SynthSpec spec, const std::string& config_path, const std::string& output) {
  try {
    if (!config_path.empty()) {
      const auto c = load_config(config_path);
      spec = c.synth;
    }
    spec.validate();
  } catch (const ConfigError& e) {
    log(e.what());
    return kUsage;
  }
  const auto data = generate_synth(spec);
  write_synth(data, output);
  log("wrote " + std::to_string(data.g.rel_triples().size() + data.g2.rel_triples().size()) +
      " relationship and " + std::to_string(data.g.attr_triples().size() + data.g2.attr_triples().size()) +
      " attribute triples to " + output);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kgalign: joint attribute and relationship entity alignment across knowledge graphs"};
  app.require_subcommand(1);

  AlignArgs align;
  auto* align_cmd = app.add_subcommand("align", "Run the bootstrapping alignment pipeline");
  align_cmd->add_option("--config", align.config, "Config file")->required();
  align_cmd->add_option("--merge", align.merge, "Merge strategy: M1, M2 or M3");
  align_cmd->add_option("--views", align.views, "joint, attribute or relationship");
  align_cmd->add_option("--output", align.output, "Output directory");
  align_cmd->add_option("--threads", align.threads, "OpenMP threads for the score kernels (0 = default)");
  align_cmd->add_option("--seed", align.seed, "Root random seed");
  align_cmd->add_option("--max-iterations", align.max_iterations, "Iteration cap");
  align_cmd->add_option("--set", align.sets, "Override a config field: section.key=value");

  SynthSpec spec;
  std::string gen_config, gen_output;
  auto* gen_cmd = app.add_subcommand("gen", "Write a synthetic pair of graphs with ground truth");
  gen_cmd->add_option("--output,-o", gen_output, "Output directory")->required();
  gen_cmd->add_option("--config", gen_config, "Take the [synth] section of a config file");
  gen_cmd->add_option("--n-entities", spec.n_entities);
  gen_cmd->add_option("--n-relations", spec.n_relations);
  gen_cmd->add_option("--n-attributes", spec.n_attributes);
  gen_cmd->add_option("--rel-density", spec.rel_density);
  gen_cmd->add_option("--attr-per-entity", spec.attr_per_entity);
  gen_cmd->add_option("--dictionary-size", spec.dictionary_size);
  gen_cmd->add_option("--drop-prob", spec.drop_prob);
  gen_cmd->add_option("--seed-fraction", spec.seed_fraction);
  gen_cmd->add_option("--shared-label-fraction", spec.shared_label_fraction);
  gen_cmd->add_option("--name-tokens", spec.name_tokens);
  gen_cmd->add_option("--seed", spec.rng_seed);

  std::string matrix_path, test_path, ks = "1,10", source = "merged";
  auto* eval_cmd = app.add_subcommand("eval", "Score a similarity dump against test index pairs");
  eval_cmd->add_option("--matrix", matrix_path, "Similarity dump")->required();
  eval_cmd->add_option("--test", test_path, "Tab-separated row/column index pairs")->required();
  eval_cmd->add_option("--k", ks, "Comma-separated K values");
  eval_cmd->add_option("--source", source, "Label recorded in the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*align_cmd) return cmd_align(align);
    if (*gen_cmd) return cmd_gen(spec, gen_config, gen_output);
    if (*eval_cmd) return cmd_eval(matrix_path, test_path, ks, source);
  } catch (const ConfigError& e) {
    log(e.what());
    return kUsage;
  } catch (const std::exception& e) {
    log(std::string("error: ") + e.what());
    return kRuntime;
  }
  return kUsage;
}
