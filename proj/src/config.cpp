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

#include "kgalign/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <variant>

#include "kgalign/error.hpp"

namespace kgalign {
namespace {

using Value = std::variant<bool, std::int64_t, std::uint64_t, double, std::string>;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
  out.push_back('"');
  return out;
}

std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

// Parses a scalar; *rest receives whatever follows it on the line.
Value parse_value(std::string_view text, std::string_view* rest, const std::string& where) {
  text = trim(text);
  if (text.empty()) throw ConfigError(where + ": missing value");
  if (text.front() == '"') {
    std::string out;
    std::size_t i = 1;
    for (; i < text.size() && text[i] != '"'; ++i) {
      if (text[i] == '\\' && i + 1 < text.size()) {
        const char c = text[++i];
        out.push_back(c == 'n' ? '\n' : c == 't' ? '\t' : c);
      } else {
        out.push_back(text[i]);
      }
    }
    if (i >= text.size()) throw ConfigError(where + ": unterminated string");
    *rest = text.substr(i + 1);
    return out;
  }
  const auto end = text.find('#');
  std::string_view token = trim(text.substr(0, end));
  *rest = end == std::string_view::npos ? std::string_view{} : text.substr(end);
  if (token == "true") return true;
  if (token == "false") return false;
  if (token == "inf" || token == "+inf") return std::numeric_limits<double>::infinity();
  if (token == "-inf") return -std::numeric_limits<double>::infinity();
  std::int64_t iv = 0;
  auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), iv);
  if (ec == std::errc{} && p == token.data() + token.size()) return iv;
  std::uint64_t uv = 0;
  auto [pu, ecu] = std::from_chars(token.data(), token.data() + token.size(), uv);
  if (ecu == std::errc{} && pu == token.data() + token.size()) return uv;
  double dv = 0.0;
  auto [p2, ec2] = std::from_chars(token.data(), token.data() + token.size(), dv);
  if (ec2 == std::errc{} && p2 == token.data() + token.size()) return dv;
  throw ConfigError(where + ": cannot parse value '" + std::string(token) + "'");
}

std::string type_error(const std::string& key, const char* expected) {
  return key + ": expected " + expected;
}

bool as_bool(const Value& v, const std::string& key) {
  if (auto* b = std::get_if<bool>(&v)) return *b;
  throw ConfigError(type_error(key, "true or false"));
}

std::int64_t as_int(const Value& v, const std::string& key) {
  if (auto* i = std::get_if<std::int64_t>(&v)) return *i;
  throw ConfigError(type_error(key, "an integer"));
}

std::uint64_t as_count(const Value& v, const std::string& key) {
  if (auto* u = std::get_if<std::uint64_t>(&v)) return *u;
  const auto i = as_int(v, key);
  if (i < 0) throw ConfigError(key + ": must not be negative");
  return static_cast<std::uint64_t>(i);
}

double as_real(const Value& v, const std::string& key) {
  if (auto* d = std::get_if<double>(&v)) return *d;
  if (auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  if (auto* u = std::get_if<std::uint64_t>(&v)) return static_cast<double>(*u);
  throw ConfigError(type_error(key, "a number"));
}

std::string as_string(const Value& v, const std::string& key) {
  if (auto* s = std::get_if<std::string>(&v)) return *s;
  throw ConfigError(type_error(key, "a quoted string"));
}

struct Field {
  std::string section;
  std::string key;
  std::function<std::string(const PipelineConfig&)> get;
  std::function<void(PipelineConfig&, const Value&, const std::string&)> set;
};

std::string join_ks(const std::vector<int>& ks) {
  std::string s;
  for (std::size_t i = 0; i < ks.size(); ++i) s += (i ? "," : "") + std::to_string(ks[i]);
  return s;
}

std::vector<int> parse_ks(const std::string& s, const std::string& key) {
  std::vector<int> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, ',')) {
    const auto t = trim(part);
    int k = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), k);
    if (ec != std::errc{} || p != t.data() + t.size() || k < 1)
      throw ConfigError(key + ": expected a comma-separated list of positive integers");
    out.push_back(k);
  }
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

#define KG_FIELD(sec, name, getter, setter)                                                     \
  Field {                                                                                       \
    sec, name, [](const PipelineConfig& c) -> std::string { getter; },                          \
        [](PipelineConfig& c, const Value& v, const std::string& k) { setter; }                 \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      KG_FIELD("data", "rel_triples_1", return quote(c.data.rel_triples_1.string()),
               c.data.rel_triples_1 = as_string(v, k)),
      KG_FIELD("data", "attr_triples_1", return quote(c.data.attr_triples_1.string()),
               c.data.attr_triples_1 = as_string(v, k)),
      KG_FIELD("data", "rel_triples_2", return quote(c.data.rel_triples_2.string()),
               c.data.rel_triples_2 = as_string(v, k)),
      KG_FIELD("data", "attr_triples_2", return quote(c.data.attr_triples_2.string()),
               c.data.attr_triples_2 = as_string(v, k)),
      KG_FIELD("data", "ent_links", return quote(c.data.ent_links.string()),
               c.data.ent_links = as_string(v, k)),
      KG_FIELD("data", "split", return quote(c.data.split), c.data.split = as_string(v, k)),

      KG_FIELD("synth", "enabled", return c.use_synth ? "true" : "false", c.use_synth = as_bool(v, k)),
      KG_FIELD("synth", "n_entities", return std::to_string(c.synth.n_entities),
               c.synth.n_entities = as_count(v, k)),
      KG_FIELD("synth", "n_relations", return std::to_string(c.synth.n_relations),
               c.synth.n_relations = as_count(v, k)),
      KG_FIELD("synth", "n_attributes", return std::to_string(c.synth.n_attributes),
               c.synth.n_attributes = as_count(v, k)),
      KG_FIELD("synth", "rel_density", return format_real(c.synth.rel_density),
               c.synth.rel_density = as_real(v, k)),
      KG_FIELD("synth", "attr_per_entity", return format_real(c.synth.attr_per_entity),
               c.synth.attr_per_entity = as_real(v, k)),
      KG_FIELD("synth", "dictionary_size", return std::to_string(c.synth.dictionary_size),
               c.synth.dictionary_size = as_count(v, k)),
      KG_FIELD("synth", "drop_prob", return format_real(c.synth.drop_prob),
               c.synth.drop_prob = as_real(v, k)),
      KG_FIELD("synth", "seed_fraction", return format_real(c.synth.seed_fraction),
               c.synth.seed_fraction = as_real(v, k)),
      KG_FIELD("synth", "rng_seed", return std::to_string(c.synth.rng_seed),
               c.synth.rng_seed = as_count(v, k)),
      KG_FIELD("synth", "shared_label_fraction", return format_real(c.synth.shared_label_fraction),
               c.synth.shared_label_fraction = as_real(v, k)),
      KG_FIELD("synth", "name_tokens", return std::to_string(c.synth.name_tokens),
               c.synth.name_tokens = as_count(v, k)),

      KG_FIELD("attribute", "value_dim", return std::to_string(c.pipeline.value_dim),
               c.pipeline.value_dim = as_count(v, k)),
      KG_FIELD("attribute", "max_slots", return std::to_string(c.pipeline.max_slots),
               c.pipeline.max_slots = as_count(v, k)),
      KG_FIELD("attribute", "min_count", return std::to_string(c.pipeline.min_count),
               c.pipeline.min_count = as_count(v, k)),
      KG_FIELD("attribute", "tau_v", return format_real(c.pipeline.thresholds.tau_v),
               c.pipeline.thresholds.tau_v = as_real(v, k)),
      KG_FIELD("attribute", "translator_iterations",
               return std::to_string(c.pipeline.translator_iterations),
               c.pipeline.translator_iterations = static_cast<int>(as_int(v, k))),
      KG_FIELD("attribute", "iterative_translator",
               return c.pipeline.iterative_translator ? "true" : "false",
               c.pipeline.iterative_translator = as_bool(v, k)),

      KG_FIELD("relation", "dim", return std::to_string(c.pipeline.transe.dim),
               c.pipeline.transe.dim = as_count(v, k)),
      KG_FIELD("relation", "margin", return format_real(c.pipeline.transe.margin),
               c.pipeline.transe.margin = as_real(v, k)),
      KG_FIELD("relation", "learning_rate", return format_real(c.pipeline.transe.learning_rate),
               c.pipeline.transe.learning_rate = as_real(v, k)),
      KG_FIELD("relation", "epochs", return std::to_string(c.pipeline.transe.epochs),
               c.pipeline.transe.epochs = static_cast<int>(as_int(v, k))),
      KG_FIELD("relation", "negatives", return std::to_string(c.pipeline.transe.negatives_per_positive),
               c.pipeline.transe.negatives_per_positive = static_cast<int>(as_int(v, k))),
      KG_FIELD("relation", "tau_r", return format_real(c.pipeline.thresholds.tau_r),
               c.pipeline.thresholds.tau_r = as_real(v, k)),

      KG_FIELD("joint", "merge", return quote(merge_mode_name(c.pipeline.merge)),
               c.pipeline.merge = parse_merge_mode(as_string(v, k))),
      KG_FIELD("joint", "views", return quote(view_mode_name(c.pipeline.views)),
               c.pipeline.views = parse_view_mode(as_string(v, k))),
      KG_FIELD("joint", "max_iterations", return std::to_string(c.pipeline.max_iterations),
               c.pipeline.max_iterations = static_cast<int>(as_int(v, k))),
      KG_FIELD("joint", "tau_mode",
               return quote(c.pipeline.thresholds.tune_on_validation ? "tuned" : "fixed"), {
                 const auto s = as_string(v, k);
                 if (s != "tuned" && s != "fixed") throw ConfigError(k + ": expected \"tuned\" or \"fixed\"");
                 c.pipeline.thresholds.tune_on_validation = s == "tuned";
               }),
      KG_FIELD("joint", "tau_e_attr", return format_real(c.pipeline.thresholds.tau_e_attr),
               c.pipeline.thresholds.tau_e_attr = as_real(v, k)),
      KG_FIELD("joint", "tau_e_rel", return format_real(c.pipeline.thresholds.tau_e_rel),
               c.pipeline.thresholds.tau_e_rel = as_real(v, k)),

      KG_FIELD("run", "seed", return std::to_string(c.seed), c.seed = as_count(v, k)),
      KG_FIELD("run", "threads", return std::to_string(c.pipeline.kernels.threads),
               c.pipeline.kernels.threads = static_cast<int>(as_int(v, k))),
      KG_FIELD("run", "block_rows", return std::to_string(c.pipeline.kernels.block_rows),
               c.pipeline.kernels.block_rows = as_count(v, k)),
      KG_FIELD("run", "output_dir", return quote(c.output_dir.string()), c.output_dir = as_string(v, k)),
      KG_FIELD("run", "eval_ks", return quote(join_ks(c.eval_ks)), c.eval_ks = parse_ks(as_string(v, k), k)),
  };
  return table;
}

#undef KG_FIELD

const Field& find_field(std::string_view section, std::string_view key, const std::string& where) {
  for (const auto& f : fields())
    if (f.section == section && f.key == key) return f;
  throw ConfigError(where + ": unknown key '" + std::string(section) + "." + std::string(key) + "'");
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

MergeMode parse_merge_mode(std::string_view s) {
  if (s == "M1" || s == "m1" || s == "standard") return MergeMode::kStandard;
  if (s == "M2" || s == "m2" || s == "score") return MergeMode::kScore;
  if (s == "M3" || s == "m3" || s == "rank") return MergeMode::kRank;
  throw ConfigError("unknown merge mode '" + std::string(s) + "' (expected M1, M2 or M3)");
}

std::string_view merge_mode_name(MergeMode m) {
  switch (m) {
    case MergeMode::kStandard: return "M1";
    case MergeMode::kScore: return "M2";
    case MergeMode::kRank: return "M3";
  }
  return "M3";
}

ViewMode parse_view_mode(std::string_view s) {
  if (s == "joint") return ViewMode::kJoint;
  if (s == "attribute") return ViewMode::kAttributeOnly;
  if (s == "relationship") return ViewMode::kRelationshipOnly;
  throw ConfigError("unknown view mode '" + std::string(s) + "' (expected joint, attribute or relationship)");
}

std::string_view view_mode_name(ViewMode v) {
  switch (v) {
    case ViewMode::kJoint: return "joint";
    case ViewMode::kAttributeOnly: return "attribute";
    case ViewMode::kRelationshipOnly: return "relationship";
  }
  return "joint";
}

bool operator==(const PipelineConfig& a, const PipelineConfig& b) {
  for (const auto& f : fields())
    if (f.get(a) != f.get(b)) return false;
  return true;
}

std::array<int, 3> PipelineConfig::split_proportions() const {
  std::array<int, 3> out{};
  std::stringstream in(data.split);
  std::string part;
  std::size_t i = 0;
  while (std::getline(in, part, ':')) {
    if (i == 3) throw ConfigError("data.split: expected three ':'-separated integers");
    const auto t = trim(part);
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out[i]);
    if (ec != std::errc{} || p != t.data() + t.size() || out[i] < 0)
      throw ConfigError("data.split: expected three ':'-separated integers");
    ++i;
  }
  if (i != 3 || out[0] + out[1] + out[2] <= 0 || out[0] == 0 || out[1] == 0)
    throw ConfigError("data.split: expected three ':'-separated integers with positive train and valid");
  return out;
}

void PipelineConfig::validate() const {
  if (use_synth) synth.validate();
  if (!use_synth) {
    if (data.rel_triples_1.empty() || data.attr_triples_1.empty() || data.rel_triples_2.empty() ||
        data.attr_triples_2.empty() || data.ent_links.empty())
      throw ConfigError("[data] needs all five input files unless [synth] enabled = true");
    split_proportions();
  }
  pipeline.transe.validate();
  if (pipeline.value_dim == 0) throw ConfigError("attribute.value_dim must be positive");
  if (pipeline.max_slots == 0) throw ConfigError("attribute.max_slots must be positive");
  if (pipeline.translator_iterations < 1) throw ConfigError("attribute.translator_iterations must be positive");
  if (pipeline.max_iterations < 1) throw ConfigError("joint.max_iterations must be positive");
  if (pipeline.kernels.block_rows == 0) throw ConfigError("run.block_rows must be positive");
  if (pipeline.kernels.threads < 0) throw ConfigError("run.threads must not be negative");
  for (double t : {pipeline.thresholds.tau_v, pipeline.thresholds.tau_r, pipeline.thresholds.tau_e_attr,
                   pipeline.thresholds.tau_e_rel})
    if (std::isnan(t)) throw ConfigError("thresholds must be numbers");
  if (eval_ks.empty()) throw ConfigError("run.eval_ks must not be empty");
}

void PipelineConfig::check_inputs() const {
  if (use_synth) return;
  for (const auto* p : {&data.rel_triples_1, &data.attr_triples_1, &data.rel_triples_2,
                        &data.attr_triples_2, &data.ent_links})
    if (!std::filesystem::exists(*p)) throw ConfigError("input file not found: " + p->string());
}

std::uint64_t PipelineConfig::split_seed() const { return splitmix(seed ^ 0x5011ULL); }

PipelineOptions PipelineConfig::resolved_options() const {
  PipelineOptions o = pipeline;
  o.word_vector_seed = splitmix(seed ^ 0x3a7dULL);
  o.transe.rng_seed = splitmix(seed ^ 0x7e11ULL);
  return o;
}

PipelineConfig parse_config(std::string_view text, std::string_view origin) {
  PipelineConfig config;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::string where = std::string(origin) + ":" + std::to_string(line_no);
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      const auto close = line.find(']');
      if (close == std::string_view::npos) throw ConfigError(where + ": unterminated section header");
      const auto after = trim(line.substr(close + 1));
      if (!after.empty() && after.front() != '#') throw ConfigError(where + ": text after section header");
      section = std::string(trim(line.substr(1, close - 1)));
      bool known = false;
      for (const auto& f : fields()) known = known || f.section == section;
      if (!known) throw ConfigError(where + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected key = value");
    if (section.empty()) throw ConfigError(where + ": key outside of a section");
    const auto key = trim(line.substr(0, eq));
    const Field& field = find_field(section, key, where);
    std::string_view rest;
    const Value value = parse_value(line.substr(eq + 1), &rest, where);
    rest = trim(rest);
    if (!rest.empty() && rest.front() != '#') throw ConfigError(where + ": trailing text after value");
    field.set(config, value, section + "." + std::string(key));
  }
  return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  PipelineConfig config = parse_config(buf.str(), path.string());
  const auto base = path.parent_path();
  for (auto* p : {&config.data.rel_triples_1, &config.data.attr_triples_1, &config.data.rel_triples_2,
                  &config.data.attr_triples_2, &config.data.ent_links, &config.output_dir})
    if (!p->empty() && p->is_relative()) *p = base / *p;
  return config;
}

std::string serialize_config(const PipelineConfig& config) {
  std::string out;
  std::string section;
  for (const auto& f : fields()) {
    if (f.section != section) {
      if (!section.empty()) out += "\n";
      section = f.section;
      out += "[" + section + "]\n";
    }
    out += f.key + " = " + f.get(config) + "\n";
  }
  return out;
}

void apply_override(PipelineConfig& config, std::string_view dotted_key, std::string_view value) {
  const auto dot = dotted_key.find('.');
  const std::string where = "override " + std::string(dotted_key);
  if (dot == std::string_view::npos) throw ConfigError(where + ": expected section.key");
  const Field& field = find_field(dotted_key.substr(0, dot), dotted_key.substr(dot + 1), where);
  const std::string key(dotted_key);
  Value parsed;
  try {
    std::string_view rest;
    parsed = parse_value(value, &rest, where);
    if (!trim(rest).empty()) parsed = std::string(value);
  } catch (const ConfigError&) {
    parsed = std::string(value);
  }
  try {
    field.set(config, parsed, key);
  } catch (const ConfigError&) {
    // A bare word that happened to parse as a number or bool, for a string field.
    if (std::holds_alternative<std::string>(parsed)) throw;
    field.set(config, Value{std::string(trim(value))}, key);
  }
}

}  // namespace kgalign
