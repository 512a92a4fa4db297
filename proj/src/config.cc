/* Copyright 2026 The cvd Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "cvd/config.h"

#include <filesystem>
#include <map>
#include <set>

#include <fmt/format.h>

#include "cvd/error.h"
#include "cvd/text.h"

namespace cvd {
namespace {

namespace fs = std::filesystem;

bool ParseBool(std::string_view v, std::string_view key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(ErrorCode::kParseError,
              fmt::format("{}: expected true or false, got '{}'", key, v));
}

std::vector<int> ParseIntList(std::string_view v, std::string_view key) {
  std::vector<int> out;
  for (auto f : Split(v, ',')) out.push_back(int(ParseInt(f, key)));
  return out;
}

std::string Resolve(const std::string& base, std::string_view value) {
  if (value.empty()) return {};
  fs::path p{std::string(value)};
  if (p.is_absolute() || base.empty()) return p.lexically_normal().generic_string();
  return (fs::path(base) / p).lexically_normal().generic_string();
}

ClipLabel ParseRootLabel(std::string_view text) {
  if (text == "real") return ClipLabel::Real();
  if (StartsWith(text, "synthetic:") && text.size() > 10) {
    return ClipLabel::Synthetic(std::string(text.substr(10)));
  }
  throw Error(ErrorCode::kParseError,
              "root label must be 'real' or 'synthetic:<ARCH>', got '" +
                  std::string(text) + "'");
}

std::string FormatIntList(const std::vector<int>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

}  // namespace

std::vector<TrainConfig> RunConfig::Grid(ClassifierKind kind) const {
  std::vector<TrainConfig> grid;
  if (kind == ClassifierKind::kLinear) {
    for (double l2 : linear_l2_grid) {
      TrainConfig c;
      c.kind = kind;
      c.logistic.l2 = l2;
      grid.push_back(c);
    }
    return grid;
  }
  for (int trees : forest_trees_grid) {
    for (int depth : forest_depth_grid) {
      for (int leaf : forest_min_leaf_grid) {
        TrainConfig c;
        c.kind = kind;
        c.forest.n_trees = trees;
        c.forest.max_depth = depth;
        c.forest.min_leaf = leaf;
        grid.push_back(c);
      }
    }
  }
  return grid;
}

std::string RunConfig::StorePath(FeatureFamily family) const {
  return (fs::path(features_dir) / (std::string(ToString(family)) + ".tsv"))
      .generic_string();
}

RunConfig ParseRunConfig(const std::string& text, const std::string& base_dir) {
  RunConfig c;
  std::string work_dir = base_dir;
  std::map<std::string, std::string> paths;
  const auto lines = Split(text, '\n');
  for (size_t n = 0; n < lines.size(); ++n) {
    auto line = lines[n];
    if (const size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kParseError,
                  fmt::format("config line {}: expected key = value", n + 1));
    }
    const std::string key(Trim(line.substr(0, eq)));
    const auto value = Trim(line.substr(eq + 1));
    if (key == "seed") {
      c.seed = uint64_t(ParseInt(value, key));
    } else if (key == "dataset_tag") {
      c.dataset_tag = std::string(value);
    } else if (key == "root") {
      const size_t sp = value.find_first_of(" \t");
      if (sp == std::string_view::npos) {
        throw Error(ErrorCode::kParseError,
                    fmt::format("config line {}: root needs a label and a directory",
                                n + 1));
      }
      c.roots.push_back({Resolve(base_dir, Trim(value.substr(sp))),
                         ParseRootLabel(value.substr(0, sp))});
    } else if (key == "utterance_pattern") {
      c.utterance_pattern = std::string(value);
    } else if (key == "balance_per_arch") {
      c.balance_per_arch = size_t(ParseInt(value, key));
    } else if (key == "balance_allow_short") {
      c.balance_allow_short = ParseBool(value, key);
    } else if (key == "balance_paired") {
      c.balance_paired = ParseBool(value, key);
    } else if (key == "split_mode") {
      if (value != "stratified" && value != "utterance") {
        throw Error(ErrorCode::kParseError,
                    "split_mode must be stratified or utterance");
      }
      c.group_by_utterance = value == "utterance";
    } else if (key == "allow_small_strata") {
      c.allow_small_strata = ParseBool(value, key);
    } else if (key == "work_dir") {
      work_dir = Resolve(base_dir, value);
    } else if (key == "manifest" || key == "laundered_manifest" ||
               key == "laundered_dir" || key == "features_dir" ||
               key == "models_dir" || key == "reports_dir" || key == "embeddings") {
      paths[key] = std::string(value);
    } else if (key == "families") {
      c.families.clear();
      for (auto f : Split(value, ',')) c.families.push_back(ParseFeatureFamily(Trim(f)));
    } else if (key == "encoder_cmd") {
      c.encoder.encode_cmd = std::string(value);
    } else if (key == "decoder_cmd") {
      c.encoder.decode_cmd = std::string(value);
    } else if (key == "workers") {
      c.workers = int(ParseInt(value, key));
      if (c.workers < 1) throw Error(ErrorCode::kParseError, "workers must be >= 1");
    } else if (key == "envelope_cutoff_hz") {
      c.envelope_cutoff_hz = ParseDouble(value, key);
    } else if (key == "select_k") {
      c.select_k = size_t(ParseInt(value, key));
    } else if (key == "decision_threshold") {
      c.decision_threshold = ParseDouble(value, key);
    } else if (key == "linear_l2_grid") {
      c.linear_l2_grid = ParseDoubleList(value, ',', key);
    } else if (key == "forest_trees_grid") {
      c.forest_trees_grid = ParseIntList(value, key);
    } else if (key == "forest_depth_grid") {
      c.forest_depth_grid = ParseIntList(value, key);
    } else if (key == "forest_min_leaf_grid") {
      c.forest_min_leaf_grid = ParseIntList(value, key);
    } else {
      throw Error(ErrorCode::kParseError,
                  fmt::format("config line {}: unknown key '{}'", n + 1, key));
    }
  }
  auto path_or = [&](const char* key, const char* fallback) {
    auto it = paths.find(key);
    if (it != paths.end()) return Resolve(base_dir, it->second);
    if (!*fallback) return std::string();
    return Resolve(work_dir, fallback);
  };
  c.manifest = path_or("manifest", "manifest.tsv");
  c.laundered_manifest = path_or("laundered_manifest", "manifest.laundered.tsv");
  c.laundered_dir = path_or("laundered_dir", "laundered");
  c.features_dir = path_or("features_dir", "features");
  c.models_dir = path_or("models_dir", "models");
  c.reports_dir = path_or("reports_dir", "reports");
  c.embeddings = path_or("embeddings", "");
  return c;
}

RunConfig LoadRunConfig(const std::string& path) {
  const std::string base = fs::path(path).parent_path().generic_string();
  RunConfig c = ParseRunConfig(ReadFile(path), base);
  c.encoder = ApplyEncoderEnv(c.encoder);
  return c;
}

std::string RenderRunConfig(const RunConfig& c) {
  std::string out;
  auto kv = [&](std::string_view k, const std::string& v) {
    out += fmt::format("{} = {}\n", k, v);
  };
  kv("seed", std::to_string(c.seed));
  kv("dataset_tag", c.dataset_tag);
  for (const auto& r : c.roots) {
    kv("root", (r.label.kind == LabelKind::kReal ? std::string("real")
                                                  : "synthetic:" + r.label.architecture) +
                   " " + r.directory);
  }
  kv("utterance_pattern", c.utterance_pattern);
  kv("balance_per_arch", std::to_string(c.balance_per_arch));
  kv("balance_allow_short", c.balance_allow_short ? "true" : "false");
  kv("balance_paired", c.balance_paired ? "true" : "false");
  kv("split_mode", c.group_by_utterance ? "utterance" : "stratified");
  kv("allow_small_strata", c.allow_small_strata ? "true" : "false");
  kv("manifest", c.manifest);
  kv("laundered_manifest", c.laundered_manifest);
  kv("laundered_dir", c.laundered_dir);
  kv("features_dir", c.features_dir);
  kv("models_dir", c.models_dir);
  kv("reports_dir", c.reports_dir);
  kv("embeddings", c.embeddings);
  std::string fams;
  for (size_t i = 0; i < c.families.size(); ++i) {
    fams += (i ? "," : "") + std::string(ToString(c.families[i]));
  }
  kv("families", fams);
  kv("encoder_cmd", c.encoder.encode_cmd);
  kv("decoder_cmd", c.encoder.decode_cmd);
  kv("workers", std::to_string(c.workers));
  kv("envelope_cutoff_hz", FormatDouble(c.envelope_cutoff_hz));
  kv("select_k", std::to_string(c.select_k));
  kv("decision_threshold", FormatDouble(c.decision_threshold));
  kv("linear_l2_grid", JoinDoubles(c.linear_l2_grid));
  kv("forest_trees_grid", FormatIntList(c.forest_trees_grid));
  kv("forest_depth_grid", FormatIntList(c.forest_depth_grid));
  kv("forest_min_leaf_grid", FormatIntList(c.forest_min_leaf_grid));
  return out;
}

void WriteConfigSnapshot(const RunConfig& config, const std::string& output) {
  WriteFile(output + ".config", RenderRunConfig(config));
}

}  // namespace cvd
