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

#include "cvd/dataset.h"

#include <algorithm>
#include <filesystem>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "cvd/error.h"
#include "cvd/random.h"
#include "cvd/text.h"

namespace cvd {
namespace {

namespace fs = std::filesystem;

constexpr const char* kManifestHeader = "#manifest-v1";

fs::path CommonBase(const std::vector<fs::path>& dirs) {
  fs::path base = dirs.front();
  for (size_t i = 1; i < dirs.size(); ++i) {
    fs::path common;
    auto a = base.begin();
    auto b = dirs[i].begin();
    for (; a != base.end() && b != dirs[i].end() && *a == *b; ++a, ++b) {
      common /= *a;
    }
    base = common;
  }
  return base;
}

std::string UtteranceId(const std::regex& pattern, const std::string& stem) {
  std::smatch m;
  if (!std::regex_search(stem, m, pattern)) return stem;
  const std::string id = m.size() > 1 ? m[1].str() : m[0].str();
  return id.empty() ? stem : id;
}

void CheckField(std::string_view value, std::string_view what) {
  if (value.find_first_of("\t\r\n") != std::string_view::npos) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("{} '{}' contains a tab or newline", what, value));
  }
}

// Stratum key: real first, then synthetic architectures in sorted order.
std::string StratumKey(const ClipLabel& label) {
  return label.kind == LabelKind::kReal ? "0" : "1:" + label.architecture;
}

std::vector<size_t> ShuffledIndices(std::vector<size_t> idx, uint64_t seed,
                                    std::string_view salt) {
  Rng rng(DeriveSeed(seed, salt));
  rng.Shuffle(idx);
  return idx;
}

size_t RoundedShare(size_t n, size_t tenths) { return (tenths * n + 5) / 10; }

DataSplit SplitForPosition(size_t pos, size_t total) {
  if (pos < RoundedShare(total, 6)) return DataSplit::kTrain;
  if (pos < RoundedShare(total, 8)) return DataSplit::kVal;
  return DataSplit::kTest;
}

}  // namespace

std::string_view ToString(DataSplit split) {
  switch (split) {
    case DataSplit::kUnassigned: return "-";
    case DataSplit::kTrain: return "train";
    case DataSplit::kVal: return "val";
    case DataSplit::kTest: return "test";
  }
  return "-";
}

DataSplit ParseSplit(std::string_view text) {
  if (text == "-") return DataSplit::kUnassigned;
  if (text == "train") return DataSplit::kTrain;
  if (text == "val") return DataSplit::kVal;
  if (text == "test") return DataSplit::kTest;
  throw Error(ErrorCode::kParseError, "unknown split '" + std::string(text) + "'");
}

std::string FormatLaundering(const LaunderingSpec& spec) {
  switch (spec.kind) {
    case LaunderKind::kNone: return "none";
    case LaunderKind::kNoise: return "noise:" + FormatDouble(spec.snr_db);
    case LaunderKind::kTranscode:
      return "transcode:" + std::to_string(spec.bitrate_kbps);
    case LaunderKind::kBoth:
      return "both:" + FormatDouble(spec.snr_db) + ":" +
             std::to_string(spec.bitrate_kbps);
  }
  return "none";
}

LaunderingSpec ParseLaundering(std::string_view text) {
  const auto parts = Split(text, ':');
  const auto kind = parts[0];
  if (kind == "none" && parts.size() == 1) return LaunderingSpec::None();
  if (kind == "noise" && parts.size() == 2) {
    return LaunderingSpec::Noise(ParseDouble(parts[1], "snr_db"));
  }
  if (kind == "transcode" && parts.size() == 2) {
    return LaunderingSpec::Transcode(int(ParseInt(parts[1], "bitrate")));
  }
  if (kind == "both" && parts.size() == 3) {
    return LaunderingSpec::Both(ParseDouble(parts[1], "snr_db"),
                                int(ParseInt(parts[2], "bitrate")));
  }
  throw Error(ErrorCode::kParseError,
              "bad laundering spec '" + std::string(text) + "'");
}

std::vector<std::string> DatasetManifest::ClipIds() const {
  std::vector<std::string> ids;
  ids.reserve(entries.size());
  for (const auto& e : entries) ids.push_back(e.clip_id);
  return ids;
}

DatasetManifest BuildManifest(const std::vector<DatasetRoot>& roots,
                              const std::string& utterance_pattern) {
  if (roots.empty()) throw Error(ErrorCode::kInvalidArgument, "no dataset roots");
  const std::regex pattern(utterance_pattern);
  std::vector<fs::path> absolute;
  for (const auto& r : roots) {
    absolute.push_back(fs::absolute(r.directory).lexically_normal());
    if (!absolute.back().has_filename()) {
      absolute.back() = absolute.back().parent_path();
    }
  }
  const fs::path base = CommonBase(absolute);

  DatasetManifest m;
  for (size_t r = 0; r < roots.size(); ++r) {
    const fs::path dir(roots[r].directory);
    if (!fs::is_directory(dir)) {
      throw Error(ErrorCode::kEmptyDirectory,
                  roots[r].directory + " is not a directory");
    }
    size_t found = 0;
    for (const auto& it : fs::recursive_directory_iterator(dir)) {
      if (!it.is_regular_file()) continue;
      std::string ext = it.path().extension().string();
      std::transform(ext.begin(), ext.end(), ext.begin(),
                     [](unsigned char c) { return char(std::tolower(c)); });
      if (ext != ".wav") continue;
      ++found;
      const fs::path abs = fs::absolute(it.path()).lexically_normal();
      fs::path rel = abs.lexically_relative(base);
      rel.replace_extension();
      ManifestEntry e;
      e.clip_id = rel.generic_string();
      e.path = it.path().lexically_normal().generic_string();
      e.label = roots[r].label;
      e.utterance_id = UtteranceId(pattern, it.path().stem().string());
      CheckField(e.clip_id, "clip id");
      CheckField(e.path, "path");
      m.entries.push_back(std::move(e));
    }
    if (found == 0) {
      throw Error(ErrorCode::kEmptyDirectory,
                  "no .wav files under " + roots[r].directory);
    }
  }
  std::sort(m.entries.begin(), m.entries.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) {
              return a.path < b.path;
            });
  std::set<std::string> seen;
  for (const auto& e : m.entries) {
    if (!seen.insert(e.clip_id).second) {
      throw Error(ErrorCode::kDuplicateClipId, "duplicate clip id " + e.clip_id);
    }
  }
  return m;
}

DatasetManifest BalanceArchitectures(const DatasetManifest& manifest,
                                     size_t target_per_arch, uint64_t seed,
                                     bool allow_short) {
  std::map<std::string, std::vector<size_t>> by_arch;
  for (size_t i = 0; i < manifest.entries.size(); ++i) {
    const auto& l = manifest.entries[i].label;
    if (l.kind == LabelKind::kSynthetic) by_arch[l.architecture].push_back(i);
  }
  std::vector<bool> keep(manifest.entries.size(), true);
  for (const auto& [arch, idx] : by_arch) {
    if (idx.size() < target_per_arch && !allow_short) {
      throw Error(ErrorCode::kInsufficientClips,
                  fmt::format("architecture {} has {} clips, {} requested", arch,
                              idx.size(), target_per_arch));
    }
    if (idx.size() <= target_per_arch) continue;
    const auto order = ShuffledIndices(idx, seed, "balance-arch:" + arch);
    for (size_t k = target_per_arch; k < order.size(); ++k) keep[order[k]] = false;
  }
  DatasetManifest out = manifest;
  out.entries.clear();
  for (size_t i = 0; i < manifest.entries.size(); ++i) {
    if (keep[i]) out.entries.push_back(manifest.entries[i]);
  }
  return out;
}

DatasetManifest BalancePairedUtterances(const DatasetManifest& manifest,
                                        uint64_t seed) {
  struct Sides {
    std::vector<size_t> real, synthetic;
  };
  std::map<std::string, Sides> by_utt;
  for (size_t i = 0; i < manifest.entries.size(); ++i) {
    auto& s = by_utt[manifest.entries[i].utterance_id];
    (manifest.entries[i].label.kind == LabelKind::kReal ? s.real : s.synthetic)
        .push_back(i);
  }
  std::vector<bool> keep(manifest.entries.size(), false);
  size_t paired = 0;
  for (const auto& [utt, sides] : by_utt) {
    const size_t n = std::min(sides.real.size(), sides.synthetic.size());
    if (n == 0) continue;
    ++paired;
    for (const auto* side : {&sides.real, &sides.synthetic}) {
      const auto order = side->size() > n
                             ? ShuffledIndices(*side, seed, "pair:" + utt)
                             : *side;
      for (size_t k = 0; k < n; ++k) keep[order[k]] = true;
    }
  }
  if (paired == 0) {
    throw Error(ErrorCode::kNoPairedUtterances,
                "no utterance has both a real and a synthetic rendition");
  }
  DatasetManifest out = manifest;
  out.entries.clear();
  for (size_t i = 0; i < manifest.entries.size(); ++i) {
    if (keep[i]) out.entries.push_back(manifest.entries[i]);
  }
  return out;
}

DatasetManifest SplitDataset(const DatasetManifest& manifest, uint64_t seed,
                             const SplitOptions& options) {
  DatasetManifest out = manifest;
  out.seed = seed;
  auto& entries = out.entries;
  if (entries.empty()) throw Error(ErrorCode::kInsufficientClips, "empty manifest");

  if (options.group_by_utterance) {
    std::map<std::string, std::vector<size_t>> groups;
    for (size_t i = 0; i < entries.size(); ++i) {
      groups[entries[i].utterance_id].push_back(i);
    }
    if (groups.size() < 5 && !options.allow_small_strata) {
      throw Error(ErrorCode::kStratumTooSmall,
                  fmt::format("only {} utterances to split", groups.size()));
    }
    std::vector<std::string> keys;
    for (const auto& [k, v] : groups) keys.push_back(k);
    Rng rng(DeriveSeed(seed, "split-utterances"));
    rng.Shuffle(keys);
    size_t before = 0;
    for (const auto& k : keys) {
      const DataSplit s = SplitForPosition(before, entries.size());
      for (size_t i : groups[k]) entries[i].split = s;
      before += groups[k].size();
    }
    return out;
  }

  // kind -> stratum key -> entry indices
  std::map<LabelKind, std::map<std::string, std::vector<size_t>>> strata;
  for (size_t i = 0; i < entries.size(); ++i) {
    strata[entries[i].label.kind][StratumKey(entries[i].label)].push_back(i);
  }
  for (auto& [kind, by_key] : strata) {
    for (const auto& [key, idx] : by_key) {
      if (idx.size() < 5 && !options.allow_small_strata) {
        throw Error(ErrorCode::kStratumTooSmall,
                    fmt::format("stratum {} has {} entries", key, idx.size()));
      }
    }
    size_t before = 0;
    for (const auto& [key, idx] : by_key) {
      const auto order = ShuffledIndices(idx, seed, "split:" + key);
      // Shares come from the label's cumulative boundaries so label totals
      // are rounded once, not once per stratum.
      const size_t after = before + order.size();
      const size_t n_train = RoundedShare(after, 6) - RoundedShare(before, 6);
      const size_t n_head = std::max(
          n_train, RoundedShare(after, 8) - RoundedShare(before, 8));
      for (size_t k = 0; k < order.size(); ++k) {
        entries[order[k]].split = k < n_train  ? DataSplit::kTrain
                                  : k < n_head ? DataSplit::kVal
                                               : DataSplit::kTest;
      }
      before = after;
    }
  }
  return out;
}

std::string SerializeManifest(const DatasetManifest& m) {
  std::ostringstream out;
  out << kManifestHeader << " seed=" << m.seed << "\n";
  for (const auto& p : m.provenance) {
    CheckField(p, "provenance");
    out << "#provenance " << p << "\n";
  }
  for (const auto& e : m.entries) {
    CheckField(e.clip_id, "clip id");
    CheckField(e.path, "path");
    CheckField(e.utterance_id, "utterance id");
    CheckField(e.label.architecture, "architecture");
    out << e.clip_id << '\t' << e.path << '\t'
        << (e.label.kind == LabelKind::kReal ? "real" : "synthetic") << '\t'
        << (e.label.architecture.empty() ? "-" : e.label.architecture) << '\t'
        << e.utterance_id << '\t' << ToString(e.split) << '\t'
        << FormatLaundering(e.laundering) << "\n";
  }
  return out.str();
}

DatasetManifest ParseManifest(const std::string& text) {
  DatasetManifest m;
  const auto lines = Split(text, '\n');
  bool header = false;
  std::set<std::string> seen;
  for (size_t n = 0; n < lines.size(); ++n) {
    std::string_view line = lines[n];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header) {
      const std::string prefix = std::string(kManifestHeader) + " seed=";
      if (!StartsWith(line, prefix)) {
        throw Error(ErrorCode::kSchemaMismatch, "missing #manifest-v1 header");
      }
      m.seed = uint64_t(std::stoull(std::string(line.substr(prefix.size()))));
      header = true;
      continue;
    }
    if (StartsWith(line, "#provenance ")) {
      m.provenance.emplace_back(line.substr(12));
      continue;
    }
    if (line.front() == '#') continue;
    const auto f = Split(line, '\t');
    if (f.size() != 7) {
      throw Error(ErrorCode::kParseError,
                  fmt::format("manifest line {}: expected 7 fields, got {}", n + 1,
                              f.size()));
    }
    ManifestEntry e;
    e.clip_id = std::string(f[0]);
    e.path = std::string(f[1]);
    if (f[2] == "real") {
      if (f[3] != "-") {
        throw Error(ErrorCode::kParseError,
                    fmt::format("manifest line {}: real clip with architecture", n + 1));
      }
      e.label = ClipLabel::Real();
    } else if (f[2] == "synthetic") {
      if (f[3] == "-") {
        throw Error(ErrorCode::kParseError,
                    fmt::format("manifest line {}: synthetic clip without architecture", n + 1));
      }
      e.label = ClipLabel::Synthetic(std::string(f[3]));
    } else {
      throw Error(ErrorCode::kParseError,
                  fmt::format("manifest line {}: bad label '{}'", n + 1, f[2]));
    }
    e.utterance_id = std::string(f[4]);
    e.split = ParseSplit(f[5]);
    e.laundering = ParseLaundering(f[6]);
    if (!seen.insert(e.clip_id).second) {
      throw Error(ErrorCode::kDuplicateClipId, "duplicate clip id " + e.clip_id);
    }
    m.entries.push_back(std::move(e));
  }
  if (!header) throw Error(ErrorCode::kSchemaMismatch, "missing #manifest-v1 header");
  return m;
}

void SaveManifest(const std::string& path, const DatasetManifest& manifest) {
  WriteFile(path, SerializeManifest(manifest));
}

DatasetManifest LoadManifest(const std::string& path) {
  return ParseManifest(ReadFile(path));
}

}  // namespace cvd
