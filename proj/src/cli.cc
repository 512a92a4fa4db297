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

#include "cvd/cli.h"

#include <filesystem>
#include <map>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cvd/audio.h"
#include "cvd/config.h"
#include "cvd/dataset.h"
#include "cvd/embeddings.h"
#include "cvd/error.h"
#include "cvd/evaluate.h"
#include "cvd/feature_store.h"
#include "cvd/launder.h"
#include "cvd/model.h"
#include "cvd/parallel.h"
#include "cvd/perceptual.h"
#include "cvd/spectral.h"
#include "cvd/text.h"

namespace cvd {
namespace {

namespace fs = std::filesystem;

struct Io {
  std::ostream& out;
  std::ostream& err;
};

std::string SplitSummary(const DatasetManifest& m) {
  std::map<std::string, std::map<DataSplit, size_t>> counts;
  for (const auto& e : m.entries) {
    const std::string key = e.label.kind == LabelKind::kReal
                                ? "real"
                                : "synthetic:" + e.label.architecture;
    counts[key][e.split]++;
  }
  std::string out;
  for (const auto& [key, by_split] : counts) {
    auto get = [&](DataSplit s) {
      auto it = by_split.find(s);
      return it == by_split.end() ? size_t(0) : it->second;
    };
    out += fmt::format("  {:<24} train={} val={} test={}\n", key, get(DataSplit::kTrain),
                       get(DataSplit::kVal), get(DataSplit::kTest));
  }
  return out;
}

AudioClip LoadCanonical(const ManifestEntry& e) {
  AudioClip raw = ReadWavFile(e.path);
  raw.clip_id = e.clip_id;
  raw.label = e.label;
  return Canonicalize(raw).clip;
}

int CmdIngest(const RunConfig& cfg, Io io) {
  if (cfg.roots.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "config has no root entries");
  }
  DatasetManifest m = BuildManifest(cfg.roots, cfg.utterance_pattern);
  m.provenance.push_back(fmt::format("scanned {} roots, {} clips", cfg.roots.size(),
                                     m.entries.size()));
  if (cfg.balance_per_arch > 0) {
    m = BalanceArchitectures(m, cfg.balance_per_arch, cfg.seed,
                             cfg.balance_allow_short);
    m.provenance.push_back(fmt::format("balanced architectures to {} clips",
                                       cfg.balance_per_arch));
  }
  if (cfg.balance_paired) {
    m = BalancePairedUtterances(m, cfg.seed);
    m.provenance.push_back("paired real and synthetic utterances");
  }
  m = SplitDataset(m, cfg.seed, {cfg.group_by_utterance, cfg.allow_small_strata});
  m.provenance.push_back(fmt::format(
      "split 60/20/20 {}", cfg.group_by_utterance ? "by utterance" : "stratified"));
  SaveManifest(cfg.manifest, m);
  WriteConfigSnapshot(cfg, cfg.manifest);
  io.out << fmt::format("wrote {} ({} clips)\n", cfg.manifest, m.entries.size())
         << SplitSummary(m);
  return kExitOk;
}

int CmdLaunder(const RunConfig& cfg, const std::string& manifest_path, Io io) {
  DatasetManifest m = AssignLaundering(LoadManifest(manifest_path), cfg.seed);
  const size_t n = m.entries.size();
  std::vector<size_t> clipped(n, 0);
  std::vector<std::string> out_paths(n);
  ParallelFor(n, cfg.workers, [&](size_t i) {
    const auto& e = m.entries[i];
    const AudioClip clip = LoadCanonical(e);
    NoiseResult r = LaunderClip(clip, e.laundering, LaunderSeed(cfg.seed, e.clip_id),
                                cfg.encoder);
    clipped[i] = r.clipped;
    const AudioClip renorm = NormalizeAmplitude(r.clip).clip;
    out_paths[i] =
        (fs::path(cfg.laundered_dir) / (e.clip_id + ".wav")).lexically_normal().generic_string();
    WriteWavFile(out_paths[i], renorm, SampleFormat::kFloat32);
  });
  std::map<LaunderKind, size_t> per_kind;
  size_t total_clipped = 0;
  for (size_t i = 0; i < n; ++i) {
    m.entries[i].path = out_paths[i];
    per_kind[m.entries[i].laundering.kind]++;
    if (clipped[i]) {
      io.err << fmt::format("warning: {} samples clipped in {}\n", clipped[i],
                            m.entries[i].clip_id);
      total_clipped += clipped[i];
    }
  }
  m.provenance.push_back(fmt::format("laundered from {}", manifest_path));
  SaveManifest(cfg.laundered_manifest, m);
  WriteConfigSnapshot(cfg, cfg.laundered_manifest);
  io.out << fmt::format(
      "wrote {} ({} clips: none={} noise={} transcode={} both={}, {} samples "
      "clipped)\n",
      cfg.laundered_manifest, n, per_kind[LaunderKind::kNone],
      per_kind[LaunderKind::kNoise], per_kind[LaunderKind::kTranscode],
      per_kind[LaunderKind::kBoth], total_clipped);
  return kExitOk;
}

int CmdFeaturize(const RunConfig& cfg, const std::string& manifest_path,
                 FeatureFamily family, std::string out_path,
                 std::string embeddings_path, Io io) {
  const DatasetManifest m = LoadManifest(manifest_path);
  if (out_path.empty()) out_path = cfg.StorePath(family);
  FeatureStore store(family, FamilySchema(family));
  const size_t n = m.entries.size();
  std::vector<std::vector<double>> rows(n);
  if (family == FeatureFamily::kLearned) {
    if (embeddings_path.empty()) embeddings_path = cfg.embeddings;
    if (embeddings_path.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "learned family needs an embeddings file");
    }
    const EmbeddingSet set = LoadEmbeddings(embeddings_path, m);
    if (set.extras) {
      io.err << fmt::format("warning: {} embeddings not in the manifest were ignored\n",
                            set.extras);
    }
    for (size_t i = 0; i < n; ++i) {
      rows[i] = EmbeddingFeatureVector(set.embeddings.at(m.entries[i].clip_id)).values;
    }
  } else {
    const PerceptualOptions opts{cfg.envelope_cutoff_hz};
    ParallelFor(n, cfg.workers, [&](size_t i) {
      const AudioClip clip = LoadCanonical(m.entries[i]);
      if (family == FeatureFamily::kPerceptual) {
        const auto a = ExtractPerceptualFeatures(clip, opts).ToArray();
        rows[i].assign(a.begin(), a.end());
      } else {
        rows[i] = ExtractSpectralFeatures(clip).values;
      }
    });
  }
  for (size_t i = 0; i < n; ++i) store.Add(m.entries[i].clip_id, std::move(rows[i]));
  store.Save(out_path);
  WriteConfigSnapshot(cfg, out_path);
  io.out << fmt::format("wrote {} ({} clips x {} {} features)\n", out_path,
                        store.size(), store.dim(), ToString(family));
  return kExitOk;
}

FeatureStore LoadStore(const std::string& path, FeatureFamily family) {
  FeatureStore store = FeatureStore::Load(path, FamilySchema(family));
  if (store.family() != family) {
    throw Error(ErrorCode::kSchemaMismatch,
                fmt::format("{} holds {} features, expected {}", path,
                            ToString(store.family()), ToString(family)));
  }
  return store;
}

LabeledData Gather(const DatasetManifest& m, const FeatureStore& store, DataSplit split,
                   std::span<const std::string> classes, TaskKind task) {
  LabeledData d;
  std::vector<const std::vector<double>*> rows;
  for (const auto& e : m.entries) {
    if (e.split != split) continue;
    d.clip_ids.push_back(e.clip_id);
    rows.push_back(&store.Get(e.clip_id));
    d.y.push_back(ClassIndex(classes, task, e.label));
  }
  d.x.resize(Eigen::Index(rows.size()), Eigen::Index(store.dim()));
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < store.dim(); ++j) d.x(Eigen::Index(i), Eigen::Index(j)) = (*rows[i])[j];
  }
  return d;
}

int CmdTrain(const RunConfig& cfg, const std::string& manifest_path,
             FeatureFamily family, ClassifierKind kind, TaskKind task,
             std::string store_path, std::string out_path, Io io) {
  const DatasetManifest m = LoadManifest(manifest_path);
  if (store_path.empty()) store_path = cfg.StorePath(family);
  const FeatureStore store = LoadStore(store_path, family);
  std::vector<ClipLabel> labels;
  for (const auto& e : m.entries) labels.push_back(e.label);
  const auto classes = ClassNames(task, labels);
  if (classes.size() < 2) {
    throw Error(ErrorCode::kSingleClassData, "manifest holds a single class");
  }
  const LabeledData train = Gather(m, store, DataSplit::kTrain, classes, task);
  const LabeledData val = Gather(m, store, DataSplit::kVal, classes, task);
  if (train.y.empty() || val.y.empty()) {
    throw Error(ErrorCode::kInsufficientData,
                "training and validation splits must both be non-empty");
  }
  TuneOptions opts;
  opts.select_k = cfg.select_k;
  opts.workers = cfg.workers;
  opts.threshold = cfg.decision_threshold;
  const auto grid = cfg.Grid(kind);
  const TuneResult tuned =
      TuneHyperparameters(train, val, family, task, classes, grid, cfg.seed, opts);

  if (out_path.empty()) {
    out_path = (fs::path(cfg.models_dir) /
                fmt::format("{}-{}-{}.model", ToString(family), ToString(kind),
                            ToString(task)))
                   .generic_string();
  }
  SaveModel(out_path, tuned.model);
  WriteConfigSnapshot(cfg, out_path);
  const char* metric = task == TaskKind::kSingleClass ? "val_eer" : "val_macro_acc";
  std::string log = fmt::format("index\tconfig\tstatus\t{}\n", metric);
  for (size_t i = 0; i < tuned.outcomes.size(); ++i) {
    const auto& o = tuned.outcomes[i];
    log += fmt::format("{}\t{}\t{}\t{}\n", i, o.config.Describe(),
                       o.ok ? (i == tuned.best_index ? "selected" : "ok") : "failed",
                       o.ok ? FormatDouble(o.score) : o.message);
    if (!o.ok) io.err << fmt::format("warning: grid point {} failed: {}\n", i, o.message);
  }
  WriteFile(out_path + ".tuning.tsv", log);
  const auto& best = tuned.outcomes[tuned.best_index];
  io.out << fmt::format("wrote {} ({}, {} = {})\n", out_path, best.config.Describe(),
                        metric, FormatDouble(best.score, 6));
  return kExitOk;
}

int CmdEvaluate(const RunConfig& cfg, const std::string& manifest_path,
                const std::string& model_path, std::string store_path,
                std::string out_path, Io io) {
  const TrainedModel model = LoadModel(model_path);
  const DatasetManifest m = LoadManifest(manifest_path);
  if (store_path.empty()) store_path = cfg.StorePath(model.family);
  const FeatureStore store = LoadStore(store_path, model.family);

  std::vector<std::vector<double>> proba;
  std::vector<int> y;
  std::vector<double> scores;
  std::vector<LabelKind> kinds;
  for (const auto& e : m.entries) {
    if (e.split != DataSplit::kTest) continue;
    proba.push_back(PredictProba(model, store.Get(e.clip_id)));
    y.push_back(ClassIndex(model.classes, model.task, e.label));
    kinds.push_back(e.label.kind);
    scores.push_back(1.0 - proba.back()[0]);
  }
  if (proba.empty()) throw Error(ErrorCode::kInsufficientData, "empty test split");

  EvalReport r;
  r.dataset = cfg.dataset_tag;
  r.model = fs::path(model_path).stem().string();
  r.classifier = model.kind();
  r.task = model.task;
  r.family = model.family;
  const ClassAccuracy acc = ClassAccuracies(proba, y, model.task, cfg.decision_threshold);
  r.synthetic_acc = acc.synthetic_pct;
  r.real_acc = acc.real_pct;
  r.confusion = acc.confusion;
  if (model.task == TaskKind::kSingleClass) r.eer = ComputeEer(scores, kinds).eer_percent;

  if (out_path.empty()) {
    out_path = (fs::path(cfg.reports_dir) / (r.model + ".csv")).generic_string();
  }
  WriteFile(out_path, RenderReportCsv({r}));
  WriteConfigSnapshot(cfg, out_path);
  const std::string table = RenderReportTable({r});
  io.out << table;
  io.out << "confusion (rows true, columns predicted):";
  for (const auto& c : model.classes) io.out << " " << c;
  io.out << "\n";
  for (size_t i = 0; i < r.confusion.size(); ++i) {
    io.out << "  " << (i < model.classes.size() ? model.classes[i] : "?");
    for (int v : r.confusion[i]) io.out << " " << v;
    io.out << "\n";
  }
  io.out << fmt::format("wrote {}\n", out_path);
  return kExitOk;
}

int CmdReport(const RunConfig& cfg, std::vector<std::string> inputs,
              std::string out_path, Io io) {
  if (out_path.empty()) {
    out_path = (fs::path(cfg.reports_dir) / "report.csv").generic_string();
  }
  if (inputs.empty()) {
    if (!fs::is_directory(cfg.reports_dir)) {
      throw Error(ErrorCode::kEmptyDirectory, "no reports directory " + cfg.reports_dir);
    }
    for (const auto& it : fs::directory_iterator(cfg.reports_dir)) {
      if (it.path().extension() == ".csv" &&
          fs::absolute(it.path()).lexically_normal() !=
              fs::absolute(out_path).lexically_normal()) {
        inputs.push_back(it.path().generic_string());
      }
    }
    std::sort(inputs.begin(), inputs.end());
  }
  std::vector<EvalReport> reports;
  for (const auto& in : inputs) {
    auto part = ParseReportCsv(ReadFile(in));
    reports.insert(reports.end(), part.begin(), part.end());
  }
  WriteFile(out_path, RenderReportCsv(reports));
  const std::string table = RenderReportTable(reports);
  fs::path txt = out_path;
  txt.replace_extension(".txt");
  WriteFile(txt.string(), table);
  io.out << table << fmt::format("wrote {} ({} rows)\n", out_path, reports.size());
  return kExitOk;
}

}  // namespace

int RunCli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cloned-voice detection toolkit"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("-c,--config", config_path, "run config file")->required();

  std::string manifest, family_name = "perceptual", classifier_name, task_name,
                        store, output, model_path, embeddings;
  std::vector<std::string> inputs;

  auto* ingest = app.add_subcommand("ingest", "scan roots, balance and split");
  auto* launder = app.add_subcommand("launder", "assign and apply laundering");
  launder->add_option("--manifest", manifest, "input manifest");
  auto* featurize = app.add_subcommand("featurize", "write a feature store");
  featurize->add_option("--family", family_name, "perceptual|spectral|learned")
      ->required();
  featurize->add_option("--manifest", manifest, "input manifest");
  featurize->add_option("--embeddings", embeddings, "embedding exchange file");
  featurize->add_option("-o,--out", output, "store path");
  auto* train = app.add_subcommand("train", "tune and fit a classifier");
  train->add_option("--classifier", classifier_name, "linear|forest")->required();
  train->add_option("--task", task_name, "single|multi")->required();
  train->add_option("--family", family_name, "perceptual|spectral|learned");
  train->add_option("--manifest", manifest, "input manifest");
  train->add_option("--store", store, "feature store");
  train->add_option("-o,--out", output, "model path");
  auto* evaluate = app.add_subcommand("evaluate", "score the test split");
  evaluate->add_option("--model", model_path, "model file")->required();
  evaluate->add_option("--manifest", manifest, "input manifest");
  evaluate->add_option("--store", store, "feature store");
  evaluate->add_option("-o,--out", output, "report CSV path");
  auto* report = app.add_subcommand("report", "merge evaluation CSVs");
  report->add_option("inputs", inputs, "report CSVs (default: reports_dir/*.csv)");
  report->add_option("-o,--out", output, "merged CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitValidation;
  }

  Io io{out, err};
  try {
    const RunConfig cfg = LoadRunConfig(config_path);
    const std::string m = manifest.empty() ? cfg.manifest : manifest;
    if (ingest->parsed()) return CmdIngest(cfg, io);
    if (launder->parsed()) return CmdLaunder(cfg, m, io);
    if (featurize->parsed()) {
      return CmdFeaturize(cfg, m, ParseFeatureFamily(family_name), output,
                          embeddings, io);
    }
    if (train->parsed()) {
      return CmdTrain(cfg, m, ParseFeatureFamily(family_name),
                      ParseClassifierKind(classifier_name), ParseTaskKind(task_name),
                      store, output, io);
    }
    if (evaluate->parsed()) return CmdEvaluate(cfg, m, model_path, store, output, io);
    if (report->parsed()) return CmdReport(cfg, inputs, output, io);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace cvd
