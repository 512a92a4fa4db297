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

#include "cvd/model.h"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "cvd/error.h"
#include "cvd/evaluate.h"
#include "cvd/random.h"
#include "cvd/spectral.h"
#include "cvd/text.h"

namespace cvd {
namespace {

constexpr const char* kModelHeader = "#model-v1";

std::string JoinIndices(std::span<const size_t> v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(v[i]);
  }
  return out;
}

std::string JoinRow(const Eigen::MatrixXd& m, Eigen::Index row) {
  std::vector<double> v(m.cols());
  for (Eigen::Index c = 0; c < m.cols(); ++c) v[c] = m(row, c);
  return JoinDoubles(v);
}

std::string ParamString(const TrainConfig& c) {
  if (c.kind == ClassifierKind::kLinear) {
    return fmt::format("l2={};max_iters={};tol={};multinomial={}",
                       FormatDouble(c.logistic.l2), c.logistic.max_iters,
                       FormatDouble(c.logistic.tol),
                       c.logistic.force_multinomial ? 1 : 0);
  }
  return fmt::format("n_trees={};max_depth={};min_leaf={};max_features={}",
                     c.forest.n_trees, c.forest.max_depth, c.forest.min_leaf,
                     c.forest.max_features);
}

void ParseParamString(std::string_view text, TrainConfig& c) {
  for (auto kv : Split(text, ';')) {
    const size_t eq = kv.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kParseError, "bad parameter " + std::string(kv));
    }
    const auto key = kv.substr(0, eq), val = kv.substr(eq + 1);
    if (key == "l2") c.logistic.l2 = ParseDouble(val, key);
    else if (key == "max_iters") c.logistic.max_iters = int(ParseInt(val, key));
    else if (key == "tol") c.logistic.tol = ParseDouble(val, key);
    else if (key == "multinomial") c.logistic.force_multinomial = ParseInt(val, key) != 0;
    else if (key == "n_trees") c.forest.n_trees = int(ParseInt(val, key));
    else if (key == "max_depth") c.forest.max_depth = int(ParseInt(val, key));
    else if (key == "min_leaf") c.forest.min_leaf = int(ParseInt(val, key));
    else if (key == "max_features") c.forest.max_features = int(ParseInt(val, key));
    else throw Error(ErrorCode::kParseError, "unknown parameter " + std::string(key));
  }
}

// Sequential line reader with "key=value" helpers.
class LineReader {
 public:
  explicit LineReader(const std::string& text) : lines_(Split(text, '\n')) {}

  std::string_view Next() {
    while (pos_ < lines_.size()) {
      auto l = lines_[pos_++];
      if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
      if (!l.empty()) return l;
    }
    throw Error(ErrorCode::kParseError, "model file ends early");
  }

  std::string_view Value(std::string_view key) {
    const auto line = Next();
    if (!StartsWith(line, key) || line.size() <= key.size() ||
        line[key.size()] != '=') {
      throw Error(ErrorCode::kParseError, "expected '" + std::string(key) +
                                              "=' but found '" +
                                              std::string(line) + "'");
    }
    return line.substr(key.size() + 1);
  }

 private:
  std::vector<std::string_view> lines_;
  size_t pos_ = 0;
};

std::vector<std::string_view> Fields(std::string_view line) {
  std::vector<std::string_view> out;
  for (auto f : Split(line, ' ')) {
    if (!f.empty()) out.push_back(f);
  }
  return out;
}

int64_t FieldInt(std::string_view field, std::string_view key) {
  if (!StartsWith(field, key) || field.size() <= key.size() ||
      field[key.size()] != '=') {
    throw Error(ErrorCode::kParseError, "expected " + std::string(key) + "=");
  }
  return ParseInt(field.substr(key.size() + 1), key);
}

Eigen::MatrixXd Select(const Eigen::MatrixXd& x, std::span<const size_t> cols) {
  if (cols.empty()) return x;
  Eigen::MatrixXd out(x.rows(), Eigen::Index(cols.size()));
  for (size_t j = 0; j < cols.size(); ++j) out.col(Eigen::Index(j)) = x.col(Eigen::Index(cols[j]));
  return out;
}

}  // namespace

std::string TrainConfig::Describe() const {
  return std::string(ToString(kind)) + "(" + ParamString(*this) + ")";
}

std::vector<TrainConfig> DefaultGrid(ClassifierKind kind) {
  std::vector<TrainConfig> grid;
  if (kind == ClassifierKind::kLinear) {
    for (double l2 : {1e-4, 1e-3, 1e-2, 1e-1, 1.0}) {
      TrainConfig c;
      c.kind = kind;
      c.logistic.l2 = l2;
      grid.push_back(c);
    }
    return grid;
  }
  for (int trees : {100, 300}) {
    for (int depth : {8, 16, -1}) {
      for (int leaf : {1, 5}) {
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

std::vector<std::string> ClassNames(TaskKind task,
                                    std::span<const ClipLabel> labels) {
  if (task == TaskKind::kSingleClass) return {"real", "synthetic"};
  std::set<std::string> archs;
  for (const auto& l : labels) {
    if (l.kind == LabelKind::kSynthetic) archs.insert(l.architecture);
  }
  std::vector<std::string> out = {"real"};
  out.insert(out.end(), archs.begin(), archs.end());
  return out;
}

int ClassIndex(std::span<const std::string> classes, TaskKind task,
               const ClipLabel& label) {
  if (label.kind == LabelKind::kReal) return 0;
  if (task == TaskKind::kSingleClass) return 1;
  auto it = std::find(classes.begin(), classes.end(), label.architecture);
  if (it == classes.end() || it == classes.begin()) {
    throw Error(ErrorCode::kInvalidArgument,
                "architecture '" + label.architecture + "' unknown to the model");
  }
  return int(it - classes.begin());
}

std::vector<double> PredictProba(const TrainedModel& model,
                                 std::span<const double> raw) {
  if (raw.size() != model.input_dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "model expects " + std::to_string(model.input_dim) +
                    " features, got " + std::to_string(raw.size()));
  }
  std::vector<double> picked;
  if (model.selected.empty()) {
    picked.assign(raw.begin(), raw.end());
  } else {
    for (size_t j : model.selected) picked.push_back(raw[j]);
  }
  const std::vector<double> z = model.standardizer.Apply(picked);
  return std::visit([&](const auto& m) { return cvd::PredictProba(m, z); },
                    model.classifier);
}

std::string StandardizerDigest(const Standardizer& s) {
  return HexU64(Fnv1a64(s.mean) ^ SplitMix64(Fnv1a64(s.std)));
}

std::string ClipSetDigest(std::vector<std::string> ids) {
  std::sort(ids.begin(), ids.end());
  std::string joined;
  for (const auto& id : ids) {
    joined += id;
    joined.push_back('\n');
  }
  return HexU64(Fnv1a64(joined));
}

std::string SerializeModel(const TrainedModel& m) {
  std::ostringstream out;
  out << kModelHeader << "\n";
  out << "family=" << ToString(m.family) << "\n";
  out << "task=" << ToString(m.task) << "\n";
  out << "classifier=" << ToString(m.kind()) << "\n";
  std::string classes;
  for (size_t i = 0; i < m.classes.size(); ++i) {
    if (m.classes[i].find_first_of(",\n") != std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, "class name with separator");
    }
    classes += (i ? "," : "") + m.classes[i];
  }
  out << "classes=" << classes << "\n";
  out << "seed=" << m.seed << "\n";
  out << "params=" << ParamString(m.config) << "\n";
  out << "input_dim=" << m.input_dim << "\n";
  out << "selected=" << JoinIndices(m.selected) << "\n";
  out << "mean=" << JoinDoubles(m.standardizer.mean) << "\n";
  out << "std=" << JoinDoubles(m.standardizer.std) << "\n";
  out << "stats_digest=" << StandardizerDigest(m.standardizer) << "\n";
  out << "train_digest=" << m.train_digest << "\n";

  if (const auto* lin = std::get_if<LogisticModel>(&m.classifier)) {
    out << "linear rows=" << lin->rows() << " cols=" << lin->weights.cols()
        << " classes=" << lin->n_classes
        << " multinomial=" << (lin->multinomial ? 1 : 0) << "\n";
    for (Eigen::Index r = 0; r < lin->weights.rows(); ++r) {
      out << "w=" << JoinRow(lin->weights, r) << "\n";
    }
    std::vector<double> b(lin->bias.data(), lin->bias.data() + lin->bias.size());
    out << "b=" << JoinDoubles(b) << "\n";
  } else {
    const auto& forest = std::get<Forest>(m.classifier);
    out << "forest trees=" << forest.trees.size()
        << " classes=" << forest.n_classes << " features=" << forest.n_features
        << "\n";
    for (const auto& tree : forest.trees) {
      out << "tree nodes=" << tree.nodes.size() << "\n";
      for (const auto& node : tree.nodes) {
        if (node.feature >= 0) {
          out << "s " << node.feature << " " << FormatDouble(node.threshold)
              << " " << node.left << " " << node.right << "\n";
        } else {
          out << "l";
          for (size_t c = 0; c < node.counts.size(); ++c) {
            out << (c ? "," : " ") << node.counts[c];
          }
          out << "\n";
        }
      }
    }
  }
  return out.str();
}

TrainedModel ParseModel(const std::string& text) {
  LineReader in(text);
  if (in.Next() != kModelHeader) {
    throw Error(ErrorCode::kParseError, "not a model-v1 file");
  }
  TrainedModel m;
  m.family = ParseFeatureFamily(in.Value("family"));
  m.task = ParseTaskKind(in.Value("task"));
  m.config.kind = ParseClassifierKind(in.Value("classifier"));
  for (auto c : Split(in.Value("classes"), ',')) m.classes.emplace_back(c);
  m.seed = uint64_t(std::stoull(std::string(in.Value("seed"))));
  ParseParamString(in.Value("params"), m.config);
  m.input_dim = size_t(ParseInt(in.Value("input_dim"), "input_dim"));
  const auto sel = in.Value("selected");
  if (!sel.empty()) {
    for (auto s : Split(sel, ',')) m.selected.push_back(size_t(ParseInt(s, "selected")));
  }
  m.standardizer.mean = ParseDoubleList(in.Value("mean"), ',', "mean");
  m.standardizer.std = ParseDoubleList(in.Value("std"), ',', "std");
  const auto digest = in.Value("stats_digest");
  if (digest != StandardizerDigest(m.standardizer)) {
    throw Error(ErrorCode::kSchemaMismatch,
                "standardization statistics do not match their digest");
  }
  m.train_digest = std::string(in.Value("train_digest"));
  const size_t width = m.selected.empty() ? m.input_dim : m.selected.size();
  if (m.standardizer.mean.size() != width || m.standardizer.std.size() != width) {
    throw Error(ErrorCode::kParseError, "standardizer width mismatch");
  }
  for (size_t j : m.selected) {
    if (j >= m.input_dim) throw Error(ErrorCode::kParseError, "selected index out of range");
  }

  const auto head = Fields(in.Next());
  if (m.kind() == ClassifierKind::kLinear) {
    if (head.size() != 5 || head[0] != "linear") {
      throw Error(ErrorCode::kParseError, "expected linear block");
    }
    const int rows = int(FieldInt(head[1], "rows"));
    const int cols = int(FieldInt(head[2], "cols"));
    LogisticModel lin = LogisticModel::Zero(int(FieldInt(head[3], "classes")),
                                            cols, FieldInt(head[4], "multinomial") != 0);
    if (lin.rows() != rows || size_t(cols) != width) {
      throw Error(ErrorCode::kParseError, "linear block shape mismatch");
    }
    for (int r = 0; r < rows; ++r) {
      const auto w = ParseDoubleList(in.Value("w"), ',', "w");
      if (w.size() != size_t(cols)) throw Error(ErrorCode::kParseError, "weight row width");
      for (int c = 0; c < cols; ++c) lin.weights(r, c) = w[c];
    }
    const auto b = ParseDoubleList(in.Value("b"), ',', "b");
    if (b.size() != size_t(rows)) throw Error(ErrorCode::kParseError, "bias length");
    for (int r = 0; r < rows; ++r) lin.bias(r) = b[r];
    m.classifier = std::move(lin);
    return m;
  }

  if (head.size() != 4 || head[0] != "forest") {
    throw Error(ErrorCode::kParseError, "expected forest block");
  }
  Forest forest;
  const int n_trees = int(FieldInt(head[1], "trees"));
  forest.n_classes = int(FieldInt(head[2], "classes"));
  forest.n_features = int(FieldInt(head[3], "features"));
  if (size_t(forest.n_features) != width) {
    throw Error(ErrorCode::kParseError, "forest width mismatch");
  }
  forest.trees.resize(n_trees);
  for (auto& tree : forest.trees) {
    const auto th = Fields(in.Next());
    if (th.size() != 2 || th[0] != "tree") {
      throw Error(ErrorCode::kParseError, "expected tree header");
    }
    const int n_nodes = int(FieldInt(th[1], "nodes"));
    tree.nodes.resize(n_nodes);
    for (auto& node : tree.nodes) {
      const auto line = in.Next();
      if (StartsWith(line, "s ")) {
        const auto f = Fields(line);
        if (f.size() != 5) throw Error(ErrorCode::kParseError, "bad split node");
        node.feature = int(ParseInt(f[1], "feature"));
        node.threshold = ParseDouble(f[2], "threshold");
        node.left = int(ParseInt(f[3], "left"));
        node.right = int(ParseInt(f[4], "right"));
        if (node.feature >= forest.n_features || node.left <= 0 ||
            node.right <= 0 || node.left >= n_nodes || node.right >= n_nodes) {
          throw Error(ErrorCode::kParseError, "split node out of range");
        }
      } else if (StartsWith(line, "l ")) {
        for (auto c : Split(line.substr(2), ',')) {
          node.counts.push_back(uint32_t(ParseInt(c, "leaf count")));
        }
        if (node.counts.size() != size_t(forest.n_classes)) {
          throw Error(ErrorCode::kParseError, "leaf class count mismatch");
        }
      } else {
        throw Error(ErrorCode::kParseError, "bad tree node line");
      }
    }
  }
  m.classifier = std::move(forest);
  return m;
}

void SaveModel(const std::string& path, const TrainedModel& model) {
  WriteFile(path, SerializeModel(model));
}

TrainedModel LoadModel(const std::string& path) {
  try {
    return ParseModel(ReadFile(path));
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

double ValidationScore(const TrainedModel& model, const LabeledData& val,
                       double threshold) {
  std::vector<std::vector<double>> proba;
  for (Eigen::Index i = 0; i < val.x.rows(); ++i) {
    std::vector<double> row(val.x.cols());
    for (Eigen::Index j = 0; j < val.x.cols(); ++j) row[j] = val.x(i, j);
    proba.push_back(PredictProba(model, row));
  }
  if (model.task == TaskKind::kSingleClass) {
    std::vector<double> scores;
    std::vector<LabelKind> labels;
    for (size_t i = 0; i < proba.size(); ++i) {
      scores.push_back(proba[i][1]);
      labels.push_back(val.y[i] == 0 ? LabelKind::kReal : LabelKind::kSynthetic);
    }
    return ComputeEer(scores, labels).eer_percent;
  }
  const ClassAccuracy acc =
      ClassAccuracies(proba, val.y, TaskKind::kMultiClass, threshold);
  double sum = 0.0;
  int present = 0;
  for (size_t c = 0; c < acc.confusion.size(); ++c) {
    int total = 0;
    for (int v : acc.confusion[c]) total += v;
    if (total == 0) continue;
    sum += 100.0 * acc.confusion[c][c] / double(total);
    ++present;
  }
  if (present == 0) throw Error(ErrorCode::kInsufficientData, "empty validation set");
  return sum / present;
}

TuneResult TuneHyperparameters(const LabeledData& train, const LabeledData& val,
                               FeatureFamily family, TaskKind task,
                               std::vector<std::string> classes,
                               std::span<const TrainConfig> grid, uint64_t seed,
                               const TuneOptions& options) {
  if (grid.empty()) throw Error(ErrorCode::kInvalidArgument, "empty grid");
  if (train.x.rows() == 0 || val.x.rows() == 0) {
    throw Error(ErrorCode::kInsufficientData, "train and validation must be non-empty");
  }
  const int n_classes = int(classes.size());
  {
    std::vector<int> seen(n_classes, 0);
    for (int c : train.y) seen.at(size_t(c)) = 1;
    if (std::count(seen.begin(), seen.end(), 1) < 2) {
      throw Error(ErrorCode::kSingleClassData, "training split has one class");
    }
  }

  TrainedModel base;
  base.family = family;
  base.task = task;
  base.classes = std::move(classes);
  base.seed = seed;
  base.input_dim = size_t(train.x.cols());
  base.train_digest = ClipSetDigest(train.clip_ids);
  if (family == FeatureFamily::kSpectral && size_t(train.x.cols()) > options.select_k) {
    base.selected = SelectFeatures(train.x, train.y, n_classes, options.select_k,
                                   seed, ForestParams{}, options.workers)
                        .selected;
  }
  const Eigen::MatrixXd picked = Select(train.x, base.selected);
  base.standardizer = Standardizer::Fit(picked);
  const Eigen::MatrixXd z = base.standardizer.Apply(picked);

  TuneResult result;
  bool have_best = false;
  const bool lower_is_better = task == TaskKind::kSingleClass;
  for (size_t g = 0; g < grid.size(); ++g) {
    GridOutcome outcome;
    outcome.config = grid[g];
    TrainedModel candidate = base;
    candidate.config = grid[g];
    try {
      if (grid[g].kind == ClassifierKind::kLinear) {
        candidate.classifier =
            TrainLogistic(z, train.y, n_classes, grid[g].logistic).model;
      } else {
        candidate.classifier = TrainForest(z, train.y, n_classes, grid[g].forest,
                                           seed, options.workers)
                                   .forest;
      }
      outcome.score = ValidationScore(candidate, val, options.threshold);
      outcome.ok = true;
    } catch (const Error& e) {
      outcome.message = e.what();
    }
    if (outcome.ok) {
      const bool better =
          !have_best || (lower_is_better
                             ? outcome.score < result.outcomes[result.best_index].score
                             : outcome.score > result.outcomes[result.best_index].score);
      if (better) {
        result.best_index = g;
        result.model = std::move(candidate);
        have_best = true;
      }
    }
    result.outcomes.push_back(std::move(outcome));
  }
  if (!have_best) {
    throw Error(result.outcomes.front().message.find("SingleClass") != std::string::npos
                    ? ErrorCode::kSingleClassData
                    : ErrorCode::kInvalidArgument,
                "every grid point failed; first: " + result.outcomes.front().message);
  }
  return result;
}

}  // namespace cvd
