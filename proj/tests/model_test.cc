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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cvd/model.h"
#include "cvd/text.h"
#include "support/fixtures.h"
#include "support/oracles.h"
#include "support/test_util.h"

namespace cvd {
namespace {

LabeledData Labeled(const testing::Dataset& d, const std::string& prefix) {
  LabeledData out;
  out.x = d.x;
  out.y = d.y;
  for (int i = 0; i < d.x.rows(); ++i) out.clip_ids.push_back(prefix + std::to_string(i));
  return out;
}

std::vector<double> Row(const Eigen::MatrixXd& x, int i) {
  std::vector<double> r(x.cols());
  for (int j = 0; j < x.cols(); ++j) r[j] = x(i, j);
  return r;
}

TrainConfig Linear(double l2) {
  TrainConfig c;
  c.kind = ClassifierKind::kLinear;
  c.logistic.l2 = l2;
  return c;
}

TrainConfig SmallForest(int trees, int depth) {
  TrainConfig c;
  c.kind = ClassifierKind::kForest;
  c.forest.n_trees = trees;
  c.forest.max_depth = depth;
  return c;
}

TEST(ClassNamesTest, SingleAndMulti) {
  const std::vector<ClipLabel> labels{ClipLabel::Real(), ClipLabel::Synthetic("UD"),
                                      ClipLabel::Synthetic("EL"),
                                      ClipLabel::Synthetic("UD")};
  EXPECT_EQ(ClassNames(TaskKind::kSingleClass, labels),
            (std::vector<std::string>{"real", "synthetic"}));
  const auto multi = ClassNames(TaskKind::kMultiClass, labels);
  EXPECT_EQ(multi, (std::vector<std::string>{"real", "EL", "UD"}));
  EXPECT_EQ(ClassIndex(multi, TaskKind::kMultiClass, labels[1]), 2);
  EXPECT_EQ(ClassIndex(multi, TaskKind::kSingleClass, labels[1]), 1);
  EXPECT_EQ(ClassIndex(multi, TaskKind::kMultiClass, labels[0]), 0);
  EXPECT_CVD_ERROR(ClassIndex(multi, TaskKind::kMultiClass, ClipLabel::Synthetic("WF")),
                   ErrorCode::kInvalidArgument);
}

TEST(TuneTest, SingleEntryGridReturnsIt) {
  const auto train = Labeled(testing::Gaussians(80, 3, 2, 1), "t");
  const auto val = Labeled(testing::Gaussians(40, 3, 2, 2), "v");
  const std::vector<TrainConfig> grid{Linear(0.3)};
  const auto r = TuneHyperparameters(train, val, FeatureFamily::kPerceptual,
                                     TaskKind::kSingleClass, {"real", "synthetic"},
                                     grid, 5);
  EXPECT_EQ(r.best_index, 0u);
  EXPECT_EQ(r.model.config.logistic.l2, 0.3);
  ASSERT_EQ(r.outcomes.size(), 1u);
  EXPECT_TRUE(r.outcomes[0].ok);
}

TEST(TuneTest, DominantConfigIsSelected) {
  // XOR: the forest reaches val EER 0, the linear model cannot.
  const auto train = Labeled(testing::XorBlobs(50, 0.1, 1), "t");
  const auto val = Labeled(testing::XorBlobs(25, 0.1, 2), "v");
  const std::vector<TrainConfig> grid{Linear(0.01), SmallForest(20, -1)};
  const auto r = TuneHyperparameters(train, val, FeatureFamily::kPerceptual,
                                     TaskKind::kSingleClass, {"real", "synthetic"},
                                     grid, 5);
  EXPECT_EQ(r.best_index, 1u);
  EXPECT_EQ(r.outcomes[1].score, 0.0);
  EXPECT_GT(r.outcomes[0].score, 10.0);
}

TEST(TuneTest, EarlierEntryWinsTies) {
  const auto train = Labeled(testing::ShiftedColumns(60, 2, {0}, 10.0, 3), "t");
  const auto val = Labeled(testing::ShiftedColumns(30, 2, {0}, 10.0, 4), "v");
  const std::vector<TrainConfig> grid{Linear(0.1), Linear(0.01)};
  const auto r = TuneHyperparameters(train, val, FeatureFamily::kPerceptual,
                                     TaskKind::kSingleClass, {"real", "synthetic"},
                                     grid, 5);
  EXPECT_EQ(r.outcomes[0].score, r.outcomes[1].score);
  EXPECT_EQ(r.best_index, 0u);
}

TEST(TuneTest, DefaultGridsMatchIndependentReevaluation) {
  const auto train_d = testing::ShiftedColumns(180, 4, {0, 2}, 0.8, 31);
  const auto val_d = testing::ShiftedColumns(60, 4, {0, 2}, 0.8, 32);
  const auto train = Labeled(train_d, "t");
  const auto val = Labeled(val_d, "v");
  for (ClassifierKind kind : {ClassifierKind::kLinear, ClassifierKind::kForest}) {
    const auto grid = DefaultGrid(kind);
    const auto r = TuneHyperparameters(train, val, FeatureFamily::kPerceptual,
                                       TaskKind::kSingleClass,
                                       {"real", "synthetic"}, grid, 11);

    const Standardizer st = Standardizer::Fit(train_d.x);
    const Eigen::MatrixXd z = st.Apply(train_d.x);
    const Eigen::MatrixXd zv = st.Apply(val_d.x);
    size_t best = 0;
    double best_eer = 1e300;
    for (size_t g = 0; g < grid.size(); ++g) {
      std::vector<double> scores;
      std::vector<LabelKind> labels;
      if (kind == ClassifierKind::kLinear) {
        const auto m = TrainLogistic(z, train_d.y, 2, grid[g].logistic).model;
        for (int i = 0; i < zv.rows(); ++i) scores.push_back(PredictProba(m, Row(zv, i))[1]);
      } else {
        const auto f = TrainForest(z, train_d.y, 2, grid[g].forest, 11).forest;
        for (int i = 0; i < zv.rows(); ++i) scores.push_back(PredictProba(f, Row(zv, i))[1]);
      }
      for (int y : val_d.y) labels.push_back(y ? LabelKind::kSynthetic : LabelKind::kReal);
      const double eer = testing::BruteForceEer(scores, labels);
      EXPECT_NEAR(r.outcomes[g].score, eer, 1e-9) << g;
      if (eer < best_eer) {
        best_eer = eer;
        best = g;
      }
    }
    EXPECT_EQ(r.best_index, best) << ToString(kind);
  }
}

TEST(TuneTest, SingleClassTrainingRejected) {
  auto d = testing::Gaussians(30, 2, 2, 1);
  std::fill(d.y.begin(), d.y.end(), 0);
  const auto train = Labeled(d, "t");
  const std::vector<TrainConfig> grid{Linear(0.1)};
  EXPECT_CVD_ERROR(TuneHyperparameters(train, train, FeatureFamily::kPerceptual,
                                       TaskKind::kSingleClass,
                                       {"real", "synthetic"}, grid, 1),
                   ErrorCode::kSingleClassData);
}

TEST(TuneTest, MultiClassUsesMacroRecall) {
  const auto train = Labeled(testing::Gaussians(150, 3, 3, 5), "t");
  const auto val = Labeled(testing::Gaussians(60, 3, 3, 6), "v");
  const std::vector<TrainConfig> grid{Linear(0.01)};
  const auto r = TuneHyperparameters(train, val, FeatureFamily::kPerceptual,
                                     TaskKind::kMultiClass, {"real", "A", "B"},
                                     grid, 2);
  int correct[3] = {}, total[3] = {};
  for (int i = 0; i < val.x.rows(); ++i) {
    const auto p = PredictProba(r.model, Row(val.x, i));
    const int pred = int(std::max_element(p.begin(), p.end()) - p.begin());
    total[val.y[i]]++;
    correct[val.y[i]] += pred == val.y[i];
  }
  const double macro =
      (100.0 * correct[0] / total[0] + 100.0 * correct[1] / total[1] +
       100.0 * correct[2] / total[2]) / 3.0;
  EXPECT_NEAR(r.outcomes[0].score, macro, 1e-9);
}

TrainedModel TrainSpectralLike(ClassifierKind kind) {
  const auto train = Labeled(testing::ShiftedColumns(120, 30, {4, 9}, 2.0, 8), "t");
  const auto val = Labeled(testing::ShiftedColumns(40, 30, {4, 9}, 2.0, 9), "v");
  const std::vector<TrainConfig> grid{kind == ClassifierKind::kLinear
                                          ? Linear(0.01)
                                          : SmallForest(15, 6)};
  TuneOptions opts;
  opts.select_k = 5;
  return TuneHyperparameters(train, val, FeatureFamily::kSpectral,
                             TaskKind::kSingleClass, {"real", "synthetic"}, grid,
                             3, opts)
      .model;
}

TEST(ModelIoTest, RoundTripIsBitExact) {
  for (ClassifierKind kind : {ClassifierKind::kLinear, ClassifierKind::kForest}) {
    const TrainedModel m = TrainSpectralLike(kind);
    EXPECT_EQ(m.selected.size(), 5u);
    const std::string text = SerializeModel(m);
    const TrainedModel back = ParseModel(text);
    EXPECT_EQ(SerializeModel(back), text);
    EXPECT_EQ(back.selected, m.selected);
    EXPECT_EQ(back.standardizer, m.standardizer);
    EXPECT_EQ(back.classes, m.classes);
    EXPECT_EQ(back.train_digest, m.train_digest);
    const auto probe = testing::ShiftedColumns(50, 30, {4, 9}, 2.0, 10);
    for (int i = 0; i < probe.x.rows(); ++i) {
      EXPECT_EQ(PredictProba(back, Row(probe.x, i)), PredictProba(m, Row(probe.x, i)));
    }
    testing::ScratchDir dir;
    SaveModel(dir / "m.model", m);
    EXPECT_EQ(SerializeModel(LoadModel(dir / "m.model")), text);
  }
}

TEST(ModelIoTest, TamperedStatisticsAreDetected) {
  const std::string text = SerializeModel(TrainSpectralLike(ClassifierKind::kLinear));
  const size_t pos = text.find("\nmean=");
  ASSERT_NE(pos, std::string::npos);
  std::string tampered = text;
  const size_t digit = tampered.find_first_of("123456789", pos + 6);
  tampered[digit] = tampered[digit] == '9' ? '8' : char(tampered[digit] + 1);
  EXPECT_CVD_ERROR(ParseModel(tampered), ErrorCode::kSchemaMismatch);
  EXPECT_CVD_ERROR(ParseModel("#model-v2\n"), ErrorCode::kParseError);
}

TEST(ModelIoTest, DigestsAreOrderIndependent) {
  EXPECT_EQ(ClipSetDigest({"b", "a", "c"}), ClipSetDigest({"c", "b", "a"}));
  EXPECT_NE(ClipSetDigest({"a", "b"}), ClipSetDigest({"a", "c"}));
  Standardizer s{{1.0, 2.0}, {3.0, 4.0}};
  Standardizer t{{1.0, 2.0}, {3.0, 4.000000000000001}};
  EXPECT_NE(StandardizerDigest(s), StandardizerDigest(t));
}

TEST(ModelTest, WrongInputWidthRejected) {
  const TrainedModel m = TrainSpectralLike(ClassifierKind::kLinear);
  EXPECT_CVD_ERROR(PredictProba(m, std::vector<double>(29, 0.0)),
                   ErrorCode::kDimensionMismatch);
}

}  // namespace
}  // namespace cvd
