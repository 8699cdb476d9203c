// Copyright 2026 The robeval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "robeval/attacks.hpp"
#include "robeval/error.hpp"
#include "robeval/scorer.hpp"
#include "test_util.hpp"

namespace robeval {
namespace {

Matrix matrix_of(std::vector<std::vector<float>> rows) {
  Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

MetricConfig toy_metric(LayerPolicy policy) {
  MetricConfig c;
  c.policy = std::move(policy);
  return c;
}

std::vector<LayerPolicy> toy_policies() {
  return {LayerPolicy::first(), LayerPolicy::fixed(2), LayerPolicy::fixed(3),
          LayerPolicy::mean_all(true), LayerPolicy::mean_all(false)};
}

// Brute-force oracle: recall averages row maxima, precision column maxima.
ScoreTriple oracle_greedy(const SimilarityMatrix& s) {
  double r = 0, p = 0;
  for (size_t i = 0; i < s.rows(); ++i) {
    double best = s(i, 0);
    for (size_t j = 1; j < s.cols(); ++j) best = std::max(best, s(i, j));
    r += best;
  }
  for (size_t j = 0; j < s.cols(); ++j) {
    double best = s(0, j);
    for (size_t i = 1; i < s.rows(); ++i) best = std::max(best, s(i, j));
    p += best;
  }
  r /= static_cast<double>(s.rows());
  p /= static_cast<double>(s.cols());
  return {p, r, 2 * p * r / (p + r)};
}

TEST(LayerPolicyTest, ResolutionAndParsing) {
  EXPECT_EQ(LayerPolicy::default_best("bert-base-uncased").index, 9);
  EXPECT_EQ(default_best_layer("byt5-small"), 1);
  EXPECT_EQ(default_best_layer("byt5-base"), 17);
  EXPECT_EQ(default_best_layer("byt5-large"), 30);
  EXPECT_FALSE(default_best_layer("gpt").has_value());
  EXPECT_THROW(LayerPolicy::fixed(0), ValidationError);
  EXPECT_THROW(LayerPolicy::default_best("gpt"), ValidationError);
  EXPECT_EQ(LayerPolicy::parse("first"), LayerPolicy::first());
  EXPECT_EQ(LayerPolicy::parse("7"), LayerPolicy::fixed(7));
  EXPECT_EQ(LayerPolicy::parse("mean"), LayerPolicy::mean_all(true));
  EXPECT_EQ(LayerPolicy::parse("mean-no-static"), LayerPolicy::mean_all(false));
  EXPECT_EQ(LayerPolicy::parse("best", "byt5-small"), LayerPolicy::default_best("byt5-small"));
  EXPECT_THROW(LayerPolicy::parse("deep"), ValidationError);
  for (const auto& p : toy_policies()) EXPECT_EQ(LayerPolicy::parse(p.label()), p);
}

TEST(LayerPolicyTest, RequiredLayers) {
  EXPECT_EQ(required_layers(LayerPolicy::first()), (std::vector<int>{1}));
  EXPECT_EQ(required_layers(LayerPolicy::default_best("bert-base-uncased")),
            (std::vector<int>{9}));
  EXPECT_FALSE(required_layers(LayerPolicy::mean_all()).has_value());
}

TEST(SelectLayerTest, FirstFixedAndAbsent) {
  const auto stack = toy_embed("a b c", ToyParams{});
  EXPECT_EQ(select_layer(stack, LayerPolicy::first()), stack.layers[1]);
  EXPECT_EQ(select_layer(stack, LayerPolicy::fixed(3)), stack.layers[3]);
  ToyParams two;
  two.num_layers = 2;
  try {
    select_layer(toy_embed("a b", two), LayerPolicy::fixed(5));
    FAIL() << "expected an error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("absent"), std::string::npos) << e.what();
  }
}

TEST(SelectLayerTest, MeanOfIdenticalLayersEqualsLayer) {
  auto stack = toy_embed("one two three", ToyParams{});
  for (auto& layer : stack.layers) layer = stack.layers[1];
  EXPECT_EQ(select_layer(stack, LayerPolicy::mean_all()), stack.layers[1]);
  EXPECT_EQ(select_layer(stack, LayerPolicy::mean_all(false)), stack.layers[1]);
}

TEST(SelectLayerTest, MeanMatchesOracle) {
  const auto stack = toy_embed("one two three", ToyParams{});
  const Matrix with = select_layer(stack, LayerPolicy::mean_all(true));
  const Matrix without = select_layer(stack, LayerPolicy::mean_all(false));
  for (size_t t = 0; t < 3; ++t) {
    for (size_t j = 0; j < stack.dim; ++j) {
      double all = 0;
      for (const auto& l : stack.layers) all += l(t, j);
      EXPECT_NEAR(with(t, j), all / 4, 1e-6);
      EXPECT_NEAR(without(t, j), (all - stack.layers[0](t, j)) / 3, 1e-6);
    }
  }
}

TEST(CosineMatrixTest, Examples) {
  const auto id = matrix_of({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  const auto s = cosine_matrix(id, id);
  for (size_t i = 0; i < 3; ++i)
    for (size_t j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(s(i, j), i == j ? 1.0 : 0.0);

  const auto ortho = cosine_matrix(matrix_of({{1, 0}}), matrix_of({{0, 3}}));
  EXPECT_DOUBLE_EQ(ortho(0, 0), 0.0);

  const auto col = cosine_matrix(matrix_of({{1, 0}, {1, 1}}), matrix_of({{0, 1}}));
  ASSERT_EQ(col.rows(), 2u);
  ASSERT_EQ(col.cols(), 1u);
  EXPECT_NEAR(col(0, 0), 0.0, 1e-12);
  EXPECT_NEAR(col(1, 0), 1.0 / std::sqrt(2.0), 1e-7);
}

TEST(CosineMatrixTest, ZeroRowAndMismatch) {
  const auto s = cosine_matrix(matrix_of({{0, 0}}), matrix_of({{1, 0}}));
  EXPECT_EQ(s(0, 0), 0.0);
  EXPECT_THROW(cosine_matrix(matrix_of({{1, 0}}), matrix_of({{1, 0, 0}})), ValidationError);
}

TEST(GreedyScoreTest, Examples) {
  const auto ones = greedy_score(SimilarityMatrix(3, 2, 1.0));
  EXPECT_DOUBLE_EQ(ones.f1, 1.0);
  SimilarityMatrix eye(2, 2, 0.0);
  eye(0, 0) = eye(1, 1) = 1.0;
  const auto perfect = greedy_score(eye);
  EXPECT_DOUBLE_EQ(perfect.precision, 1.0);
  EXPECT_DOUBLE_EQ(perfect.recall, 1.0);
  EXPECT_DOUBLE_EQ(perfect.f1, 1.0);
  try {
    greedy_score(SimilarityMatrix(0, 3));
    FAIL() << "expected an error";
  } catch (const ValidationError& e) {
    EXPECT_STREQ(e.what(), "empty sides");
  }
}

TEST(GreedyScoreTest, RecallIsOverReferenceRows) {
  SimilarityMatrix s(2, 1);
  s(0, 0) = 1.0;
  s(1, 0) = 0.0;
  const auto t = greedy_score(s);
  EXPECT_DOUBLE_EQ(t.recall, 0.5);
  EXPECT_DOUBLE_EQ(t.precision, 1.0);
}

TEST(GreedyScoreTest, MatchesBruteForceOracle) {
  testing::SentenceGen gen(401);
  for (int trial = 0; trial < 1000; ++trial) {
    const size_t n = 1 + gen.below(16), m = 1 + gen.below(16);
    SimilarityMatrix s(n, m);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < m; ++j) s(i, j) = gen.uniform(0.01, 1.0);
    const auto got = greedy_score(s);
    const auto want = oracle_greedy(s);
    ASSERT_NEAR(got.precision, want.precision, 1e-9);
    ASSERT_NEAR(got.recall, want.recall, 1e-9);
    ASSERT_NEAR(got.f1, want.f1, 1e-9);
  }
}

TEST(GreedyScoreTest, TransposeSwapsPrecisionAndRecall) {
  testing::SentenceGen gen(402);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = 1 + gen.below(9), m = 1 + gen.below(9);
    SimilarityMatrix s(n, m), t(m, n);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < m; ++j) t(j, i) = s(i, j) = gen.uniform(-1.0, 1.0);
    const auto a = greedy_score(s);
    const auto b = greedy_score(t);
    ASSERT_DOUBLE_EQ(a.precision, b.recall);
    ASSERT_DOUBLE_EQ(a.recall, b.precision);
  }
}

TEST(ScorerTest, IdentityUnderEveryPolicy) {
  testing::SentenceGen gen(403);
  for (const auto& policy : toy_policies()) {
    Scorer scorer(toy_metric(policy));
    for (int i = 0; i < 30; ++i) {
      const auto text = gen.nonempty_sentence();
      const auto s = scorer.score_pair(text, text);
      ASSERT_NEAR(s.f1, 1.0, 1e-6) << policy.label() << " " << text;
      ASSERT_NEAR(s.precision, 1.0, 1e-6);
      ASSERT_NEAR(s.recall, 1.0, 1e-6);
    }
  }
}

TEST(ScorerTest, ToyLayerOutOfRangeRejected) {
  EXPECT_THROW(Scorer(toy_metric(LayerPolicy::fixed(4))), ValidationError);
  EXPECT_THROW(Scorer(toy_metric(LayerPolicy::default_best("bert-base-uncased"))),
               ValidationError);
}

TEST(ScorerTest, SwapExchangesPrecisionAndRecall) {
  Scorer scorer(toy_metric(LayerPolicy::first()));
  const auto a = scorer.score_pair("the cat sat on the mat", "a cat was sitting");
  const auto b = scorer.score_pair("a cat was sitting", "the cat sat on the mat");
  EXPECT_NEAR(a.precision, b.recall, 1e-12);
  EXPECT_NEAR(a.recall, b.precision, 1e-12);
}

TEST(ScorerTest, EmptySideIsError) {
  Scorer scorer(toy_metric(LayerPolicy::first()));
  EXPECT_THROW(scorer.score_pair("", "text"), ValidationError);
  EXPECT_THROW(scorer.score_pair("text", "  "), ValidationError);
}

TEST(ScorerTest, AttackedReferenceScoresBelowOne) {
  Scorer scorer(toy_metric(LayerPolicy::first()));
  const std::string clean = "Now they have come to an agreement about the price.";
  const AttackSpec spec{AttackKind::kVisual, 0.3, 5,
                        std::make_shared<const AttackResources>(
                            load_resources(testing::data_dir()))};
  const auto attacked = perturb_sentence(clean, spec);
  ASSERT_NE(attacked, clean);
  EXPECT_LT(scorer.score_pair(clean, attacked).f1, 1.0);
}

TEST(ScoreBatchTest, EmptyAndErrorIndex) {
  Scorer scorer(toy_metric(LayerPolicy::first()));
  EXPECT_TRUE(scorer.score_batch({}).empty());
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"a b", "a b"}, {"", "ref"}, {"x y z", "x y"}};
  for (size_t workers : {1, 3}) {
    const auto items = scorer.score_batch(pairs, workers);
    ASSERT_EQ(items.size(), 3u);
    EXPECT_TRUE(items[0].score.has_value());
    EXPECT_FALSE(items[1].score.has_value());
    EXPECT_NE(items[1].error.find("empty side"), std::string::npos) << items[1].error;
    ASSERT_TRUE(items[2].score.has_value());
    EXPECT_DOUBLE_EQ(items[2].score->f1, scorer.score_pair("x y z", "x y").f1);
  }
}

TEST(ScoreBatchTest, WorkersDoNotChangeResults) {
  testing::SentenceGen gen(404);
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int i = 0; i < 64; ++i) pairs.emplace_back(gen.nonempty_sentence(), gen.nonempty_sentence());
  Scorer scorer(toy_metric(LayerPolicy::mean_all()));
  const auto serial = scorer.score_batch(pairs, 1);
  const auto parallel = scorer.score_batch(pairs, 8);
  for (size_t i = 0; i < pairs.size(); ++i) {
    ASSERT_TRUE(serial[i].score && parallel[i].score);
    ASSERT_EQ(serial[i].score->f1, parallel[i].score->f1);
  }
}

std::vector<std::vector<std::string>> read_csv_rows(const std::filesystem::path& path) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(testing::read_text(path));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

TEST(ExportSimilarityTest, IdenticalSentencesHaveUnitDiagonal) {
  testing::TempDir dir;
  Scorer scorer(toy_metric(LayerPolicy::first()));
  scorer.export_similarity_matrix("red green blue", "red green blue", dir / "sim.csv");
  const auto rows = read_csv_rows(dir / "sim.csv");
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"", "red", "green", "blue"}));
  for (size_t i = 1; i <= 3; ++i) {
    ASSERT_EQ(rows[i].size(), 4u);
    EXPECT_EQ(rows[i][i], "1.000000");
  }
}

TEST(ExportSimilarityTest, QuotesCsvSpecials) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
}

TEST(ExportSimilarityTest, ShallowLayerKeepsMatchedCellsHigher) {
  const std::string clean = "This could possibly be the cause of the fire.";
  const AttackSpec spec{AttackKind::kVisual, 0.3, 11,
                        std::make_shared<const AttackResources>(
                            load_resources(testing::data_dir()))};
  const auto attacked = perturb_sentence(clean, spec);
  ASSERT_NE(attacked, clean);
  auto matched_mean = [&](int layer) {
    Scorer scorer(toy_metric(LayerPolicy::fixed(layer)));
    const auto view = scorer.similarity(clean, attacked);
    double sum = 0;
    size_t n = 0;
    for (size_t i = 0; i < view.reference_tokens.size(); ++i) {
      for (size_t j = 0; j < view.candidate_tokens.size(); ++j) {
        if (view.reference_tokens[i] == view.candidate_tokens[j]) {
          sum += view.sim(i, j);
          ++n;
        }
      }
    }
    EXPECT_GT(n, 0u);
    return sum / static_cast<double>(n);
  };
  EXPECT_GE(matched_mean(1), matched_mean(3));
}

}  // namespace
}  // namespace robeval
