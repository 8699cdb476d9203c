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
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "robeval/correlate.hpp"
#include "robeval/error.hpp"
#include "test_util.hpp"

namespace robeval {
namespace {

struct Fixture {
  std::vector<JudgmentPair> judgments;
  ScoreMap scores;
};

// Each judgment (better=A, worse=B) gets its own segment so pairs are
// independent. Outcome: +1 concordant, -1 discordant, 0 tie.
Fixture fixture_of(const std::vector<int>& outcomes) {
  Fixture f;
  for (size_t i = 0; i < outcomes.size(); ++i) {
    const std::string seg = std::to_string(i);
    f.judgments.push_back({"de-en", seg, "A", "B"});
    f.scores[{"A", seg}] = 0.5 + 0.1 * outcomes[i];
    f.scores[{"B", seg}] = 0.5;
  }
  return f;
}

// Independent count: tau = (C - D) / (C + D + T).
double oracle_kendall(const std::vector<JudgmentPair>& js, const ScoreMap& s) {
  double c = 0, d = 0, t = 0;
  for (const auto& j : js) {
    const double b = s.at({j.better_system, j.seg_id});
    const double w = s.at({j.worse_system, j.seg_id});
    if (b > w) c += 1;
    else if (b < w) d += 1;
    else t += 1;
  }
  return (c - d) / (c + d + t);
}

Fixture random_fixture(testing::SentenceGen& gen, bool allow_ties) {
  Fixture f;
  const std::vector<std::string> systems = {"A", "B", "C", "D"};
  const size_t segs = 2 + gen.below(10);
  for (size_t s = 0; s < segs; ++s) {
    const std::string seg = std::to_string(s);
    for (const auto& sys : systems) {
      f.scores[{sys, seg}] =
          allow_ties ? static_cast<double>(gen.below(3)) / 2.0 : gen.uniform(0.0, 1.0);
    }
    for (size_t a = 0; a < systems.size(); ++a) {
      for (size_t b = a + 1; b < systems.size(); ++b) {
        if (gen.below(2)) f.judgments.push_back({"x", seg, systems[a], systems[b]});
        else f.judgments.push_back({"x", seg, systems[b], systems[a]});
      }
    }
  }
  return f;
}

TEST(KendallTest, Fixtures) {
  const auto all = fixture_of({1, 1, 1, 1});
  EXPECT_EQ(kendall_darr(all.judgments, all.scores).value, 1.0);
  const auto three_one = fixture_of({1, 1, 1, -1});
  const auto r = kendall_darr(three_one.judgments, three_one.scores);
  EXPECT_EQ(r.value, 0.5);
  EXPECT_EQ(r.concordant, 3u);
  EXPECT_EQ(r.discordant, 1u);
  EXPECT_EQ(r.n_pairs, 4u);
  const auto tie = fixture_of({1, 1, -1, 0});
  EXPECT_EQ(kendall_darr(tie.judgments, tie.scores).value, 0.25);
}

TEST(KendallTest, TieModes) {
  const auto f = fixture_of({1, 1, -1, 0});
  EXPECT_EQ(kendall_darr(f.judgments, f.scores, TieMode::kDiscordant).value, 0.0);
  const auto dropped = kendall_darr(f.judgments, f.scores, TieMode::kDrop);
  EXPECT_DOUBLE_EQ(dropped.value, 1.0 / 3.0);
  EXPECT_EQ(dropped.n_pairs, 3u);
  EXPECT_EQ(parse_tie_mode("drop"), TieMode::kDrop);
  EXPECT_EQ(parse_tie_mode(to_string(TieMode::kDenominator)), TieMode::kDenominator);
  EXPECT_THROW(parse_tie_mode("ignore"), ValidationError);
  const auto only_tie = fixture_of({0});
  EXPECT_THROW(kendall_darr(only_tie.judgments, only_tie.scores, TieMode::kDrop),
               ValidationError);
}

TEST(KendallTest, MissingKeyNamed) {
  auto f = fixture_of({1});
  f.scores.erase({"B", "0"});
  try {
    kendall_darr(f.judgments, f.scores);
    FAIL() << "expected an error";
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("\"B\""), std::string::npos) << msg;
    EXPECT_NE(msg.find("\"0\""), std::string::npos) << msg;
  }
  EXPECT_THROW(kendall_darr({}, ScoreMap{}), ValidationError);
}

TEST(KendallTest, MatchesOracleAndBounded) {
  testing::SentenceGen gen(501);
  for (int trial = 0; trial < 300; ++trial) {
    const auto f = random_fixture(gen, trial % 2 == 0);
    const auto r = kendall_darr(f.judgments, f.scores);
    ASSERT_NEAR(r.value, oracle_kendall(f.judgments, f.scores), 1e-12);
    ASSERT_GE(r.value, -1.0);
    ASSERT_LE(r.value, 1.0);
    ASSERT_EQ(r.concordant + r.discordant + r.ties, r.n_pairs);
  }
}

TEST(KendallTest, NegationFlipsSignWithoutTies) {
  testing::SentenceGen gen(502);
  for (int trial = 0; trial < 100; ++trial) {
    auto f = random_fixture(gen, false);
    const double before = kendall_darr(f.judgments, f.scores).value;
    for (auto& [key, v] : f.scores) v = -v;
    ASSERT_DOUBLE_EQ(kendall_darr(f.judgments, f.scores).value, -before);
  }
}

TEST(KendallTest, InvariantUnderMonotoneTransforms) {
  testing::SentenceGen gen(503);
  for (int trial = 0; trial < 100; ++trial) {
    auto f = random_fixture(gen, trial % 2 == 0);
    const double before = kendall_darr(f.judgments, f.scores).value;
    const double scale = gen.uniform(0.1, 10.0);
    const double shift = gen.uniform(-5.0, 5.0);
    for (auto& [key, v] : f.scores) v = std::exp(scale * v) + shift;
    ASSERT_EQ(kendall_darr(f.judgments, f.scores).value, before);
  }
}

TEST(PearsonTest, Examples) {
  const std::vector<double> xs = {1, 2, 3, 4, 5};
  std::vector<double> affine, neg;
  for (double x : xs) {
    affine.push_back(2 * x + 1);
    neg.push_back(-x);
  }
  EXPECT_NEAR(pearson(xs, affine), 1.0, 1e-9);
  EXPECT_NEAR(pearson(xs, neg), -1.0, 1e-9);
  EXPECT_NEAR(pearson({1, 2, 3, 4}, {1, 3, 2, 4}), 0.8, 1e-9);
}

TEST(PearsonTest, Errors) {
  EXPECT_THROW(pearson({1, 2}, {1}), ValidationError);
  EXPECT_THROW(pearson({1}, {1}), ValidationError);
  EXPECT_THROW(pearson({1, 1, 1}, {1, 2, 3}), ValidationError);
}

TEST(PearsonTest, AffineInvariance) {
  testing::SentenceGen gen(504);
  for (int trial = 0; trial < 100; ++trial) {
    const size_t n = 3 + gen.below(30);
    std::vector<double> xs(n), ys(n), zs(n);
    const double a = gen.uniform(0.5, 5.0), b = gen.uniform(-3.0, 3.0);
    for (size_t i = 0; i < n; ++i) {
      xs[i] = gen.uniform(-1.0, 1.0);
      ys[i] = gen.uniform(-1.0, 1.0);
      zs[i] = a * ys[i] + b;
    }
    ASSERT_NEAR(pearson(xs, ys), pearson(xs, zs), 1e-9);
    ASSERT_LE(std::abs(pearson(xs, ys)), 1.0);
  }
}

TEST(AverageOverPairsTest, Examples) {
  EXPECT_DOUBLE_EQ(average_over_pairs(std::map<std::string, double>{{"a", 0.2}, {"b", 0.4}}),
                   0.3);
  EXPECT_DOUBLE_EQ(average_over_pairs(std::map<std::string, double>{{"a", 0.7}}), 0.7);
  EXPECT_THROW(average_over_pairs(std::map<std::string, double>{}), ValidationError);
  std::map<std::string, CorrelationResult> results;
  results["a"].value = 0.2;
  results["b"].value = 0.4;
  EXPECT_DOUBLE_EQ(average_over_pairs(results), 0.3);
}

// Seven to-English pairs for bert-base at p = 0; their average is 0.318.
TEST(AverageOverPairsTest, BertBaseSevenPairs) {
  const std::map<std::string, double> row = {
      {"de-en", 0.180}, {"fi-en", 0.339}, {"gu-en", 0.288}, {"kk-en", 0.438},
      {"lt-en", 0.364}, {"ru-en", 0.209}, {"zh-en", 0.410}};
  EXPECT_NEAR(average_over_pairs(row), 0.318, 0.0005);
}

TEST(SelectBestLayerTest, SmallByteModelPeaksAtLayerOne) {
  // Synthetic per-layer curve peaking at (1, 0.510).
  const std::map<int, double> table = {{1, 0.510}, {2, 0.497}, {3, 0.488}, {4, 0.471},
                                       {5, 0.455}, {6, 0.440}};
  const auto [layer, score] = select_best_layer(table);
  EXPECT_EQ(layer, 1);
  EXPECT_DOUBLE_EQ(score, 0.510);
}

TEST(SelectBestLayerTest, TiesPickLowestLayer) {
  EXPECT_EQ(select_best_layer({{1, 0.4}, {2, 0.4}, {3, 0.4}, {4, 0.4}}),
            (std::pair<int, double>{1, 0.4}));
  EXPECT_THROW(select_best_layer({}), ValidationError);
}

TEST(SelectBestLayerTest, MatchesLinearScanAndShiftInvariant) {
  testing::SentenceGen gen(505);
  for (int trial = 0; trial < 300; ++trial) {
    std::map<int, double> table;
    const size_t n = 1 + gen.below(24);
    for (size_t l = 0; l < n; ++l) {
      table[static_cast<int>(l) + 1] = static_cast<double>(gen.below(20)) / 20.0;
    }
    int best = -1;
    double best_v = 0;
    for (const auto& [l, v] : table) {
      if (best == -1 || v > best_v) {
        best = l;
        best_v = v;
      }
    }
    ASSERT_EQ(select_best_layer(table), (std::pair<int, double>{best, best_v}));
    std::map<int, double> shifted;
    for (const auto& [l, v] : table) shifted[l] = v + 3.0;
    ASSERT_EQ(select_best_layer(shifted).first, best);
  }
}

TEST(ScoresTsvTest, ParsesHeaderAndExtraColumns) {
  std::istringstream in("system\tseg_id\tf1\tprecision\trecall\nA\t1\t0.5\t0.4\t0.6\nB\t1\t0.25\n");
  const auto m = parse_scores_tsv(in, "s.tsv");
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m.at({"A", "1"}), 0.5);
  EXPECT_EQ(m.at({"B", "1"}), 0.25);
}

TEST(ScoresTsvTest, ErrorsCarryLineNumbers) {
  std::istringstream dup("A\t1\t0.5\nA\t1\t0.6\n");
  try {
    parse_scores_tsv(dup, "s.tsv");
    FAIL() << "expected an error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("s.tsv:2"), std::string::npos) << e.what();
  }
  std::istringstream bad("A\t1\tabc\n");
  EXPECT_THROW(parse_scores_tsv(bad, "s"), ValidationError);
  std::istringstream short_row("A\t1\n");
  EXPECT_THROW(parse_scores_tsv(short_row, "s"), ValidationError);
  EXPECT_THROW(load_scores_tsv("/nonexistent/robeval/s.tsv"), IoError);
}

}  // namespace
}  // namespace robeval
