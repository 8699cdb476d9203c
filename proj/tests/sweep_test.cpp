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
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "robeval/codec.hpp"
#include "robeval/error.hpp"
#include "robeval/sweep.hpp"
#include "robeval/text.hpp"
#include "test_util.hpp"

namespace robeval {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

SweepMetric metric(const std::string& name, LayerPolicy policy) {
  SweepMetric m;
  m.name = name;
  m.metric.policy = std::move(policy);
  return m;
}

DatasetPaths bundled(const std::string& lang_pair = "toy-en") {
  const auto dir = testing::data_dir() / "corpus";
  return {lang_pair, dir / "references.jsonl", dir / "outputs.jsonl", dir / "judgments.tsv"};
}

SweepConfig small_config(const std::filesystem::path& out) {
  SweepConfig c;
  c.attacks = {AttackKind::kVisual};
  c.seeds = {7};
  c.configs = {metric("first", LayerPolicy::first()), metric("deep", LayerPolicy::fixed(3))};
  c.datasets = {bundled()};
  c.resources = testing::data_dir();
  c.out_dir = out;
  c.workers = 4;
  return c;
}

TEST(SweepConfigTest, Validation) {
  testing::TempDir dir;
  const auto ok = small_config(dir.path());
  EXPECT_NO_THROW(ok.validate());
  auto c = ok;
  c.p_grid = {0.0, 0.2, 0.1};
  EXPECT_THROW(c.validate(), ValidationError);
  c = ok;
  c.p_grid = {0.0, 1.5};
  EXPECT_THROW(c.validate(), ValidationError);
  c = ok;
  c.seeds = {1, 1};
  EXPECT_THROW(c.validate(), ValidationError);
  c = ok;
  c.configs.push_back(c.configs[0]);
  EXPECT_THROW(c.validate(), ValidationError);
  c = ok;
  c.configs[0].name = "../escape";
  EXPECT_THROW(c.validate(), ValidationError);
  c = ok;
  c.attacks.clear();
  EXPECT_THROW(c.validate(), ValidationError);
  c = ok;
  c.out_dir.clear();
  EXPECT_THROW(c.validate(), ValidationError);
}

TEST(SweepConfigTest, FromJsonResolvesRelativePaths) {
  const nlohmann::json j = {
      {"attacks", {"visual", "intrude"}},
      {"seeds", {1, 2}},
      {"configs",
       {{{"provider", "toy"}, {"layer", "first"}},
        {{"name", "cached"}, {"provider", {{"kind", "toy"}, {"cache", "c.jsonl"}}}, {"layer", "mean"}}}},
      {"datasets",
       {{{"lang_pair", "de-en"},
         {"references", "r.jsonl"},
         {"outputs", "o.jsonl"},
         {"judgments", "j.tsv"}}}},
      {"out_dir", "out"},
      {"ties", "drop"}};
  const auto c = SweepConfig::from_json(j, "/base");
  EXPECT_EQ(c.attacks, (std::vector<AttackKind>{AttackKind::kVisual, AttackKind::kIntrude}));
  EXPECT_EQ(c.p_grid, (std::vector<double>{0.0, 0.1, 0.2, 0.3}));
  EXPECT_EQ(c.configs[0].name, "toy-toy-first");
  EXPECT_EQ(c.configs[1].name, "cached");
  EXPECT_EQ(c.configs[1].metric.provider.cache_path, std::filesystem::path("/base/c.jsonl"));
  EXPECT_EQ(c.configs[1].metric.policy, LayerPolicy::mean_all());
  EXPECT_EQ(c.datasets[0].references, std::filesystem::path("/base/r.jsonl"));
  EXPECT_EQ(c.out_dir, std::filesystem::path("/base/out"));
  EXPECT_EQ(c.ties, TieMode::kDrop);

  auto bad = j;
  bad["colour"] = "blue";
  EXPECT_THROW(SweepConfig::from_json(bad, "/base"), ValidationError);
  bad = j;
  bad["attacks"] = {"smudge"};
  EXPECT_THROW(SweepConfig::from_json(bad, "/base"), ValidationError);
  bad = j;
  bad.erase("seeds");
  EXPECT_THROW(SweepConfig::from_json(bad, "/base"), ValidationError);
}

TEST(CellDirTest, Layout) {
  EXPECT_EQ(cell_dir(AttackKind::kVisual, 0.1, 3, "de-en"),
            std::filesystem::path("cells/visual/0.1/3/de-en"));
  EXPECT_EQ(cell_dir(AttackKind::kKeyboardTypo, 0.0, 0, "x"),
            std::filesystem::path("cells/keyboard-typo/0/0/x"));
}

class SweepRunTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::TempDir;
    config_ = new SweepConfig(small_config(dir_->path() / "a"));
    result_ = new SweepResult(run_sweep(*config_));
    emit_report(result_->rows, *config_);
  }
  static void TearDownTestSuite() {
    delete result_;
    delete config_;
    delete dir_;
  }

  static testing::TempDir* dir_;
  static SweepConfig* config_;
  static SweepResult* result_;
};

testing::TempDir* SweepRunTest::dir_ = nullptr;
SweepConfig* SweepRunTest::config_ = nullptr;
SweepResult* SweepRunTest::result_ = nullptr;

TEST_F(SweepRunTest, GridArithmetic) {
  EXPECT_TRUE(result_->errors.empty());
  ASSERT_EQ(result_->rows.size(), 8u);
  // Grid order: p outer, config inner.
  EXPECT_EQ(result_->rows[0].config, "first");
  EXPECT_EQ(result_->rows[1].config, "deep");
  EXPECT_EQ(result_->rows[2].p, 0.1);
  for (const auto& r : result_->rows) {
    EXPECT_EQ(r.attack, "visual");
    EXPECT_EQ(r.lang_pair, "toy-en");
    EXPECT_GT(r.n_pairs, 1000u);
  }
  const auto errors = lines_of(testing::read_text(config_->out_dir / "errors.tsv"));
  ASSERT_EQ(errors.size(), 1u);
  EXPECT_EQ(errors[0], "attack\tp\tseed\tlang_pair\tconfig\tmessage");
}

TEST_F(SweepRunTest, CleanCellKeepsReferences) {
  // At p = 0 the references are untouched, so the saved refs equal the input.
  const auto refs = testing::read_text(config_->out_dir /
                                       cell_dir(AttackKind::kVisual, 0.0, 7, "toy-en") /
                                       "refs.jsonl");
  EXPECT_EQ(refs, testing::read_text(testing::data_dir() / "corpus" / "references.jsonl"));
  EXPECT_LT(result_->rows[0].unk_per_segment, result_->rows.back().unk_per_segment);
}

TEST_F(SweepRunTest, RerunIsByteIdentical) {
  auto again = *config_;
  again.out_dir = dir_->path() / "b";
  again.workers = 1;
  emit_report(run_sweep(again).rows, again);
  for (const char* f : {"sweep.csv", "summary.md", "curves.csv", "errors.tsv"}) {
    EXPECT_EQ(testing::read_text(config_->out_dir / f), testing::read_text(again.out_dir / f))
        << f;
  }
}

TEST_F(SweepRunTest, KendallRecomputableFromCellFiles) {
  const auto judgments =
      load_judgments(testing::data_dir() / "corpus" / "judgments.tsv");
  for (const auto& row : result_->rows) {
    const auto path = config_->out_dir /
                      cell_dir(parse_attack_kind(row.attack), row.p, row.seed, row.lang_pair) /
                      (row.config + ".scores.tsv");
    const ScoreMap scores = load_scores_tsv(path);
    // Independent count straight from the persisted scores.
    double c = 0, d = 0, t = 0;
    for (const auto& j : judgments) {
      const double b = scores.at({j.better_system, j.seg_id});
      const double w = scores.at({j.worse_system, j.seg_id});
      if (b > w) c += 1;
      else if (b < w) d += 1;
      else t += 1;
    }
    EXPECT_EQ((c - d) / (c + d + t), row.kendall) << path;
    double f1 = 0;
    for (const auto& [key, v] : scores) f1 += v;
    EXPECT_NEAR(f1 / static_cast<double>(scores.size()), row.mean_f1, 1e-12);
  }
}

TEST_F(SweepRunTest, SummaryHasOneLinePerConfig) {
  const auto lines = lines_of(testing::read_text(config_->out_dir / "summary.md"));
  size_t data_lines = 0;
  for (const auto& l : lines) {
    if (l.rfind("| ", 0) == 0 && l.rfind("| config", 0) != 0) ++data_lines;
  }
  EXPECT_EQ(data_lines, config_->configs.size());
}

TEST_F(SweepRunTest, CurvesHaveConfigTimesP) {
  const auto lines = lines_of(testing::read_text(config_->out_dir / "curves.csv"));
  ASSERT_EQ(lines.size(), 1 + config_->configs.size() * config_->p_grid.size());
  EXPECT_EQ(lines[0], "config,p,mean_kendall,mean_f1,unk_per_segment,n_rows");
  for (size_t i = 1; i < lines.size(); ++i) EXPECT_EQ(split(lines[i], ',').back(), "1");
}

TEST_F(SweepRunTest, MeanF1FallsWithP) {
  for (const auto& name : {"first", "deep"}) {
    double prev = 2.0;
    for (const auto& r : result_->rows) {
      if (r.config != name) continue;
      EXPECT_LE(r.mean_f1, prev) << name << " p=" << r.p;
      prev = r.mean_f1;
    }
  }
}

TEST(SweepSummaryTest, MatchesReaggregationOfSweepCsv) {
  testing::TempDir dir;
  // A second language pair: same corpus, relabelled judgments.
  std::string judg = testing::read_text(testing::data_dir() / "corpus" / "judgments.tsv");
  std::string relabelled;
  for (const auto& line : lines_of(judg)) {
    relabelled += (line.rfind("toy-en\t", 0) == 0 ? "xx-en" + line.substr(6) : line) + "\n";
  }
  testing::write_text(dir / "j2.tsv", relabelled);
  auto cfg = small_config(dir / "out");
  auto second = bundled("xx-en");
  second.judgments = dir / "j2.tsv";
  cfg.datasets.push_back(second);
  cfg.attacks = {AttackKind::kDisemvowel, AttackKind::kKeyboardTypo};
  cfg.p_grid = {0.0, 0.3};
  cfg.seeds = {1, 2};
  const auto result = run_sweep(cfg);
  ASSERT_TRUE(result.errors.empty());
  ASSERT_EQ(result.rows.size(), 2u * 2u * 2u * 2u * 2u);
  emit_report(result.rows, cfg);

  // Re-aggregate sweep.csv by hand.
  const auto csv = lines_of(testing::read_text(cfg.out_dir / "sweep.csv"));
  std::map<std::string, std::map<std::string, std::pair<double, int>>> acc;
  for (size_t i = 1; i < csv.size(); ++i) {
    const auto f = split(csv[i], ',');
    ASSERT_EQ(f.size(), 12u);
    auto& cell = acc[f[2]][f[6]];
    cell.first += std::stod(f[8]);
    cell.second += 1;
  }
  std::map<std::string, std::vector<double>> expect;
  for (const auto& [config, per_pair] : acc) {
    double total = 0;
    for (const char* lp : {"toy-en", "xx-en"}) {
      const auto& [sum, n] = per_pair.at(lp);
      EXPECT_EQ(n, 8);
      expect[config].push_back(sum / n);
      total += sum / n;
    }
    expect[config].push_back(total / 2);
  }

  const auto md = lines_of(testing::read_text(cfg.out_dir / "summary.md"));
  size_t checked = 0;
  for (const auto& l : md) {
    if (l.rfind("| ", 0) != 0 || l.rfind("| config", 0) == 0) continue;
    auto cells = split(l, '|');
    // cells: "", " name ", " v1 ", " v2 ", " avg ", ""
    ASSERT_EQ(cells.size(), 6u) << l;
    const std::string name(trim(cells[1]));
    for (size_t k = 0; k < 3; ++k) {
      EXPECT_NEAR(std::stod(std::string(trim(cells[2 + k]))), expect.at(name)[k], 2e-6) << l;
    }
    ++checked;
  }
  EXPECT_EQ(checked, 2u);
}

TEST(SweepErrorTest, BadDatasetRecordedNotFatal) {
  testing::TempDir dir;
  auto cfg = small_config(dir / "out");
  cfg.p_grid = {0.0};
  cfg.configs = {metric("first", LayerPolicy::first())};
  testing::write_text(dir / "j.tsv", "lang_pair\tseg_id\tbetter\tworse\n");
  auto empty = bundled("zz-en");
  empty.judgments = dir / "j.tsv";
  cfg.datasets.push_back(empty);
  const auto result = run_sweep(cfg);
  EXPECT_EQ(result.rows.size(), 1u);
  ASSERT_EQ(result.errors.size(), 1u);
  EXPECT_EQ(result.errors[0].lang_pair, "zz-en");
  EXPECT_NE(result.errors[0].message.find("zero usable pairs"), std::string::npos);
  EXPECT_EQ(lines_of(testing::read_text(cfg.out_dir / "errors.tsv")).size(), 2u);
  EXPECT_THROW(emit_report({}, cfg), ValidationError);
}

}  // namespace
}  // namespace robeval
