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

// Runs the robeval executable end to end.

#include <sys/wait.h>

#include <cstdio>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "json.hpp"
#include "test_util.hpp"

namespace robeval {
namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

RunResult run(const std::string& args) {
  const std::string cmd = quote(ROBEVAL_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

const std::string kData = testing::data_dir().string();
const std::string kRefs = kData + "/corpus/references.jsonl";

TEST(CliTest, AttackAtZeroIsByteIdentical) {
  testing::TempDir dir;
  const auto r = run("attack --attack visual --p 0 --seed 5 --resources " + quote(kData) +
                     " --input " + quote(kRefs) + " --output " + quote((dir / "out.jsonl").string()));
  ASSERT_EQ(r.exit_code, 0) << r.out;
  EXPECT_EQ(testing::read_text(dir / "out.jsonl"), testing::read_text(kRefs));
}

TEST(CliTest, AttackText) {
  const auto r = run("attack --attack disemvowel --p 1 --text 'to an'");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "t n\n");
}

TEST(CliTest, EvaluateFixturePrintsHalf) {
  testing::TempDir dir;
  testing::write_text(dir / "j.tsv",
                      "lang_pair\tseg_id\tbetter\tworse\nx\t1\tA\tB\nx\t2\tA\tB\nx\t3\tA\tB\n"
                      "x\t4\tA\tB\n");
  testing::write_text(dir / "s.tsv",
                      "A\t1\t0.9\nB\t1\t0.1\nA\t2\t0.9\nB\t2\t0.1\nA\t3\t0.9\nB\t3\t0.1\n"
                      "A\t4\t0.1\nB\t4\t0.9\n");
  const auto r = run("evaluate --judgments " + quote((dir / "j.tsv").string()) + " --scores " +
                     quote((dir / "s.tsv").string()));
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["value"], 0.5);
  EXPECT_EQ(j["concordant"], 3);
}

TEST(CliTest, ScoreIdenticalFilesGivesOne) {
  testing::TempDir dir;
  testing::write_text(dir / "cands.jsonl",
                      "{\"seg_id\":\"1\",\"system\":\"A\",\"text\":\"a small house\"}\n"
                      "{\"seg_id\":\"2\",\"system\":\"A\",\"text\":\"the river was cold\"}\n");
  testing::write_text(dir / "refs.jsonl",
                      "{\"seg_id\":\"1\",\"text\":\"a small house\"}\n"
                      "{\"seg_id\":\"2\",\"text\":\"the river was cold\"}\n");
  const auto r = run("--out-dir " + quote(dir.path().string()) + " score --provider toy --cands " +
                     quote((dir / "cands.jsonl").string()) + " --refs " +
                     quote((dir / "refs.jsonl").string()) + " --out scores.tsv");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  std::istringstream in(testing::read_text(dir / "scores.tsv"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "system\tseg_id\tf1");
  int rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(line.substr(line.rfind('\t') + 1), "1.000000") << line;
    ++rows;
  }
  EXPECT_EQ(rows, 2);
}

TEST(CliTest, UnkStats) {
  const auto r = run("unk-stats --vocab " + quote(kData + "/vocab_30k.txt") + " --input " +
                     quote(kRefs));
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["segments"], 200);
}

TEST(CliTest, ExportSimilarity) {
  testing::TempDir dir;
  const auto r = run("export-sim --cand 'red green' --ref 'red green' --out " +
                     quote((dir / "sim.csv").string()));
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(testing::read_text(dir / "sim.csv").substr(0, 11), ",red,green\n");
}

TEST(CliTest, ExitCodes) {
  EXPECT_EQ(run("attack --attack smudge --p 0.1 --text x").exit_code, 1);
  EXPECT_EQ(run("attack --attack visual --p 2 --text x").exit_code, 1);
  EXPECT_EQ(run("no-such-command").exit_code, 1);
  EXPECT_EQ(run("").exit_code, 1);
  EXPECT_EQ(run("evaluate --judgments /nonexistent/robeval/j.tsv --scores /nonexistent/s.tsv")
                .exit_code,
            2);
  EXPECT_EQ(run("export-sim --provider remote --model m --endpoint http://127.0.0.1:9 "
                "--timeout-ms 200 --cand a --ref b --out /dev/null")
                .exit_code,
            2);
}

}  // namespace
}  // namespace robeval
