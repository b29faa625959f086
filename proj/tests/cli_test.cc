// Copyright 2026 The Judgerank Authors.
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

#include "cli.h"

#include <gtest/gtest.h>

#include <sstream>

#include "json.hpp"
#include "judgerank/dataset_io.h"
#include "judgerank/text_io.h"
#include "test_util.h"

namespace judgerank {
namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "judgerank");
  std::ostringstream out, err;
  int code = cli::Run(args, out, err);
  return {code, out.str(), err.str()};
}

// Compares two CSV files cell by cell: numbers within `tol`, text exactly.
void ExpectCsvNear(const std::filesystem::path& actual,
                   const std::filesystem::path& expected, double tol) {
  std::istringstream a(ReadFile(actual)), e(ReadFile(expected));
  std::string la, le;
  std::size_t line = 0;
  while (std::getline(e, le)) {
    ++line;
    ASSERT_TRUE(std::getline(a, la)) << "missing line " << line;
    auto fa = SplitCsvLine(la, line), fe = SplitCsvLine(le, line);
    ASSERT_EQ(fa.size(), fe.size()) << "line " << line;
    for (std::size_t k = 0; k < fe.size(); ++k) {
      char* end = nullptr;
      double ve = std::strtod(fe[k].c_str(), &end);
      bool numeric = !fe[k].empty() && *end == '\0';
      if (numeric) {
        EXPECT_NEAR(ParseDouble(fa[k], line), ve, tol) << "line " << line;
      } else {
        EXPECT_EQ(fa[k], fe[k]) << "line " << line;
      }
    }
  }
  EXPECT_FALSE(std::getline(a, la)) << "extra line in " << actual;
}

TEST(Cli, MetricsOnToyDataMatchesGoldens) {
  testing::TempDir dir;
  CliResult r = RunCli({"metrics", "--dataset",
                        (testing::TestRoot() / "data" / "toy_samples.jsonl").string(),
                        "--triplet", "A,B,C", "--out", dir.path().string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("PNT=40.0000%"), std::string::npos) << r.out;
  ExpectCsvNear(dir / "triplet_metrics.csv",
                testing::TestRoot() / "golden" / "toy_triplet_metrics.csv", 1e-12);
  ExpectCsvNear(dir / "summary.csv",
                testing::TestRoot() / "golden" / "toy_summary.csv", 1e-12);
  auto manifest = nlohmann::json::parse(ReadFile(dir / "manifest.json"));
  EXPECT_EQ(manifest["subcommand"], "metrics");
  EXPECT_EQ(manifest["inputs"].size(), 1u);
}

TEST(Cli, SimulateTournamentsCorrelatePipeline) {
  testing::TempDir dir;
  std::string sim = (dir / "sim").string();
  CliResult s = RunCli({"simulate", "--models", "6", "--instructions", "20",
                        "--seed", "3", "--out", sim});
  ASSERT_EQ(s.code, 0) << s.err;
  for (const char* f : {"sim_config.json", "samples.jsonl", "dataset.csv",
                        "ground_truth.csv", "manifest.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / "sim" / f)) << f;
  }
  PreferenceDataset ds = LoadDataset(dir / "sim" / "dataset.csv");
  EXPECT_EQ(ds.models().size(), 6u);
  EXPECT_EQ(ds.size(), 15u * 20u);

  std::string rr = (dir / "rr").string();
  ASSERT_EQ(RunCli({"round-robin", "--dataset", sim + "/dataset.csv", "--out", rr}).code, 0);
  std::string sw = (dir / "swim").string();
  CliResult swim = RunCli({"swim", "--sim-config", sim + "/sim_config.json",
                           "--seed", "1", "--out", sw});
  ASSERT_EQ(swim.code, 0) << swim.err;
  EXPECT_EQ(ReadFile(dir / "swim" / "schedule.csv").size() > 0, true);

  CliResult c = RunCli({"correlate", rr + "/ranking.csv", sw + "/ranking.csv"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(c.out, "spearman=1.000000 kendall=1.000000\n");
  CliResult g = RunCli({"correlate", rr + "/ranking.csv",
                        sim + "/ground_truth.csv", "--out", (dir / "corr").string()});
  ASSERT_EQ(g.code, 0) << g.err;
  EXPECT_EQ(g.out, "spearman=1.000000 kendall=1.000000\n");
  EXPECT_TRUE(std::filesystem::exists(dir / "corr" / "correlation.csv"));

  // Same seed, same bytes.
  std::string sw2 = (dir / "swim2").string();
  ASSERT_EQ(RunCli({"swim", "--sim-config", sim + "/sim_config.json", "--seed",
                    "1", "--out", sw2}).code, 0);
  for (const char* f : {"schedule.csv", "elo.csv", "ranking.csv", "win_matrix.csv"}) {
    EXPECT_EQ(ReadFile(dir / "swim" / f), ReadFile(dir / "swim2" / f)) << f;
  }
}

TEST(Cli, IdenticalRankingsCorrelatePerfectly) {
  testing::TempDir dir;
  WriteFileAtomic(dir / "r.csv", "model,score\na,3\nb,2\nc,1\n");
  CliResult r = RunCli({"correlate", (dir / "r.csv").string(), (dir / "r.csv").string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "spearman=1.000000 kendall=1.000000\n");
}

TEST(Cli, OtherSubcommandsWriteTheirFiles) {
  testing::TempDir dir;
  std::string sim = (dir / "sim").string();
  ASSERT_EQ(RunCli({"simulate", "--models", "3", "--instructions", "12",
                    "--cyclic", "1.5", "--bias", "0.5", "--noise", "0.3",
                    "--out", sim}).code, 0);
  std::string data = sim + "/dataset.csv";
  std::string ing = (dir / "ingest").string();
  ASSERT_EQ(RunCli({"ingest", "--samples", sim + "/samples.jsonl", "--out", ing}).code, 0);
  EXPECT_EQ(ReadFile(dir / "ingest" / "dataset.csv"), ReadFile(sim + "/dataset.csv"));

  std::string b = (dir / "bias").string();
  ASSERT_EQ(RunCli({"bias", "--dataset", data, "--triplet", "m01,m02,m03", "--out", b}).code, 0);
  for (const char* f : {"consistency.csv", "position_difference.csv",
                        "partition.csv", "pd_bins.csv", "histogram.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / "bias" / f)) << f;
  }
  std::string fit = (dir / "fit").string();
  ASSERT_EQ(RunCli({"fit", "--dataset", data, "--scheme", "hard",
                    "--allow-nonconvergence", "--out", fit}).code, 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "fit" / "elo.csv"));
  std::string base = (dir / "base").string();
  ASSERT_EQ(RunCli({"baseline", "--dataset", data, "--out", base}).code, 0);
  std::string heat = (dir / "heat").string();
  ASSERT_EQ(RunCli({"metrics", "--dataset", data, "--heatmap", "--bins", "7",
                    "--out", heat}).code, 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "heat" / "heatmap.csv"));
}

TEST(Cli, ExitCodes) {
  testing::TempDir dir;
  EXPECT_EQ(RunCli({}).code, cli::kExitUsage);
  EXPECT_EQ(RunCli({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(RunCli({"metrics", "--bogus"}).code, cli::kExitUsage);
  EXPECT_EQ(RunCli({"--version"}).code, cli::kExitOk);

  WriteFileAtomic(dir / "bad.jsonl", "{oops\n");
  CliResult bad = RunCli({"metrics", "--dataset", (dir / "bad.jsonl").string(),
                          "--out", dir.path().string()});
  EXPECT_EQ(bad.code, cli::kExitValidation);
  EXPECT_NE(bad.err.find("line 1"), std::string::npos) << bad.err;

  WriteFileAtomic(dir / "split.csv",
                  "instruction_id,model_a,model_b,phi_ab,phi_ba,j_ab\n"
                  "i,a,b,0.8,0.2,0.8\ni,c,d,0.8,0.2,0.8\n");
  CliResult split = RunCli({"fit", "--dataset", (dir / "split.csv").string(),
                            "--out", dir.path().string()});
  EXPECT_EQ(split.code, cli::kExitRuntime) << split.err;
  EXPECT_NE(split.err.find("disconnected"), std::string::npos);
}

}  // namespace
}  // namespace judgerank
