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

#include "judgerank/simjudge.h"

#include <gtest/gtest.h>

#include <cmath>

#include "judgerank/bias.h"
#include "judgerank/errors.h"
#include "judgerank/transitivity.h"

namespace judgerank {
namespace {

double Logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

TEST(Generate, EqualQualityGivesHalf) {
  SimConfig cfg = MakeSimConfig({0.3, 0.3}, 4, 1);
  auto samples = Generate(cfg);
  EXPECT_EQ(samples.size(), 4u * 2 * 2);
  for (const auto& s : samples) EXPECT_EQ(s.p_first, 0.5);
}

TEST(Generate, FormulaAndOrdering) {
  SimConfig cfg = MakeSimConfig({1.0, 0.0, -0.5}, 2, 3);
  cfg.bias_b = 0.4;
  auto samples = Generate(cfg);
  ASSERT_EQ(samples.size(), 2u * 3 * 2 * 2);
  // Instruction, then pair, then order, then call.
  EXPECT_EQ(samples[0].instruction_id, "inst-0000");
  EXPECT_EQ(samples[0].model_first, "m01");
  EXPECT_EQ(samples[0].model_second, "m02");
  EXPECT_EQ(samples[0].call_index, 0);
  EXPECT_EQ(samples[1].call_index, 1);
  EXPECT_EQ(samples[2].model_first, "m02");
  EXPECT_EQ(samples[0].p_first, Logistic(1.0 - 0.0 + 0.4));
  EXPECT_EQ(samples[2].p_first, Logistic(0.0 - 1.0 + 0.4));
  EXPECT_EQ(samples[0].judge_id, "sim");
}

TEST(Generate, RockPaperScissorsCycle) {
  SimConfig cfg = MakeSimConfig({0.0, 0.0, 0.0}, 5, 1);
  cfg.cyclic_c = 2.2;
  cfg.skew = RockPaperScissorsSkew();
  PreferenceDataset ds = AggregateSamples(Generate(cfg));
  for (const InstructionId& id : ds.instructions()) {
    EXPECT_NEAR(*ds.Preference(id, "m01", "m02"), Logistic(2.2), 1e-15);
    EXPECT_NEAR(*ds.Preference(id, "m02", "m03"), Logistic(2.2), 1e-15);
    EXPECT_NEAR(*ds.Preference(id, "m03", "m01"), Logistic(2.2), 1e-15);
  }
  EXPECT_NEAR(Logistic(2.2), 0.90, 0.005);
  DatasetMetrics m = ComputeDatasetMetrics(ds, {"m01", "m02", "m03"});
  EXPECT_EQ(m.pnt_percent, 100.0);
}

TEST(Generate, ExactBtDataIsTransitive) {
  SimConfig cfg = MakeSimConfig({0.9, 0.4, 0.0, -0.3, -1.0}, 20, 5, 0.7);
  PreferenceDataset ds = AggregateSamples(Generate(cfg));
  for (const Triplet& t : AllCombinations(ds.models())) {
    DatasetMetrics m = ComputeDatasetMetrics(ds, t, TieThresholds::Strict());
    EXPECT_EQ(m.pnt_percent, 0.0);
    EXPECT_LE(m.mean_sntd, 1e-9);
  }
  for (const auto& [key, pair] : ds.pairs()) {
    EXPECT_NEAR(PositionDifference(pair), 0.0, 1e-15);
  }
}

TEST(Generate, DeterministicPerSeed) {
  SimConfig cfg = MakeSimConfig({0.5, 0.0, -0.5}, 6, 9, 0.3);
  cfg.noise_sd = 0.7;
  EXPECT_EQ(Generate(cfg), Generate(cfg));
  SimConfig other = cfg;
  other.seed = 10;
  EXPECT_NE(Generate(cfg), Generate(other));
}

TEST(SimulatePair, MatchesGenerate) {
  SimConfig cfg = MakeSimConfig({0.5, 0.0, -0.5}, 3, 2, 0.4);
  cfg.noise_sd = 0.2;
  auto all = Generate(cfg);
  auto pair = SimulatePair(cfg, 1, 0, 2);
  std::size_t found = 0;
  for (const auto& s : pair) {
    for (const auto& t : all) found += (s == t);
  }
  EXPECT_EQ(found, pair.size());
}

TEST(SimConfig, RejectsNonAntisymmetricSkew) {
  SimConfig cfg = MakeSimConfig({0.0, 0.0, 0.0}, 2, 1);
  cfg.skew = RockPaperScissorsSkew();
  cfg.skew[0][1] = 0.9;
  try {
    Generate(cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kValidation);
  }
  cfg.skew = RandomSkew(3, 4);
  EXPECT_NO_THROW(cfg.Validate());
}

TEST(SimConfig, RejectsNegativeNoise) {
  SimConfig cfg = MakeSimConfig({0.0, 1.0}, 2, 1);
  cfg.noise_sd = -1.0;
  EXPECT_THROW(cfg.Validate(), Error);
}

TEST(SimConfig, JsonRoundTrip) {
  SimConfig cfg = MakeSimConfig({0.1, 0.2, 0.3}, 4, 77, 0.5);
  cfg.skew = RandomSkew(3, 77);
  cfg.bias_b = 0.25;
  cfg.cyclic_c = 1.5;
  cfg.noise_sd = 0.1;
  SimConfig back = SimConfigFromJson(SimConfigToJson(cfg));
  EXPECT_EQ(Generate(back), Generate(cfg));
  EXPECT_EQ(SimConfigToJson(back), SimConfigToJson(cfg));
  EXPECT_THROW(SimConfigFromJson("{nope"), Error);
}

TEST(GroundTruthRanking, Examples) {
  SimConfig cfg = MakeSimConfig({3, 2, 1}, 2, 1);
  GroundTruth g = GroundTruthRanking(cfg);
  EXPECT_EQ(g.ranking.Order(), (std::vector<ModelId>{"m01", "m02", "m03"}));
  EXPECT_FALSE(g.degenerate);

  SimConfig tied = MakeSimConfig({1, 1, 0}, 2, 1);
  GroundTruth t = GroundTruthRanking(tied);
  EXPECT_TRUE(t.degenerate);
  EXPECT_EQ(t.ranking.Order().front(), "m01");

  SimConfig swapped = MakeSimConfig({1, 3, 2}, 2, 1);
  EXPECT_EQ(GroundTruthRanking(swapped).ranking.Order(),
            (std::vector<ModelId>{"m02", "m03", "m01"}));
}

TEST(Generate, PositionDifferenceGrowsWithBias) {
  double prev = -1.0;
  for (double b : {0.0, 0.5, 1.0, 2.0, 3.0}) {
    SimConfig cfg = MakeSimConfig({0.2, 0.0, -0.2}, 30, 4, 0.3);
    cfg.bias_b = b;
    cfg.noise_sd = 0.3;
    PreferenceDataset ds = AggregateSamples(Generate(cfg));
    double sum = 0.0;
    for (const auto& [key, pair] : ds.pairs()) sum += PositionDifference(pair);
    double mean = sum / static_cast<double>(ds.size());
    EXPECT_GE(mean, prev) << b;
    prev = mean;
  }
}

TEST(SimulatedEvaluator, ReturnsCanonicalRecord) {
  SimConfig cfg = MakeSimConfig({1.0, 0.0}, 2, 1);
  SimulatedEvaluator e(cfg);
  PairPreference p = e.Evaluate("m02", "m01", "inst-0001");
  EXPECT_EQ(p.model_a, "m01");
  EXPECT_NEAR(p.j_ab, Logistic(1.0), 1e-15);
  EXPECT_EQ(e.evaluations(), 1);
}

}  // namespace
}  // namespace judgerank
