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

#include "judgerank/btelo.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "judgerank/simjudge.h"

namespace judgerank {
namespace {

double Logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

WinMatrix Matrix(std::vector<std::vector<double>> rows) {
  std::vector<ModelId> models;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    models.push_back(std::string(1, static_cast<char>('a' + i)));
  }
  WinMatrix w(models);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows.size(); ++j) w.at(i, j) = rows[i][j];
  }
  return w;
}

WinMatrix RandomMatrix(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 20.0);
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) rows[i][j] = u(rng);
    }
  }
  return Matrix(rows);
}

TEST(FitBradleyTerry, TwoPlayerClosedForm) {
  BtFit fit = FitBradleyTerry(Matrix({{0, 3}, {1, 0}}));
  EXPECT_TRUE(fit.converged);
  EXPECT_NEAR(fit.beta[0] - fit.beta[1], std::log(3.0), 1e-9);
  EXPECT_NEAR(fit.beta[0] + fit.beta[1], 0.0, 1e-15);
}

TEST(FitBradleyTerry, SymmetricMatrixGivesZero) {
  BtFit fit = FitBradleyTerry(Matrix({{0, 2, 5}, {2, 0, 1}, {5, 1, 0}}));
  for (double b : fit.beta) EXPECT_NEAR(b, 0.0, 1e-12);
}

TEST(FitBradleyTerry, ScaleInvariant) {
  std::mt19937_64 rng(4);
  WinMatrix w = RandomMatrix(6, rng);
  BtFit a = FitBradleyTerry(w);
  BtFit b = FitBradleyTerry(w.Scaled(10.0));
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(a.beta[i], b.beta[i], 1e-9);
}

TEST(FitBradleyTerry, StationaryPointAndCentered) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    WinMatrix w = RandomMatrix(8, rng);
    BtFit fit = FitBradleyTerry(w);
    EXPECT_NEAR(std::accumulate(fit.beta.begin(), fit.beta.end(), 0.0), 0.0,
                1e-12);
    EXPECT_LT(fit.final_grad_norm, 1e-7);
    // Finite-difference gradient of the log-likelihood vanishes too.
    const double h = 1e-5;
    for (std::size_t i = 0; i < 8; ++i) {
      std::vector<double> up = fit.beta, down = fit.beta;
      up[i] += h;
      down[i] -= h;
      double fd = (BtLogLikelihood(w, up) - BtLogLikelihood(w, down)) / (2 * h);
      EXPECT_NEAR(fd, 0.0, 1e-5);
    }
  }
}

TEST(FitBradleyTerry, AnalyticGradientMatchesFiniteDifference) {
  std::mt19937_64 rng(6);
  WinMatrix w = RandomMatrix(5, rng);
  std::vector<double> beta = {0.3, -0.2, 1.0, -0.7, 0.1};
  std::vector<double> grad = BtGradient(w, beta);
  const double h = 1e-6;
  for (std::size_t i = 0; i < 5; ++i) {
    std::vector<double> up = beta, down = beta;
    up[i] += h;
    down[i] -= h;
    EXPECT_NEAR(grad[i],
                (BtLogLikelihood(w, up) - BtLogLikelihood(w, down)) / (2 * h),
                1e-5);
  }
}

TEST(FitBradleyTerry, Deterministic) {
  std::mt19937_64 rng(7);
  WinMatrix w = RandomMatrix(10, rng);
  EXPECT_EQ(FitBradleyTerry(w).beta, FitBradleyTerry(w).beta);
}

TEST(FitBradleyTerry, MonotoneInWins) {
  double prev = -1e9;
  for (double wins = 1.0; wins <= 10.0; wins += 1.0) {
    BtFit fit = FitBradleyTerry(Matrix({{0, wins}, {2, 0}}));
    double gap = fit.beta[0] - fit.beta[1];
    EXPECT_GT(gap, prev);
    prev = gap;
  }
}

TEST(FitBradleyTerry, PermutationEquivariant) {
  std::mt19937_64 rng(8);
  WinMatrix w = RandomMatrix(5, rng);
  BtFit fit = FitBradleyTerry(w);
  std::vector<ModelId> order = {"d", "b", "e", "a", "c"};
  BtFit permuted = FitBradleyTerry(w.Restrict(order));
  for (const ModelId& m : order) {
    EXPECT_NEAR(fit.BetaOf(m), permuted.BetaOf(m), 1e-9);
  }
}

TEST(FitBradleyTerry, DisconnectedGraphIsUnidentifiable) {
  try {
    FitBradleyTerry(Matrix({{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 2}, {0, 0, 1, 0}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnidentifiable);
    EXPECT_NE(std::string(e.what()).find("{a, b}"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("{c, d}"), std::string::npos);
  }
}

TEST(FitBradleyTerry, AllLossModelIsNonConverged) {
  WinMatrix w = Matrix({{0, 3}, {0, 0}});
  try {
    FitBradleyTerry(w);
    FAIL();
  } catch (const NonConvergenceError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonConvergence);
    EXPECT_FALSE(e.partial_fit().converged);
    EXPECT_TRUE(std::isfinite(e.partial_fit().beta[1]));
  }
  FitOptions lenient;
  lenient.require_convergence = false;
  BtFit fit = FitBradleyTerry(w, lenient);
  EXPECT_FALSE(fit.converged);
  EXPECT_GT(fit.beta[0], fit.beta[1]);
}

TEST(FitBradleyTerry, IterationCapRaises) {
  std::mt19937_64 rng(9);
  FitOptions options;
  options.max_iter = 1;
  EXPECT_THROW(FitBradleyTerry(RandomMatrix(6, rng), options),
               NonConvergenceError);
}

TEST(FitBradleyTerry, RecoversGeneratingGaps) {
  std::vector<double> gamma = {1.2, 0.7, 0.1, -0.4, -1.6};
  SimConfig cfg = MakeSimConfig(gamma, 30, 11);
  WinMatrix w = BuildWinMatrix(AggregateSamples(Generate(cfg)), LabelScheme::kSoft);
  BtFit fit = FitBradleyTerry(w);
  double mean = std::accumulate(gamma.begin(), gamma.end(), 0.0) / 5.0;
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_NEAR(fit.BetaOf(cfg.models[i]), gamma[i] - mean, 1e-3);
  }
}

TEST(ToElo, Conversion) {
  BtFit fit;
  fit.models = {"a", "b"};
  fit.beta = {std::log(10.0) / 2, -std::log(10.0) / 2};
  EloTable t = ToElo(fit);
  EXPECT_EQ(t.anchor_model, "b");
  EXPECT_EQ(t.EloOf("b"), 800.0);
  EXPECT_NEAR(t.EloOf("a"), 1200.0, 1e-9);
  EloTable pinned = ToElo(fit, {"a", 1000.0});
  EXPECT_EQ(pinned.EloOf("a"), 1000.0);
  EXPECT_NEAR(pinned.EloOf("b"), 600.0, 1e-9);
  EXPECT_THROW(ToElo(fit, {"zzz", 800.0}), Error);
}

TEST(ToElo, EqualBetasAllAtAnchor) {
  BtFit fit;
  fit.models = {"a", "b", "c"};
  fit.beta = {0.0, 0.0, 0.0};
  for (double xi : ToElo(fit).xi) EXPECT_EQ(xi, 800.0);
}

TEST(ToElo, PreservesOrderAndMinimumIsAnchor) {
  std::mt19937_64 rng(10);
  WinMatrix w = RandomMatrix(20, rng);
  BtFit fit = FitBradleyTerry(w);
  EloTable t = ToElo(fit);
  EXPECT_EQ(*std::min_element(t.xi.begin(), t.xi.end()), 800.0);
  std::vector<RankedModel> by_beta;
  for (std::size_t i = 0; i < 20; ++i) by_beta.push_back({fit.models[i], fit.beta[i]});
  EXPECT_EQ(t.ToRanking().Order(), Ranking::FromScores(by_beta).Order());
}

TEST(EloWinProbability, Examples) {
  EXPECT_EQ(EloWinProbability(1000, 1000), 0.5);
  EXPECT_NEAR(EloWinProbability(1400, 1000), 10.0 / 11.0, 1e-15);
  EXPECT_NEAR(EloWinProbability(1234, 987) + EloWinProbability(987, 1234), 1.0,
              1e-15);
}

TEST(EloWinProbability, MatchesFittedModel) {
  std::mt19937_64 rng(12);
  WinMatrix w = RandomMatrix(6, rng);
  BtFit fit = FitBradleyTerry(w);
  EloTable t = ToElo(fit);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) {
      EXPECT_NEAR(EloWinProbability(t.xi[i], t.xi[j]),
                  Logistic(fit.beta[i] - fit.beta[j]), 1e-12);
    }
  }
}

TEST(BaselineRating, Examples) {
  PreferenceDataset ds = PreferenceDataset::FromPairs(
      {MakePairPreference("i1", "a", "base", 0.6, std::nullopt),
       MakePairPreference("i2", "a", "base", 0.8, std::nullopt),
       MakePairPreference("i1", "base", "c", 0.5, 0.5)});
  Ranking r = BaselineRating(ds, "base");
  EXPECT_NEAR(r.ScoreOf("a"), 0.7, 1e-15);
  EXPECT_EQ(r.ScoreOf("base"), 0.5);
  EXPECT_EQ(r.ScoreOf("c"), 0.5);
  EXPECT_EQ(r.Order().front(), "a");
}

TEST(BaselineRating, MissingComparison) {
  PreferenceDataset ds = PreferenceDataset::FromPairs(
      {MakePairPreference("i1", "a", "base", 0.6, std::nullopt),
       MakePairPreference("i1", "a", "c", 0.6, std::nullopt)});
  try {
    BaselineRating(ds, "base");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingComparison);
    EXPECT_NE(std::string(e.what()).find("c"), std::string::npos);
  }
}

}  // namespace
}  // namespace judgerank
