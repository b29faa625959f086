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

#ifndef JUDGERANK_BTELO_H_
#define JUDGERANK_BTELO_H_

// Bradley-Terry fitting and Elo conversion.
//
// Given a win matrix W, the fit maximizes
//
//   sum_{i != j} W(i, j) * log sigmoid(beta_i - beta_j)
//
// with the minorize-maximize (Zermelo) iteration on strengths p_i = e^beta_i:
//
//   p_i <- W_i / sum_{j != i} N_ij / (p_i + p_j),   N_ij = W(i,j) + W(j,i)
//
// followed by recentring so that sum(beta) = 0. Elo ratings are the affine
// image xi = anchor + (400 / ln 10) * (beta - beta_anchor), under which
// 1 / (1 + 10^((xi_j - xi_i) / 400)) equals sigmoid(beta_i - beta_j).

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "judgerank/core.h"
#include "judgerank/errors.h"

namespace judgerank {

inline constexpr double kEloScale = 400.0 / 2.302585092994045684;  // ln 10
inline constexpr double kDefaultAnchorElo = 800.0;

struct BtFit {
  std::vector<ModelId> models;
  std::vector<double> beta;
  bool converged = false;
  int iterations = 0;
  // Euclidean norm of the log-likelihood gradient at `beta`.
  double final_grad_norm = 0.0;

  double BetaOf(const ModelId& model) const;
  std::optional<std::size_t> IndexOf(const ModelId& model) const;
};

struct FitOptions {
  // Stop when the largest change of any beta in one sweep is below this.
  double tol = 1e-10;
  int max_iter = 10000;
  // Throw NonConvergenceError instead of returning an unconverged fit.
  bool require_convergence = true;
  // Starting point, aligned with the matrix models (recentred before use).
  std::optional<std::vector<double>> initial_beta;
};

class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& message, BtFit partial)
      : Error(ErrorCode::kNonConvergence, message),
        partial_(std::move(partial)) {}

  const BtFit& partial_fit() const { return partial_; }

 private:
  BtFit partial_;
};

// Connected components of the comparison graph (edges where N_ij > 0), each
// as a sorted list of models, ordered by their first member.
std::vector<std::vector<ModelId>> ComparisonComponents(const WinMatrix& w);

// Throws Error(kUnidentifiable) when the comparison graph is disconnected,
// Error(kConfiguration) for tol <= 0 or max_iter < 1, and
// NonConvergenceError when max_iter is reached (unless
// require_convergence is false). A model with no wins (or no losses) has no
// finite optimum; its beta is held at a finite floor (ceiling) and the fit
// is reported as not converged.
BtFit FitBradleyTerry(const WinMatrix& w, const FitOptions& options = {});

// Log-likelihood of `beta` under `w`.
double BtLogLikelihood(const WinMatrix& w, std::span<const double> beta);

// Gradient of the log-likelihood: sum_j W(i,j) - N_ij sigmoid(beta_i - beta_j).
std::vector<double> BtGradient(const WinMatrix& w, std::span<const double> beta);

struct EloAnchor {
  // Model pinned to `value`; the lowest-beta model when unset.
  std::optional<ModelId> model;
  double value = kDefaultAnchorElo;
};

struct EloTable {
  std::vector<ModelId> models;
  std::vector<double> beta;
  std::vector<double> xi;
  ModelId anchor_model;
  double anchor_value = kDefaultAnchorElo;

  double EloOf(const ModelId& model) const;

  // Ranking by Elo, descending.
  Ranking ToRanking() const;
};

// Throws Error(kLookup) when the anchor model is not part of the fit.
EloTable ToElo(const BtFit& fit, const EloAnchor& anchor = {});

double EloWinProbability(double xi_i, double xi_j);

// CSV `model,beta,elo`, preceded by `# anchor=...` and `# scheme=...`
// comment lines.
std::string EloTableToCsv(const EloTable& table, LabelScheme scheme);

// Mean over instructions of J(m > baseline) for every model other than the
// baseline, which scores 0.5. Throws Error(kMissingComparison) listing every
// model never compared with the baseline, and Error(kLookup) for an unknown
// baseline.
Ranking BaselineRating(const PreferenceDataset& dataset,
                       const ModelId& baseline);

}  // namespace judgerank

#endif  // JUDGERANK_BTELO_H_
