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

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "judgerank/text_io.h"

namespace judgerank {
namespace {

// Coefficients are kept within [-kBetaBound, kBetaBound]; a model that never
// wins (or never loses) runs into this bound instead of diverging.
constexpr double kBetaBound = 50.0;

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

void Center(std::vector<double>& beta) {
  if (beta.empty()) return;
  double mean = std::accumulate(beta.begin(), beta.end(), 0.0) /
                static_cast<double>(beta.size());
  for (double& b : beta) b -= mean;
}

double Norm(std::span<const double> v) {
  double total = 0.0;
  for (double x : v) total += x * x;
  return std::sqrt(total);
}

std::size_t Find(std::vector<std::size_t>& parent, std::size_t i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

}  // namespace

double BtFit::BetaOf(const ModelId& model) const {
  auto idx = IndexOf(model);
  if (!idx) throw Error(ErrorCode::kLookup, "model not in fit: " + model);
  return beta[*idx];
}

std::optional<std::size_t> BtFit::IndexOf(const ModelId& model) const {
  auto it = std::find(models.begin(), models.end(), model);
  if (it == models.end()) return std::nullopt;
  return static_cast<std::size_t>(it - models.begin());
}

std::vector<std::vector<ModelId>> ComparisonComponents(const WinMatrix& w) {
  const std::size_t n = w.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (w.Comparisons(i, j) > 0.0) parent[Find(parent, i)] = Find(parent, j);
    }
  }
  std::map<std::size_t, std::vector<ModelId>> groups;
  for (std::size_t i = 0; i < n; ++i) {
    groups[Find(parent, i)].push_back(w.models()[i]);
  }
  std::vector<std::vector<ModelId>> out;
  for (auto& [root, members] : groups) {
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  std::sort(out.begin(), out.end());
  return out;
}

double BtLogLikelihood(const WinMatrix& w, std::span<const double> beta) {
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (i == j || w(i, j) == 0.0) continue;
      total += w(i, j) * std::log(Sigmoid(beta[i] - beta[j]));
    }
  }
  return total;
}

std::vector<double> BtGradient(const WinMatrix& w,
                               std::span<const double> beta) {
  std::vector<double> grad(w.size(), 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (i == j) continue;
      grad[i] += w(i, j) - w.Comparisons(i, j) * Sigmoid(beta[i] - beta[j]);
    }
  }
  return grad;
}

BtFit FitBradleyTerry(const WinMatrix& w, const FitOptions& options) {
  if (!(options.tol > 0.0) || options.max_iter < 1) {
    throw Error(ErrorCode::kConfiguration,
                "fit needs tol > 0 and max_iter >= 1");
  }
  w.Validate();
  const std::size_t n = w.size();

  BtFit fit;
  fit.models = w.models();
  fit.beta.assign(n, 0.0);
  if (n <= 1) {
    fit.converged = true;
    return fit;
  }

  auto components = ComparisonComponents(w);
  if (components.size() > 1) {
    std::string message = "comparison graph is disconnected:";
    for (const auto& component : components) {
      message += " {";
      for (std::size_t k = 0; k < component.size(); ++k) {
        if (k > 0) message += ", ";
        message += component[k];
      }
      message += "}";
    }
    throw Error(ErrorCode::kUnidentifiable, message);
  }

  if (options.initial_beta) {
    if (options.initial_beta->size() != n) {
      throw Error(ErrorCode::kConfiguration,
                  "initial beta does not match the matrix size");
    }
    for (std::size_t i = 0; i < n; ++i) {
      fit.beta[i] = std::clamp((*options.initial_beta)[i], -kBetaBound,
                               kBetaBound);
    }
    Center(fit.beta);
  }

  std::vector<double> wins(n);
  for (std::size_t i = 0; i < n; ++i) wins[i] = w.RowSum(i);

  std::vector<double> strength(n);
  std::vector<double> next(n);
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    for (std::size_t i = 0; i < n; ++i) strength[i] = std::exp(fit.beta[i]);
    bool pinned = false;
    for (std::size_t i = 0; i < n; ++i) {
      double denom = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        double games = w.Comparisons(i, j);
        if (games > 0.0) denom += games / (strength[i] + strength[j]);
      }
      double raw = wins[i] > 0.0 ? std::log(wins[i]) - std::log(denom)
                                 : -kBetaBound;
      if (raw <= -kBetaBound || raw >= kBetaBound) pinned = true;
      next[i] = std::clamp(raw, -kBetaBound, kBetaBound);
    }
    Center(next);
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      change = std::max(change, std::abs(next[i] - fit.beta[i]));
    }
    fit.beta.swap(next);
    fit.iterations = iter;
    if (change <= options.tol && !pinned) {
      fit.converged = true;
      break;
    }
  }
  fit.final_grad_norm = Norm(BtGradient(w, fit.beta));

  if (!fit.converged && options.require_convergence) {
    throw NonConvergenceError(
        "Bradley-Terry fit did not converge in " +
            std::to_string(options.max_iter) + " iterations",
        fit);
  }
  return fit;
}

double EloTable::EloOf(const ModelId& model) const {
  for (std::size_t i = 0; i < models.size(); ++i) {
    if (models[i] == model) return xi[i];
  }
  throw Error(ErrorCode::kLookup, "model not in Elo table: " + model);
}

Ranking EloTable::ToRanking() const {
  std::vector<RankedModel> entries;
  entries.reserve(models.size());
  for (std::size_t i = 0; i < models.size(); ++i) {
    entries.push_back({models[i], xi[i]});
  }
  return Ranking::FromScores(std::move(entries));
}

EloTable ToElo(const BtFit& fit, const EloAnchor& anchor) {
  if (fit.models.empty()) {
    throw Error(ErrorCode::kEmptyInput, "cannot convert an empty fit");
  }
  std::size_t anchor_index = 0;
  if (anchor.model) {
    auto idx = fit.IndexOf(*anchor.model);
    if (!idx) {
      throw Error(ErrorCode::kLookup,
                  "anchor model not in fit: " + *anchor.model);
    }
    anchor_index = *idx;
  } else {
    // Lowest beta; ties go to the smaller model id.
    for (std::size_t i = 1; i < fit.models.size(); ++i) {
      if (fit.beta[i] < fit.beta[anchor_index] ||
          (fit.beta[i] == fit.beta[anchor_index] &&
           fit.models[i] < fit.models[anchor_index])) {
        anchor_index = i;
      }
    }
  }
  EloTable table;
  table.models = fit.models;
  table.beta = fit.beta;
  table.anchor_model = fit.models[anchor_index];
  table.anchor_value = anchor.value;
  table.xi.resize(fit.models.size());
  const double base = fit.beta[anchor_index];
  for (std::size_t i = 0; i < fit.models.size(); ++i) {
    table.xi[i] = anchor.value + kEloScale * (fit.beta[i] - base);
  }
  return table;
}

double EloWinProbability(double xi_i, double xi_j) {
  return 1.0 / (1.0 + std::pow(10.0, (xi_j - xi_i) / 400.0));
}

std::string EloTableToCsv(const EloTable& table, LabelScheme scheme) {
  std::string out = "# anchor=" + table.anchor_model + ":" +
                    FormatDouble(table.anchor_value) + "\n";
  out += std::string("# scheme=") + LabelSchemeName(scheme) + "\n";
  out += "model,beta,elo\n";
  for (std::size_t i = 0; i < table.models.size(); ++i) {
    out += CsvField(table.models[i]) + ',' + FormatDouble(table.beta[i]) +
           ',' + FormatDouble(table.xi[i]) + '\n';
  }
  return out;
}

Ranking BaselineRating(const PreferenceDataset& dataset,
                       const ModelId& baseline) {
  if (!dataset.HasModel(baseline)) {
    throw Error(ErrorCode::kLookup, "unknown baseline model " + baseline);
  }
  std::vector<RankedModel> entries;
  std::vector<ModelId> missing;
  for (const ModelId& model : dataset.models()) {
    if (model == baseline) {
      entries.push_back({model, 0.5});
      continue;
    }
    double total = 0.0;
    std::size_t count = 0;
    for (const InstructionId& instruction : dataset.instructions()) {
      auto j = dataset.Preference(instruction, model, baseline);
      if (!j) continue;
      total += *j;
      ++count;
    }
    if (count == 0) {
      missing.push_back(model);
      continue;
    }
    entries.push_back({model, total / static_cast<double>(count)});
  }
  if (!missing.empty()) {
    std::string message = "never compared with baseline " + baseline + ":";
    for (const ModelId& m : missing) message += " " + m;
    throw Error(ErrorCode::kMissingComparison, message);
  }
  return Ranking::FromScores(std::move(entries));
}

}  // namespace judgerank
