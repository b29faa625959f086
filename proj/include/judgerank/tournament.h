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

#ifndef JUDGERANK_TOURNAMENT_H_
#define JUDGERANK_TOURNAMENT_H_

// Tournament drivers.
//
// RoundRobin evaluates every unordered model pair on every instruction and
// fits Bradley-Terry on the resulting win matrix.
//
// Swim (Swiss-wise iterative matchmaking) inserts models one at a time in
// random order. A model entering a ranked set of size s plays
// c = ceil(max(log2 s, 1)) opponents: first a random ranked model, then
// repeatedly the unplayed ranked model whose current coefficient is closest
// to its own, with a Bradley-Terry refit over the ranked set plus the new
// model after every opponent's instruction sweep.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "judgerank/btelo.h"
#include "judgerank/core.h"
#include "judgerank/errors.h"
#include "judgerank/evaluator.h"

namespace judgerank {

// Hook applied to every evaluated record before it is stored, e.g. to swap
// in externally debiased preferences. Must return a record for the same key.
using PreferenceTransform = std::function<PairPreference(const PairPreference&)>;

struct TournamentOptions {
  LabelScheme scheme = LabelScheme::kSoft;
  FitOptions fit;
  EloAnchor anchor;
  PreferenceTransform transform;
  // Records already collected (for example by an interrupted run); pairs
  // present here for every instruction are not re-evaluated.
  std::optional<PreferenceDataset> prior;
};

struct ScheduleEntry {
  ModelId model;
  ModelId opponent;
  std::size_t instructions = 0;

  bool operator==(const ScheduleEntry&) const = default;
};

struct TournamentResult {
  WinMatrix win_matrix;
  // Distinct model pairs evaluated.
  std::size_t comparisons_made = 0;
  std::vector<ScheduleEntry> schedule;
  BtFit fit;
  EloTable elo;
  Ranking ranking;
  PreferenceDataset dataset;
};

// Raised when the evaluator fails part way. Carries what was collected and
// the pairs still to play, so the run can be resumed through
// TournamentOptions::prior.
class PartialResultError : public Error {
 public:
  PartialResultError(const std::string& message, PreferenceDataset collected,
                     std::vector<std::pair<ModelId, ModelId>> remaining)
      : Error(ErrorCode::kPartialResult, message),
        collected_(std::move(collected)),
        remaining_(std::move(remaining)) {}

  const PreferenceDataset& collected() const { return collected_; }
  const std::vector<std::pair<ModelId, ModelId>>& remaining() const {
    return remaining_;
  }

 private:
  PreferenceDataset collected_;
  std::vector<std::pair<ModelId, ModelId>> remaining_;
};

// Throws Error(kInsufficientModels) for fewer than two models.
TournamentResult RoundRobin(std::span<const ModelId> models,
                            std::span<const InstructionId> instructions,
                            PairEvaluator& evaluator,
                            const TournamentOptions& options = {});

struct SwimConfig {
  std::uint64_t rng_seed = 0;
  TournamentOptions options;
};

// ceil(max(log2(ranked), 1)) for ranked >= 1.
std::size_t SwimOpponentCount(std::size_t ranked);

// Total pair comparisons SWIM spends ranking `models` models from scratch.
std::size_t SwimTotalComparisons(std::size_t models);

TournamentResult Swim(std::span<const ModelId> models,
                      std::span<const InstructionId> instructions,
                      PairEvaluator& evaluator, const SwimConfig& config);

struct BaselineSensitivity {
  // Fraction of models holding the same rank position in every list.
  double stable_fraction = 0.0;
  // Mean over pairs of lists of the fraction of models at equal positions.
  double mean_pairwise_agreement = 0.0;
  std::vector<ModelId> baselines;
  std::vector<Ranking> rankings;
};

// One baseline-fixed ranking per model. Throws Error(kMissingComparison)
// when some pair of models was never compared.
BaselineSensitivity ComputeBaselineSensitivity(const PreferenceDataset& dataset);

// Writes win_matrix.csv, elo.csv, schedule.csv and ranking.csv into `dir`.
void WriteTournamentResult(const TournamentResult& result, LabelScheme scheme,
                           const std::filesystem::path& dir);

std::string WinMatrixToCsv(const WinMatrix& w);
std::string ScheduleToCsv(std::span<const ScheduleEntry> schedule);

}  // namespace judgerank

#endif  // JUDGERANK_TOURNAMENT_H_
