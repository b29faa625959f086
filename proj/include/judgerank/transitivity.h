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

#ifndef JUDGERANK_TRANSITIVITY_H_
#define JUDGERANK_TRANSITIVITY_H_

// Non-transitivity diagnostics for model triplets.
//
// For a triplet (A, B, C) and one instruction, the three debiased
// preferences J(A>B), J(B>C) and J(A>C) are turned into win/lose/tie
// relations. Fourteen relation triples cannot be produced by any weak order
// of the three models; an instruction matching one of them counts towards
// the percentage of non-transitive cases (PNT).
//
// The soft non-transitivity deviation (SNTD) measures how far each observed
// pairwise preference is from the preference the other two pairs imply under
// a Bradley-Terry model: with quality gaps s = logit(phi),
//
//   phi_hat(A,B) = sigmoid(s_AC - s_BC)
//   phi_hat(B,C) = sigmoid(s_AC - s_AB)
//   phi_hat(A,C) = sigmoid(s_AB + s_BC)
//
// and SNTD is the mean of the three two-outcome Jensen-Shannon divergences
// (natural log, so 0 <= SNTD <= ln 2).

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "judgerank/core.h"

namespace judgerank {

inline constexpr double kDefaultEpsilon = 1e-6;

enum class Relation { kWins, kLoses, kTie };

const char* RelationSymbol(Relation r);  // ">", "<", "~"

// A preference inside [lo, hi] is a tie; above hi a win; below lo a loss.
struct TieThresholds {
  double lo = 0.475;
  double hi = 0.525;

  // Ties only at exactly 0.5.
  static TieThresholds Strict() { return {0.5, 0.5}; }

  // Throws Error(kConfiguration) when lo > hi or either bound is outside
  // [0, 1].
  void Validate() const;
};

Relation ClassifyRelation(double j, const TieThresholds& thresholds = {});

// The fourteen non-transitive relation triples, in (A vs B, B vs C, A vs C)
// order. Pattern ids 1..14 index this table; 0 means transitive.
const std::array<std::array<Relation, 3>, 14>& NonTransitivePatterns();

struct TripletVerdict {
  int pattern = 0;
  std::array<Relation, 3> relations{Relation::kTie, Relation::kTie,
                                    Relation::kTie};

  bool non_transitive() const { return pattern != 0; }

  // "transitive" or e.g. "A>B,B>C,A<C".
  std::string PatternName() const;
};

// Relations for (A vs B, B vs C, A vs C) and the matching pattern id.
TripletVerdict ClassifyTriplet(double j_ab, double j_bc, double j_ac,
                               const TieThresholds& thresholds = {});

// Log-odds of `phi` after clamping into [epsilon, 1 - epsilon].
double QualityGap(double phi, double epsilon = kDefaultEpsilon);

// sigmoid(s_left - s_right). Callers build phi_hat(A,B) from
// (s_AC, s_BC), phi_hat(B,C) from (s_AC, s_AB) and phi_hat(A,C) from
// (s_AB, -s_BC).
double ExpectedWinRate(double s_left, double s_right);

// Jensen-Shannon divergence between Bernoulli(p) and Bernoulli(q), in nats.
double BernoulliJsd(double p, double q);

// SNTD for the observed preferences phi(A,B), phi(B,C), phi(A,C). Observed
// values are clamped with the same epsilon as the quality gaps, so a triplet
// that is Bradley-Terry consistent after clamping scores zero.
double SntdFromPreferences(double phi_ab, double phi_bc, double phi_ac,
                           double epsilon = kDefaultEpsilon);

struct Triplet {
  ModelId a;
  ModelId b;
  ModelId c;

  bool operator==(const Triplet&) const = default;
};

// Debiased preferences J(A>B), J(B>C), J(A>C) for one instruction, or
// nothing when any of the three pairs is missing.
std::optional<std::array<double, 3>> TripletPreferences(
    const PreferenceDataset& dataset, const InstructionId& instruction,
    const Triplet& triplet);

// SNTD for three oriented pair records: `ab` is read as J(A>B) and so on.
// Each record may be stored in either orientation. Throws
// Error(kIncompleteTriplet) if a record is missing or does not belong to
// the triplet.
double SntdTriplet(const Triplet& triplet, const PairPreference* ab,
                   const PairPreference* bc, const PairPreference* ac,
                   double epsilon = kDefaultEpsilon);

struct TripletMetrics {
  InstructionId instruction_id;
  Triplet triplet;
  TripletVerdict verdict;
  double sntd = 0.0;
};

// One record per instruction on which all three pairs are present, in
// instruction order.
std::vector<TripletMetrics> PerInstructionMetrics(
    const PreferenceDataset& dataset, const Triplet& triplet,
    const TieThresholds& thresholds = {}, double epsilon = kDefaultEpsilon);

struct DatasetMetrics {
  double pnt_percent = 0.0;
  double mean_sntd = 0.0;
  std::size_t complete_instructions = 0;
  std::size_t non_transitive = 0;
};

// PNT (in percent) and mean SNTD over the instructions with a complete
// triplet. Throws Error(kEmptyInput) when there are none.
DatasetMetrics ComputeDatasetMetrics(const PreferenceDataset& dataset,
                                     const Triplet& triplet,
                                     const TieThresholds& thresholds = {},
                                     double epsilon = kDefaultEpsilon);

// All ordered triplets of distinct models, in lexicographic index order.
std::vector<Triplet> AllPermutations(std::span<const ModelId> models);
// All unordered triplets (i < j < k).
std::vector<Triplet> AllCombinations(std::span<const ModelId> models);

struct HeatmapCell {
  double mean_pnt = 0.0;
  double mean_sntd = 0.0;
  std::size_t count = 0;
};

struct HeatmapOptions {
  std::size_t bins = 35;
  double smoothing_sigma = 1.0;
  TieThresholds thresholds;
  double epsilon = kDefaultEpsilon;
  // Axis half-width. When unset it is max - min of the reference win rates.
  std::optional<double> range;
  // Evaluate permutations with the OpenMP kernel instead of the serial one.
  bool parallel = true;
};

// Grid over (WR_A - WR_B, WR_B - WR_C), both axes on [-range, range]. Cell
// (x, y) is stored at cells[x * bins + y]. Cell means are smoothed with a
// discrete Gaussian; counts are the raw number of permutations binned.
struct HeatmapGrid {
  std::size_t bins = 0;
  double range = 0.0;
  std::vector<HeatmapCell> cells;
  std::size_t permutations = 0;

  const HeatmapCell& cell(std::size_t x, std::size_t y) const {
    return cells[x * bins + y];
  }
  double BinLow(std::size_t index) const;
};

// Bin index for a value on [-range, range]; values on the upper edge go into
// the last bin.
std::size_t HeatmapBin(double value, double range, std::size_t bins);

// Separable Gaussian filter with reflected borders, truncated at 4 sigma.
// sigma == 0 returns the input unchanged.
std::vector<double> GaussianSmooth(std::span<const double> grid,
                                   std::size_t bins, double sigma);

// `reference_win_rates` is aligned with dataset.models(). Permutations with
// no complete instruction are not binned. Throws
// Error(kInsufficientModels) for fewer than three models.
HeatmapGrid ComputeHeatmapGrid(const PreferenceDataset& dataset,
                               std::span<const double> reference_win_rates,
                               const HeatmapOptions& options = {});

std::string HeatmapToCsv(const HeatmapGrid& grid);
std::string TripletMetricsToCsv(std::span<const TripletMetrics> metrics);

}  // namespace judgerank

#endif  // JUDGERANK_TRANSITIVITY_H_
