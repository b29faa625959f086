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

#ifndef JUDGERANK_CORE_H_
#define JUDGERANK_CORE_H_

// Data model for judge preferences: raw samples, position-debiased pair
// preferences, the dataset that indexes them, and the model-level win matrix
// built from a dataset.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace judgerank {

using ModelId = std::string;
using InstructionId = std::string;

// One judge call: the probability mass the judge put on whichever output was
// listed first.
struct PreferenceSample {
  InstructionId instruction_id;
  ModelId model_first;
  ModelId model_second;
  std::string judge_id;
  int call_index = 0;
  double p_first = 0.5;

  // Throws Error(kValidation) when an invariant does not hold.
  void Validate() const;

  bool operator==(const PreferenceSample&) const = default;
};

// Key of one (instruction, unordered pair). model_a < model_b.
struct PairKey {
  InstructionId instruction_id;
  ModelId model_a;
  ModelId model_b;

  auto operator<=>(const PairKey&) const = default;
};

// Builds the canonical key for models `x` and `y` in either order.
PairKey CanonicalKey(const InstructionId& instruction, const ModelId& x,
                     const ModelId& y);

// Position-debiased preference for one instruction and one unordered pair.
//
// phi_ab is the mean first-position probability when model_a was listed
// first, phi_ba the same when model_b was listed first. j_ab is the debiased
// preference for model_a. When only one order was sampled the missing phi is
// empty and j_ab is that order's antisymmetric completion.
struct PairPreference {
  InstructionId instruction_id;
  ModelId model_a;
  ModelId model_b;
  std::optional<double> phi_ab;
  std::optional<double> phi_ba;
  double j_ab = 0.5;

  bool single_order() const { return !phi_ab.has_value() || !phi_ba.has_value(); }

  PairKey key() const { return {instruction_id, model_a, model_b}; }

  // The same record seen from model_b's side: (phi_ba, phi_ab, 1 - j_ab).
  // The result is not canonical; it is used for orientation-aware lookups.
  PairPreference Flipped() const;

  // J(model > other) where `model` is one of the two members.
  double PreferenceFor(const ModelId& model) const;

  void Validate() const;

  bool operator==(const PairPreference&) const = default;
};

// (phi_ab + (1 - phi_ba)) / 2.
double DebiasedPreference(double phi_ab, double phi_ba);

// Builds a record from order-specific means, computing j_ab. At least one of
// the two must be present.
PairPreference MakePairPreference(InstructionId instruction, ModelId model_a,
                                  ModelId model_b, std::optional<double> phi_ab,
                                  std::optional<double> phi_ba);

class PreferenceDataset {
 public:
  PreferenceDataset() = default;

  // Builds a dataset from canonical pair records. The model and instruction
  // indexes are the sorted sets referenced by the pairs, extended by the
  // optional explicit lists. Throws Error(kValidation) on non-canonical or
  // duplicated records, or when a pair references an id missing from an
  // explicit list.
  static PreferenceDataset FromPairs(
      std::vector<PairPreference> pairs,
      std::optional<std::vector<ModelId>> models = std::nullopt,
      std::optional<std::vector<InstructionId>> instructions = std::nullopt);

  const std::vector<ModelId>& models() const { return models_; }
  const std::vector<InstructionId>& instructions() const {
    return instructions_;
  }
  const std::map<PairKey, PairPreference>& pairs() const { return pairs_; }

  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }

  bool HasModel(const ModelId& model) const;

  // Canonical record for (instruction, {x, y}) or nullptr.
  const PairPreference* Find(const InstructionId& instruction, const ModelId& x,
                             const ModelId& y) const;

  // J(x > y | instruction), or nothing when the pair was not compared.
  std::optional<double> Preference(const InstructionId& instruction,
                                   const ModelId& x, const ModelId& y) const;

  // Subset containing only pairs whose both members are in `models`.
  PreferenceDataset RestrictToModels(std::span<const ModelId> models) const;

  bool operator==(const PreferenceDataset&) const = default;

 private:
  std::vector<ModelId> models_;
  std::vector<InstructionId> instructions_;
  std::map<PairKey, PairPreference> pairs_;
};

// Groups samples by (instruction, ordered pair), averages p_first per order
// and debiases per unordered pair. Orders are weighted equally regardless of
// how many samples each has. The result does not depend on sample order.
//
// Throws Error(kValidation) for invalid samples and Error(kDuplicateSample)
// when two samples share (instruction, ordered pair, judge, call_index) with
// different probabilities. Exact repeats are collapsed.
PreferenceDataset AggregateSamples(std::span<const PreferenceSample> samples);

enum class LabelScheme { kSoft, kHard, kRounded };

// Throws Error(kConfiguration) for unknown names.
LabelScheme ParseLabelScheme(std::string_view name);
const char* LabelSchemeName(LabelScheme scheme);

// Win credit for the preferred side of a debiased preference `j`.
//   soft:    j
//   hard:    1 if j > 0.5, 0.5 if j == 0.5, 0 otherwise
//   rounded: 1 if j > 0.525, 0 if j < 0.475, 0.5 inside [0.475, 0.525]
double LabelCredit(double j, LabelScheme scheme);

// Square matrix of accumulated (soft) wins, w(i, j) = wins of i over j.
class WinMatrix {
 public:
  WinMatrix() = default;
  explicit WinMatrix(std::vector<ModelId> models);

  std::size_t size() const { return models_.size(); }
  const std::vector<ModelId>& models() const { return models_; }
  std::optional<std::size_t> IndexOf(const ModelId& model) const;

  double operator()(std::size_t i, std::size_t j) const {
    return w_[i * models_.size() + j];
  }
  double& at(std::size_t i, std::size_t j) { return w_[i * models_.size() + j]; }

  // w(i, j) + w(j, i).
  double Comparisons(std::size_t i, std::size_t j) const {
    return (*this)(i, j) + (*this)(j, i);
  }

  // Total wins of model i.
  double RowSum(std::size_t i) const;

  // Sub-matrix over `models`, in the given order. Throws Error(kLookup) for
  // unknown ids.
  WinMatrix Restrict(std::span<const ModelId> models) const;

  // Uniformly scaled copy.
  WinMatrix Scaled(double factor) const;

  // Throws Error(kValidation) for negative entries, a nonzero diagonal or
  // non-finite values.
  void Validate() const;

  bool operator==(const WinMatrix&) const = default;

 private:
  std::vector<ModelId> models_;
  std::vector<double> w_;
};

// Accumulates per-instruction credits over the dataset's model index.
// Single-order records contribute through their completed j_ab.
WinMatrix BuildWinMatrix(const PreferenceDataset& dataset, LabelScheme scheme);

enum class TiePolicy {
  // Equal scores are ordered by ascending model id.
  kLexicographic,
};

struct RankedModel {
  ModelId model;
  double score = 0.0;

  bool operator==(const RankedModel&) const = default;
};

class Ranking {
 public:
  Ranking() = default;

  // Sorts by score, descending, breaking ties per `policy`. Throws
  // Error(kValidation) on duplicated models or NaN scores.
  static Ranking FromScores(std::vector<RankedModel> entries,
                            TiePolicy policy = TiePolicy::kLexicographic);

  const std::vector<RankedModel>& entries() const { return entries_; }
  TiePolicy tie_policy() const { return tie_policy_; }
  std::size_t size() const { return entries_.size(); }

  // True when at least two entries share a score.
  bool has_ties() const;

  std::vector<ModelId> Order() const;

  // Zero-based position of `model`, or nothing.
  std::optional<std::size_t> PositionOf(const ModelId& model) const;

  // Score of `model`; throws Error(kLookup) when absent.
  double ScoreOf(const ModelId& model) const;

  bool operator==(const Ranking&) const = default;

 private:
  std::vector<RankedModel> entries_;
  TiePolicy tie_policy_ = TiePolicy::kLexicographic;
};

}  // namespace judgerank

#endif  // JUDGERANK_CORE_H_
