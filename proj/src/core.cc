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

#include "judgerank/core.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>
#include <utility>

#include "judgerank/errors.h"

namespace judgerank {
namespace {

bool IsProbability(double p) { return p >= 0.0 && p <= 1.0; }

void CheckProbability(double p, const char* what) {
  if (!IsProbability(p)) {
    throw Error(ErrorCode::kValidation,
                std::string(what) + " must be in [0, 1], got " +
                    std::to_string(p));
  }
}

// Mean of `values` summed in sorted order so the result is independent of
// the order the samples arrived in.
double SortedMean(std::vector<double>& values) {
  std::sort(values.begin(), values.end());
  double total = 0.0;
  for (double v : values) total += v;
  return total / static_cast<double>(values.size());
}

}  // namespace

void PreferenceSample::Validate() const {
  if (instruction_id.empty()) {
    throw Error(ErrorCode::kValidation, "empty instruction_id");
  }
  if (model_first.empty() || model_second.empty()) {
    throw Error(ErrorCode::kValidation, "empty model id");
  }
  if (model_first == model_second) {
    throw Error(ErrorCode::kValidation,
                "model_first equals model_second: " + model_first);
  }
  if (call_index < 0) {
    throw Error(ErrorCode::kValidation, "negative call_index");
  }
  CheckProbability(p_first, "p_first");
}

PairKey CanonicalKey(const InstructionId& instruction, const ModelId& x,
                     const ModelId& y) {
  if (x < y) return {instruction, x, y};
  return {instruction, y, x};
}

PairPreference PairPreference::Flipped() const {
  PairPreference flipped;
  flipped.instruction_id = instruction_id;
  flipped.model_a = model_b;
  flipped.model_b = model_a;
  flipped.phi_ab = phi_ba;
  flipped.phi_ba = phi_ab;
  flipped.j_ab = 1.0 - j_ab;
  return flipped;
}

double PairPreference::PreferenceFor(const ModelId& model) const {
  if (model == model_a) return j_ab;
  if (model == model_b) return 1.0 - j_ab;
  throw Error(ErrorCode::kLookup,
              "model " + model + " is not part of pair (" + model_a + ", " +
                  model_b + ")");
}

void PairPreference::Validate() const {
  if (instruction_id.empty() || model_a.empty() || model_b.empty()) {
    throw Error(ErrorCode::kValidation, "empty identifier in pair record");
  }
  if (!(model_a < model_b)) {
    throw Error(ErrorCode::kValidation, "pair (" + model_a + ", " + model_b +
                                            ") is not in canonical order");
  }
  if (!phi_ab && !phi_ba) {
    throw Error(ErrorCode::kValidation, "pair record has no observed order");
  }
  if (phi_ab) CheckProbability(*phi_ab, "phi_ab");
  if (phi_ba) CheckProbability(*phi_ba, "phi_ba");
  CheckProbability(j_ab, "j_ab");
}

double DebiasedPreference(double phi_ab, double phi_ba) {
  return (phi_ab + (1.0 - phi_ba)) / 2.0;
}

PairPreference MakePairPreference(InstructionId instruction, ModelId model_a,
                                  ModelId model_b, std::optional<double> phi_ab,
                                  std::optional<double> phi_ba) {
  PairPreference pref;
  pref.instruction_id = std::move(instruction);
  pref.model_a = std::move(model_a);
  pref.model_b = std::move(model_b);
  pref.phi_ab = phi_ab;
  pref.phi_ba = phi_ba;
  if (phi_ab && phi_ba) {
    pref.j_ab = DebiasedPreference(*phi_ab, *phi_ba);
  } else if (phi_ab) {
    pref.j_ab = *phi_ab;
  } else if (phi_ba) {
    pref.j_ab = 1.0 - *phi_ba;
  } else {
    throw Error(ErrorCode::kValidation, "pair record has no observed order");
  }
  return pref;
}

PreferenceDataset PreferenceDataset::FromPairs(
    std::vector<PairPreference> pairs,
    std::optional<std::vector<ModelId>> models,
    std::optional<std::vector<InstructionId>> instructions) {
  PreferenceDataset ds;
  std::set<ModelId> model_set;
  std::set<InstructionId> instruction_set;
  if (models) model_set.insert(models->begin(), models->end());
  if (instructions) {
    instruction_set.insert(instructions->begin(), instructions->end());
  }
  for (PairPreference& pair : pairs) {
    pair.Validate();
    for (const ModelId* m : {&pair.model_a, &pair.model_b}) {
      if (models && !model_set.contains(*m)) {
        throw Error(ErrorCode::kValidation,
                    "pair references model not in index: " + *m);
      }
      model_set.insert(*m);
    }
    if (instructions && !instruction_set.contains(pair.instruction_id)) {
      throw Error(ErrorCode::kValidation,
                  "pair references instruction not in index: " +
                      pair.instruction_id);
    }
    instruction_set.insert(pair.instruction_id);
    PairKey key = pair.key();
    auto [it, inserted] = ds.pairs_.emplace(std::move(key), std::move(pair));
    if (!inserted) {
      throw Error(ErrorCode::kValidation,
                  "duplicate pair record for instruction " +
                      it->first.instruction_id + " (" + it->first.model_a +
                      ", " + it->first.model_b + ")");
    }
  }
  ds.models_.assign(model_set.begin(), model_set.end());
  ds.instructions_.assign(instruction_set.begin(), instruction_set.end());
  return ds;
}

bool PreferenceDataset::HasModel(const ModelId& model) const {
  return std::binary_search(models_.begin(), models_.end(), model);
}

const PairPreference* PreferenceDataset::Find(const InstructionId& instruction,
                                              const ModelId& x,
                                              const ModelId& y) const {
  auto it = pairs_.find(CanonicalKey(instruction, x, y));
  return it == pairs_.end() ? nullptr : &it->second;
}

std::optional<double> PreferenceDataset::Preference(
    const InstructionId& instruction, const ModelId& x,
    const ModelId& y) const {
  const PairPreference* pair = Find(instruction, x, y);
  if (pair == nullptr) return std::nullopt;
  return pair->PreferenceFor(x);
}

PreferenceDataset PreferenceDataset::RestrictToModels(
    std::span<const ModelId> models) const {
  std::set<ModelId> keep(models.begin(), models.end());
  std::vector<PairPreference> subset;
  for (const auto& [key, pair] : pairs_) {
    if (keep.contains(key.model_a) && keep.contains(key.model_b)) {
      subset.push_back(pair);
    }
  }
  std::vector<ModelId> model_index;
  for (const ModelId& m : models_) {
    if (keep.contains(m)) model_index.push_back(m);
  }
  return FromPairs(std::move(subset), std::move(model_index), instructions_);
}

PreferenceDataset AggregateSamples(std::span<const PreferenceSample> samples) {
  // (instruction, first, second) -> (judge, call) -> p_first.
  using OrderKey = std::tuple<InstructionId, ModelId, ModelId>;
  using CallKey = std::pair<std::string, int>;
  std::map<OrderKey, std::map<CallKey, double>> groups;
  for (const PreferenceSample& sample : samples) {
    sample.Validate();
    auto& calls = groups[{sample.instruction_id, sample.model_first,
                          sample.model_second}];
    auto [it, inserted] =
        calls.emplace(CallKey{sample.judge_id, sample.call_index},
                      sample.p_first);
    if (!inserted && it->second != sample.p_first) {
      throw Error(ErrorCode::kDuplicateSample,
                  "conflicting samples for instruction " +
                      sample.instruction_id + ", " + sample.model_first +
                      " before " + sample.model_second + ", judge '" +
                      sample.judge_id + "', call " +
                      std::to_string(sample.call_index));
    }
  }

  std::map<PairKey, std::pair<std::optional<double>, std::optional<double>>>
      per_pair;
  for (auto& [order, calls] : groups) {
    const auto& [instruction, first, second] = order;
    std::vector<double> values;
    values.reserve(calls.size());
    for (const auto& [call, p] : calls) values.push_back(p);
    double mean = SortedMean(values);
    PairKey key = CanonicalKey(instruction, first, second);
    auto& slot = per_pair[key];
    if (first == key.model_a) {
      slot.first = mean;
    } else {
      slot.second = mean;
    }
  }

  std::vector<PairPreference> pairs;
  pairs.reserve(per_pair.size());
  for (auto& [key, phis] : per_pair) {
    pairs.push_back(MakePairPreference(key.instruction_id, key.model_a,
                                       key.model_b, phis.first, phis.second));
  }
  return PreferenceDataset::FromPairs(std::move(pairs));
}

LabelScheme ParseLabelScheme(std::string_view name) {
  if (name == "soft") return LabelScheme::kSoft;
  if (name == "hard") return LabelScheme::kHard;
  if (name == "rounded") return LabelScheme::kRounded;
  throw Error(ErrorCode::kConfiguration,
              "unknown labeling scheme '" + std::string(name) +
                  "' (expected soft, hard or rounded)");
}

const char* LabelSchemeName(LabelScheme scheme) {
  switch (scheme) {
    case LabelScheme::kSoft:
      return "soft";
    case LabelScheme::kHard:
      return "hard";
    case LabelScheme::kRounded:
      return "rounded";
  }
  return "unknown";
}

double LabelCredit(double j, LabelScheme scheme) {
  switch (scheme) {
    case LabelScheme::kSoft:
      return j;
    case LabelScheme::kHard:
      if (j > 0.5) return 1.0;
      if (j < 0.5) return 0.0;
      return 0.5;
    case LabelScheme::kRounded:
      if (j > 0.525) return 1.0;
      if (j < 0.475) return 0.0;
      return 0.5;
  }
  throw Error(ErrorCode::kConfiguration, "unknown labeling scheme");
}

WinMatrix::WinMatrix(std::vector<ModelId> models)
    : models_(std::move(models)), w_(models_.size() * models_.size(), 0.0) {}

std::optional<std::size_t> WinMatrix::IndexOf(const ModelId& model) const {
  auto it = std::find(models_.begin(), models_.end(), model);
  if (it == models_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - models_.begin());
}

double WinMatrix::RowSum(std::size_t i) const {
  double total = 0.0;
  for (std::size_t j = 0; j < size(); ++j) total += (*this)(i, j);
  return total;
}

WinMatrix WinMatrix::Restrict(std::span<const ModelId> models) const {
  std::vector<std::size_t> index;
  index.reserve(models.size());
  for (const ModelId& m : models) {
    auto idx = IndexOf(m);
    if (!idx) throw Error(ErrorCode::kLookup, "unknown model " + m);
    index.push_back(*idx);
  }
  WinMatrix out(std::vector<ModelId>(models.begin(), models.end()));
  for (std::size_t i = 0; i < index.size(); ++i) {
    for (std::size_t j = 0; j < index.size(); ++j) {
      out.at(i, j) = (*this)(index[i], index[j]);
    }
  }
  return out;
}

WinMatrix WinMatrix::Scaled(double factor) const {
  WinMatrix out = *this;
  for (double& v : out.w_) v *= factor;
  return out;
}

void WinMatrix::Validate() const {
  for (std::size_t i = 0; i < size(); ++i) {
    if ((*this)(i, i) != 0.0) {
      throw Error(ErrorCode::kValidation,
                  "nonzero diagonal for model " + models_[i]);
    }
    for (std::size_t j = 0; j < size(); ++j) {
      double v = (*this)(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        throw Error(ErrorCode::kValidation,
                    "invalid win count for (" + models_[i] + ", " +
                        models_[j] + ")");
      }
    }
  }
}

WinMatrix BuildWinMatrix(const PreferenceDataset& dataset, LabelScheme scheme) {
  WinMatrix w(dataset.models());
  // models() is sorted, so indexes come from a binary search.
  const auto& models = dataset.models();
  auto index_of = [&](const ModelId& m) {
    return static_cast<std::size_t>(
        std::lower_bound(models.begin(), models.end(), m) - models.begin());
  };
  // Credits for model_a are summed per unordered pair; model_b receives the
  // complement of that sum so w(a, b) + w(b, a) equals the comparison count.
  std::map<std::pair<std::size_t, std::size_t>, std::pair<double, double>>
      totals;
  for (const auto& [key, pair] : dataset.pairs()) {
    auto& [credit, count] =
        totals[{index_of(key.model_a), index_of(key.model_b)}];
    credit += LabelCredit(pair.j_ab, scheme);
    count += 1.0;
  }
  for (const auto& [ab, total] : totals) {
    w.at(ab.first, ab.second) = total.first;
    w.at(ab.second, ab.first) = total.second - total.first;
  }
  return w;
}

Ranking Ranking::FromScores(std::vector<RankedModel> entries,
                            TiePolicy policy) {
  std::set<ModelId> seen;
  for (const RankedModel& e : entries) {
    if (std::isnan(e.score)) {
      throw Error(ErrorCode::kValidation, "NaN score for model " + e.model);
    }
    if (!seen.insert(e.model).second) {
      throw Error(ErrorCode::kValidation, "duplicate model in ranking: " +
                                              e.model);
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const RankedModel& x, const RankedModel& y) {
              if (x.score != y.score) return x.score > y.score;
              return x.model < y.model;
            });
  Ranking r;
  r.entries_ = std::move(entries);
  r.tie_policy_ = policy;
  return r;
}

bool Ranking::has_ties() const {
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (entries_[i].score == entries_[i - 1].score) return true;
  }
  return false;
}

std::vector<ModelId> Ranking::Order() const {
  std::vector<ModelId> order;
  order.reserve(entries_.size());
  for (const RankedModel& e : entries_) order.push_back(e.model);
  return order;
}

std::optional<std::size_t> Ranking::PositionOf(const ModelId& model) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].model == model) return i;
  }
  return std::nullopt;
}

double Ranking::ScoreOf(const ModelId& model) const {
  auto pos = PositionOf(model);
  if (!pos) throw Error(ErrorCode::kLookup, "model not ranked: " + model);
  return entries_[*pos].score;
}

}  // namespace judgerank
