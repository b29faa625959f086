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

#include "judgerank/bias.h"

#include <algorithm>
#include <cmath>

#include "judgerank/errors.h"
#include "judgerank/text_io.h"

namespace judgerank {
namespace {

void RequireBothOrders(const PairPreference& pair) {
  if (pair.single_order()) {
    throw Error(ErrorCode::kUndefinedConsistency,
                "pair (" + pair.model_a + ", " + pair.model_b +
                    ") on instruction " + pair.instruction_id +
                    " was sampled in one order only");
  }
}

bool HasBothOrders(const PairPreference* pair) {
  return pair != nullptr && !pair->single_order();
}

std::size_t BinIndex(double value, std::span<const double> edges) {
  // Bins are half-open except the last one.
  auto it = std::upper_bound(edges.begin(), edges.end(), value);
  auto index = static_cast<std::size_t>(it - edges.begin());
  if (index == 0) return 0;
  return std::min(index - 1, edges.size() - 2);
}

}  // namespace

ConsistencyRecord PairConsistency(const PairPreference& pair,
                                  const TieThresholds& thresholds) {
  RequireBothOrders(pair);
  ConsistencyRecord record;
  record.instruction_id = pair.instruction_id;
  record.model_a = pair.model_a;
  record.model_b = pair.model_b;
  record.consistent = ClassifyRelation(*pair.phi_ab, thresholds) ==
                      ClassifyRelation(1.0 - *pair.phi_ba, thresholds);
  return record;
}

PdMode ParsePdMode(std::string_view name) {
  if (name == "antisym") return PdMode::kAntisymmetric;
  if (name == "literal") return PdMode::kLiteral;
  throw Error(ErrorCode::kConfiguration,
              "unknown PD mode '" + std::string(name) +
                  "' (expected antisym or literal)");
}

const char* PdModeName(PdMode mode) {
  return mode == PdMode::kLiteral ? "literal" : "antisym";
}

double PositionDifference(const PairPreference& pair, PdMode mode) {
  RequireBothOrders(pair);
  if (mode == PdMode::kLiteral) return std::abs(*pair.phi_ab - *pair.phi_ba);
  return std::abs(*pair.phi_ab + *pair.phi_ba - 1.0);
}

std::optional<PdRecord> TripletPositionDifference(
    const PreferenceDataset& dataset, const InstructionId& instruction,
    const Triplet& triplet, PdMode mode) {
  const PairPreference* ab = dataset.Find(instruction, triplet.a, triplet.b);
  const PairPreference* bc = dataset.Find(instruction, triplet.b, triplet.c);
  const PairPreference* ac = dataset.Find(instruction, triplet.a, triplet.c);
  if (!HasBothOrders(ab) || !HasBothOrders(bc) || !HasBothOrders(ac)) {
    return std::nullopt;
  }
  PdRecord record;
  record.instruction_id = instruction;
  record.triplet = triplet;
  record.pd_pairs = {PositionDifference(*ab, mode),
                     PositionDifference(*bc, mode),
                     PositionDifference(*ac, mode)};
  record.pd_total = record.pd_pairs[0] + record.pd_pairs[1] +
                    record.pd_pairs[2];
  return record;
}

InstructionPartition PartitionInstructions(const PreferenceDataset& dataset,
                                           const Triplet& triplet,
                                           const TieThresholds& thresholds) {
  thresholds.Validate();
  InstructionPartition partition;
  for (const InstructionId& instruction : dataset.instructions()) {
    const PairPreference* pairs[] = {
        dataset.Find(instruction, triplet.a, triplet.b),
        dataset.Find(instruction, triplet.b, triplet.c),
        dataset.Find(instruction, triplet.a, triplet.c)};
    if (!std::all_of(std::begin(pairs), std::end(pairs), HasBothOrders)) {
      ++partition.skipped;
      continue;
    }
    bool consistent = true;
    for (const PairPreference* pair : pairs) {
      consistent = consistent && PairConsistency(*pair, thresholds).consistent;
    }
    (consistent ? partition.consistent : partition.ambiguous)
        .insert(instruction);
  }
  return partition;
}

std::optional<double> PdBin::proportion() const {
  if (count == 0) return std::nullopt;
  return static_cast<double>(non_transitive) / static_cast<double>(count);
}

std::optional<double> PdBin::mean_sntd() const {
  if (count == 0) return std::nullopt;
  return sum_sntd / static_cast<double>(count);
}

std::vector<double> UniformPdEdges(std::size_t count) {
  std::vector<double> edges(count + 1);
  for (std::size_t i = 0; i <= count; ++i) {
    edges[i] = 3.0 * static_cast<double>(i) / static_cast<double>(count);
  }
  return edges;
}

std::vector<PdBin> PdBinnedNonTransitivity(const PreferenceDataset& dataset,
                                           std::span<const Triplet> triplets,
                                           std::span<const double> bin_edges,
                                           const TieThresholds& thresholds,
                                           double epsilon, PdMode mode) {
  thresholds.Validate();
  if (bin_edges.size() < 2) {
    throw Error(ErrorCode::kConfiguration, "need at least two bin edges");
  }
  for (std::size_t i = 1; i < bin_edges.size(); ++i) {
    if (!(bin_edges[i] > bin_edges[i - 1])) {
      throw Error(ErrorCode::kConfiguration,
                  "PD bin edges must be strictly increasing");
    }
  }
  if (bin_edges.front() > 0.0 || bin_edges.back() < 3.0) {
    throw Error(ErrorCode::kConfiguration, "PD bin edges must cover [0, 3]");
  }

  std::vector<PdBin> bins(bin_edges.size() - 1);
  for (std::size_t i = 0; i < bins.size(); ++i) {
    bins[i].lo = bin_edges[i];
    bins[i].hi = bin_edges[i + 1];
  }
  for (const Triplet& triplet : triplets) {
    for (const InstructionId& instruction : dataset.instructions()) {
      auto pd = TripletPositionDifference(dataset, instruction, triplet, mode);
      if (!pd) continue;
      auto prefs = TripletPreferences(dataset, instruction, triplet);
      const auto& [ab, bc, ac] = *prefs;
      PdBin& bin = bins[BinIndex(pd->pd_total, bin_edges)];
      ++bin.count;
      if (ClassifyTriplet(ab, bc, ac, thresholds).non_transitive()) {
        ++bin.non_transitive;
      }
      bin.sum_sntd += SntdFromPreferences(ab, bc, ac, epsilon);
    }
  }
  return bins;
}

HistogramSource ParseHistogramSource(std::string_view name) {
  if (name == "debiased") return HistogramSource::kDebiased;
  if (name == "raw") return HistogramSource::kRaw;
  throw Error(ErrorCode::kConfiguration,
              "unknown histogram source '" + std::string(name) +
                  "' (expected debiased or raw)");
}

Histogram PreferenceHistogram(
    const PreferenceDataset& dataset,
    const std::optional<std::pair<ModelId, ModelId>>& pair,
    std::size_t bin_count, HistogramSource source) {
  if (bin_count < 2) {
    throw Error(ErrorCode::kConfiguration, "histogram needs at least 2 bins");
  }
  Histogram h;
  h.edges.resize(bin_count + 1);
  for (std::size_t i = 0; i <= bin_count; ++i) {
    h.edges[i] = static_cast<double>(i) / static_cast<double>(bin_count);
  }
  h.counts.assign(bin_count, 0);
  auto add = [&](double v) { ++h.counts[BinIndex(v, h.edges)]; };

  for (const auto& [key, record] : dataset.pairs()) {
    const PairPreference* oriented = &record;
    PairPreference flipped;
    if (pair) {
      bool forward = key.model_a == pair->first && key.model_b == pair->second;
      bool backward = key.model_a == pair->second && key.model_b == pair->first;
      if (!forward && !backward) continue;
      if (backward) {
        flipped = record.Flipped();
        oriented = &flipped;
      }
    }
    if (source == HistogramSource::kDebiased) {
      add(oriented->j_ab);
    } else {
      if (oriented->phi_ab) add(*oriented->phi_ab);
      if (oriented->phi_ba) add(*oriented->phi_ba);
    }
  }
  return h;
}

std::string HistogramToCsv(const Histogram& histogram) {
  std::string out = "bin_lo,bin_hi,count\n";
  for (std::size_t i = 0; i < histogram.counts.size(); ++i) {
    out += FormatDouble(histogram.edges[i]) + ',' +
           FormatDouble(histogram.edges[i + 1]) + ',' +
           std::to_string(histogram.counts[i]) + '\n';
  }
  return out;
}

std::string PdBinsToCsv(std::span<const PdBin> bins) {
  std::string out = "bin_lo,bin_hi,count,proportion\n";
  for (const PdBin& bin : bins) {
    auto p = bin.proportion();
    out += FormatDouble(bin.lo) + ',' + FormatDouble(bin.hi) + ',' +
           std::to_string(bin.count) + ',' + (p ? FormatDouble(*p) : "") +
           '\n';
  }
  return out;
}

}  // namespace judgerank
