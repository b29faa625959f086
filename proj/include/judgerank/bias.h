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

#ifndef JUDGERANK_BIAS_H_
#define JUDGERANK_BIAS_H_

// Position-bias diagnostics. All of these need both presentation orders of a
// pair; single-order records are rejected or skipped.

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "judgerank/core.h"
#include "judgerank/transitivity.h"

namespace judgerank {

struct ConsistencyRecord {
  InstructionId instruction_id;
  ModelId model_a;
  ModelId model_b;
  bool consistent = false;
};

// Consistent when phi_ab and 1 - phi_ba fall in the same win/lose/tie
// category. Throws Error(kUndefinedConsistency) for single-order records.
ConsistencyRecord PairConsistency(const PairPreference& pair,
                                  const TieThresholds& thresholds = {});

enum class PdMode {
  // |phi_ab + phi_ba - 1|: zero for an order-invariant judge, one for a
  // judge that always picks the same position.
  kAntisymmetric,
  // |phi_ab - phi_ba|.
  kLiteral,
};

// Throws Error(kConfiguration) for names other than "antisym" and "literal".
PdMode ParsePdMode(std::string_view name);
const char* PdModeName(PdMode mode);

// Throws Error(kUndefinedConsistency) for single-order records.
double PositionDifference(const PairPreference& pair,
                          PdMode mode = PdMode::kAntisymmetric);

struct PdRecord {
  InstructionId instruction_id;
  Triplet triplet;
  double pd_total = 0.0;
  std::array<double, 3> pd_pairs{};  // (A,B), (B,C), (A,C)
};

// Nothing when any of the three pairs is missing or single-order.
std::optional<PdRecord> TripletPositionDifference(
    const PreferenceDataset& dataset, const InstructionId& instruction,
    const Triplet& triplet, PdMode mode = PdMode::kAntisymmetric);

struct InstructionPartition {
  std::set<InstructionId> consistent;
  std::set<InstructionId> ambiguous;
  // Instructions lacking a complete two-order triplet.
  std::size_t skipped = 0;
};

// An instruction is consistent when all three pairs of the triplet are.
InstructionPartition PartitionInstructions(const PreferenceDataset& dataset,
                                           const Triplet& triplet,
                                           const TieThresholds& thresholds = {});

struct PdBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
  std::size_t non_transitive = 0;
  double sum_sntd = 0.0;

  // Undefined (nothing) for empty bins.
  std::optional<double> proportion() const;
  std::optional<double> mean_sntd() const;
};

// `count` equal-width edges over [0, 3].
std::vector<double> UniformPdEdges(std::size_t count = 6);

// Bins are [edge_i, edge_{i+1}); the last bin includes its upper edge.
// Throws Error(kConfiguration) unless the edges are strictly increasing and
// cover [0, 3].
std::vector<PdBin> PdBinnedNonTransitivity(
    const PreferenceDataset& dataset, std::span<const Triplet> triplets,
    std::span<const double> bin_edges, const TieThresholds& thresholds = {},
    double epsilon = kDefaultEpsilon, PdMode mode = PdMode::kAntisymmetric);

enum class HistogramSource {
  kDebiased,  // j values
  kRaw,       // per-order phi values
};

HistogramSource ParseHistogramSource(std::string_view name);

struct Histogram {
  std::vector<double> edges;  // bin_count + 1 edges over [0, 1]
  std::vector<std::size_t> counts;
};

// Equal-width histogram of preferences over [0, 1]; 1.0 lands in the last
// bin. With `pair` set only that pair is counted, oriented as J(first >
// second); otherwise every pair in canonical orientation. Throws
// Error(kConfiguration) for bin_count < 2.
Histogram PreferenceHistogram(
    const PreferenceDataset& dataset,
    const std::optional<std::pair<ModelId, ModelId>>& pair,
    std::size_t bin_count, HistogramSource source = HistogramSource::kDebiased);

std::string HistogramToCsv(const Histogram& histogram);
std::string PdBinsToCsv(std::span<const PdBin> bins);

}  // namespace judgerank

#endif  // JUDGERANK_BIAS_H_
