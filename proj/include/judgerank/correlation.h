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

#ifndef JUDGERANK_CORRELATION_H_
#define JUDGERANK_CORRELATION_H_

#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "judgerank/core.h"

namespace judgerank {

// 1-based fractional ranks of `scores` where the highest score is rank 1;
// tied scores share the mean of the ranks they span.
std::vector<double> FractionalRanks(std::span<const double> scores);

// Spearman's rho: Pearson correlation of the fractional rank vectors of the
// two rankings' scores. Throws Error(kDomain) when the model sets differ or
// have fewer than two members, and when either side is constant.
double Spearman(const Ranking& r1, const Ranking& r2);

// Kendall's tau-b with tie correction. Same errors as Spearman.
double Kendall(const Ranking& r1, const Ranking& r2);

enum class ReferenceKind {
  kAuto,   // decided by header name, then by the values
  kRank,   // lower is better
  kScore,  // higher is better
};

ReferenceKind ParseReferenceKind(std::string_view name);

// Reads `model,<value>` CSV (header required). The value column is a rank
// when the header names it "rank", a score for "score"/"elo", and for any
// other name a rank exactly when the values are a permutation of 1..n.
// Ranks are stored as negated scores so higher is always better. Lines
// starting with '#' are comments. Also accepts the `rank,model,score`
// ranking export, using its score column.
Ranking LoadReferenceRanking(const std::filesystem::path& path,
                             ReferenceKind kind = ReferenceKind::kAuto);

// CSV `rank,model,score`.
std::string RankingToCsv(const Ranking& ranking);

}  // namespace judgerank

#endif  // JUDGERANK_CORRELATION_H_
