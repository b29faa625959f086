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

#include "judgerank/correlation.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "judgerank/errors.h"
#include "judgerank/text_io.h"

namespace judgerank {
namespace {

// Scores of r2 aligned with the model order of r1.
std::pair<std::vector<double>, std::vector<double>> AlignedScores(
    const Ranking& r1, const Ranking& r2) {
  if (r1.size() != r2.size()) {
    throw Error(ErrorCode::kDomain, "rankings cover different model sets");
  }
  if (r1.size() < 2) {
    throw Error(ErrorCode::kDomain, "correlation needs at least two models");
  }
  std::vector<double> x;
  std::vector<double> y;
  for (const RankedModel& e : r1.entries()) {
    auto pos = r2.PositionOf(e.model);
    if (!pos) {
      throw Error(ErrorCode::kDomain,
                  "model " + e.model + " missing from second ranking");
    }
    x.push_back(e.score);
    y.push_back(r2.entries()[*pos].score);
  }
  return {std::move(x), std::move(y)};
}

int Sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

std::vector<double> FractionalRanks(std::span<const double> scores) {
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    // Positions i..j (0-based) share ranks i+1..j+1.
    double mid = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mid;
    i = j + 1;
  }
  return ranks;
}

double Spearman(const Ranking& r1, const Ranking& r2) {
  auto [x, y] = AlignedScores(r1, r2);
  std::vector<double> rx = FractionalRanks(x);
  std::vector<double> ry = FractionalRanks(y);
  const double n = static_cast<double>(rx.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    double dx = rx[i] - mean;
    double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorCode::kDomain, "correlation of a constant ranking");
  }
  return sxy / std::sqrt(sxx * syy);
}

double Kendall(const Ranking& r1, const Ranking& r2) {
  auto [x, y] = AlignedScores(r1, r2);
  long long concordant_minus_discordant = 0;
  long long pairs_untied_x = 0;
  long long pairs_untied_y = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      int sx = Sign(x[i] - x[j]);
      int sy = Sign(y[i] - y[j]);
      concordant_minus_discordant += sx * sy;
      pairs_untied_x += sx != 0;
      pairs_untied_y += sy != 0;
    }
  }
  if (pairs_untied_x == 0 || pairs_untied_y == 0) {
    throw Error(ErrorCode::kDomain, "correlation of a constant ranking");
  }
  return static_cast<double>(concordant_minus_discordant) /
         std::sqrt(static_cast<double>(pairs_untied_x) *
                   static_cast<double>(pairs_untied_y));
}

ReferenceKind ParseReferenceKind(std::string_view name) {
  if (name == "auto") return ReferenceKind::kAuto;
  if (name == "rank") return ReferenceKind::kRank;
  if (name == "score") return ReferenceKind::kScore;
  throw Error(ErrorCode::kConfiguration,
              "unknown reference kind '" + std::string(name) +
                  "' (expected auto, rank or score)");
}

Ranking LoadReferenceRanking(const std::filesystem::path& path,
                             ReferenceKind kind) {
  std::istringstream in(ReadFile(path));
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  std::size_t model_col = 0;
  std::size_t value_col = 1;
  std::vector<std::pair<ModelId, double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#' || line == "\r") continue;
    std::vector<std::string> fields = SplitCsvLine(line, line_no);
    if (header.empty()) {
      header = fields;
      if (header.size() == 3 && header[0] == "rank" && header[1] == "model") {
        model_col = 1;
        value_col = 2;
        if (kind == ReferenceKind::kAuto) kind = ReferenceKind::kScore;
      } else if (header.size() != 2 || header[0] != "model") {
        throw ParseError(line_no, "expected header 'model,<rank_or_score>'");
      }
      continue;
    }
    if (fields.size() != header.size()) {
      throw ParseError(line_no, "expected " + std::to_string(header.size()) +
                                    " fields");
    }
    rows.emplace_back(fields[model_col],
                      ParseDouble(fields[value_col], line_no));
  }
  if (header.empty()) throw ParseError(line_no, "missing header");

  if (kind == ReferenceKind::kAuto) {
    const std::string& name = header[value_col];
    if (name == "rank") {
      kind = ReferenceKind::kRank;
    } else if (name == "score" || name == "elo") {
      kind = ReferenceKind::kScore;
    } else {
      std::set<double> values;
      for (const auto& [model, v] : rows) values.insert(v);
      bool permutation = values.size() == rows.size();
      for (std::size_t r = 1; permutation && r <= rows.size(); ++r) {
        permutation = values.contains(static_cast<double>(r));
      }
      kind = permutation ? ReferenceKind::kRank : ReferenceKind::kScore;
    }
  }
  std::vector<RankedModel> entries;
  for (const auto& [model, v] : rows) {
    entries.push_back({model, kind == ReferenceKind::kRank ? -v : v});
  }
  return Ranking::FromScores(std::move(entries));
}

std::string RankingToCsv(const Ranking& ranking) {
  std::string out = "rank,model,score\n";
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    const RankedModel& e = ranking.entries()[i];
    out += std::to_string(i + 1) + ',' + CsvField(e.model) + ',' +
           FormatDouble(e.score) + '\n';
  }
  return out;
}

}  // namespace judgerank
