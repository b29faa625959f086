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

#include "judgerank/transitivity.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "judgerank/errors.h"
#include "judgerank/text_io.h"
#include "judgerank/triplet_kernels.h"

namespace judgerank {
namespace {

constexpr Relation W = Relation::kWins;
constexpr Relation L = Relation::kLoses;
constexpr Relation T = Relation::kTie;

// The relation triples that no weak order of {A, B, C} produces.
constexpr std::array<std::array<Relation, 3>, 14> kPatterns = {{
    {W, W, T},
    {W, W, L},
    {W, T, T},
    {W, T, L},
    {T, W, T},
    {T, W, L},
    {T, T, W},
    {T, T, L},
    {T, L, W},
    {T, L, T},
    {L, T, W},
    {L, T, T},
    {L, L, W},
    {L, L, T},
}};

double Clamp(double p, double epsilon) {
  return std::clamp(p, epsilon, 1.0 - epsilon);
}

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

// p * ln(p / m), with the 0 * ln 0 = 0 convention.
double KlTerm(double p, double m) {
  if (p <= 0.0) return 0.0;
  return p * std::log(p / m);
}

// Reflects an out-of-range index back into [0, n) the way scipy's "reflect"
// mode does: (d c b a | a b c d | d c b a).
std::size_t Reflect(long long index, std::size_t n) {
  const long long period = 2 * static_cast<long long>(n);
  long long i = index % period;
  if (i < 0) i += period;
  if (i >= static_cast<long long>(n)) i = period - 1 - i;
  return static_cast<std::size_t>(i);
}

}  // namespace

const char* RelationSymbol(Relation r) {
  switch (r) {
    case Relation::kWins:
      return ">";
    case Relation::kLoses:
      return "<";
    case Relation::kTie:
      return "~";
  }
  return "?";
}

void TieThresholds::Validate() const {
  if (!(lo >= 0.0 && hi <= 1.0 && lo <= hi)) {
    throw Error(ErrorCode::kConfiguration,
                "tie thresholds must satisfy 0 <= lo <= hi <= 1, got [" +
                    FormatDouble(lo) + ", " + FormatDouble(hi) + "]");
  }
}

Relation ClassifyRelation(double j, const TieThresholds& thresholds) {
  thresholds.Validate();
  if (j > thresholds.hi) return Relation::kWins;
  if (j < thresholds.lo) return Relation::kLoses;
  return Relation::kTie;
}

const std::array<std::array<Relation, 3>, 14>& NonTransitivePatterns() {
  return kPatterns;
}

std::string TripletVerdict::PatternName() const {
  if (pattern == 0) return "transitive";
  std::string name = "A";
  name += RelationSymbol(relations[0]);
  name += "B,B";
  name += RelationSymbol(relations[1]);
  name += "C,A";
  name += RelationSymbol(relations[2]);
  name += "C";
  return name;
}

TripletVerdict ClassifyTriplet(double j_ab, double j_bc, double j_ac,
                               const TieThresholds& thresholds) {
  TripletVerdict verdict;
  verdict.relations = {ClassifyRelation(j_ab, thresholds),
                       ClassifyRelation(j_bc, thresholds),
                       ClassifyRelation(j_ac, thresholds)};
  for (std::size_t i = 0; i < kPatterns.size(); ++i) {
    if (kPatterns[i] == verdict.relations) {
      verdict.pattern = static_cast<int>(i) + 1;
      break;
    }
  }
  return verdict;
}

double QualityGap(double phi, double epsilon) {
  double p = Clamp(phi, epsilon);
  return std::log(p / (1.0 - p));
}

double ExpectedWinRate(double s_left, double s_right) {
  return Sigmoid(s_left - s_right);
}

double BernoulliJsd(double p, double q) {
  double m1 = 0.5 * (p + q);
  double m0 = 0.5 * ((1.0 - p) + (1.0 - q));
  double kl_pm = KlTerm(p, m1) + KlTerm(1.0 - p, m0);
  double kl_qm = KlTerm(q, m1) + KlTerm(1.0 - q, m0);
  // Rounding can leave a tiny negative value for identical inputs.
  return std::max(0.0, 0.5 * (kl_pm + kl_qm));
}

double SntdFromPreferences(double phi_ab, double phi_bc, double phi_ac,
                           double epsilon) {
  const double s_ab = QualityGap(phi_ab, epsilon);
  const double s_bc = QualityGap(phi_bc, epsilon);
  const double s_ac = QualityGap(phi_ac, epsilon);
  const double hat_ab = ExpectedWinRate(s_ac, s_bc);
  const double hat_bc = ExpectedWinRate(s_ac, s_ab);
  const double hat_ac = ExpectedWinRate(s_ab, -s_bc);
  return (BernoulliJsd(Clamp(phi_ab, epsilon), hat_ab) +
          BernoulliJsd(Clamp(phi_bc, epsilon), hat_bc) +
          BernoulliJsd(Clamp(phi_ac, epsilon), hat_ac)) /
         3.0;
}

std::optional<std::array<double, 3>> TripletPreferences(
    const PreferenceDataset& dataset, const InstructionId& instruction,
    const Triplet& triplet) {
  auto ab = dataset.Preference(instruction, triplet.a, triplet.b);
  auto bc = dataset.Preference(instruction, triplet.b, triplet.c);
  auto ac = dataset.Preference(instruction, triplet.a, triplet.c);
  if (!ab || !bc || !ac) return std::nullopt;
  return std::array<double, 3>{*ab, *bc, *ac};
}

double SntdTriplet(const Triplet& triplet, const PairPreference* ab,
                   const PairPreference* bc, const PairPreference* ac,
                   double epsilon) {
  auto oriented = [](const PairPreference* pair, const ModelId& x,
                     const ModelId& y) {
    if (pair == nullptr) {
      throw Error(ErrorCode::kIncompleteTriplet,
                  "missing pair (" + x + ", " + y + ")");
    }
    bool matches = (pair->model_a == x && pair->model_b == y) ||
                   (pair->model_a == y && pair->model_b == x);
    if (!matches) {
      throw Error(ErrorCode::kIncompleteTriplet,
                  "pair (" + pair->model_a + ", " + pair->model_b +
                      ") does not match (" + x + ", " + y + ")");
    }
    return pair->PreferenceFor(x);
  };
  return SntdFromPreferences(oriented(ab, triplet.a, triplet.b),
                             oriented(bc, triplet.b, triplet.c),
                             oriented(ac, triplet.a, triplet.c), epsilon);
}

std::vector<TripletMetrics> PerInstructionMetrics(
    const PreferenceDataset& dataset, const Triplet& triplet,
    const TieThresholds& thresholds, double epsilon) {
  thresholds.Validate();
  std::vector<TripletMetrics> out;
  for (const InstructionId& instruction : dataset.instructions()) {
    auto prefs = TripletPreferences(dataset, instruction, triplet);
    if (!prefs) continue;
    const auto& [ab, bc, ac] = *prefs;
    TripletMetrics m;
    m.instruction_id = instruction;
    m.triplet = triplet;
    m.verdict = ClassifyTriplet(ab, bc, ac, thresholds);
    m.sntd = SntdFromPreferences(ab, bc, ac, epsilon);
    out.push_back(std::move(m));
  }
  return out;
}

DatasetMetrics ComputeDatasetMetrics(const PreferenceDataset& dataset,
                                     const Triplet& triplet,
                                     const TieThresholds& thresholds,
                                     double epsilon) {
  std::vector<TripletMetrics> rows =
      PerInstructionMetrics(dataset, triplet, thresholds, epsilon);
  if (rows.empty()) {
    throw Error(ErrorCode::kEmptyInput,
                "no instruction compares all of " + triplet.a + ", " +
                    triplet.b + ", " + triplet.c);
  }
  DatasetMetrics metrics;
  double sntd_total = 0.0;
  for (const TripletMetrics& row : rows) {
    if (row.verdict.non_transitive()) ++metrics.non_transitive;
    sntd_total += row.sntd;
  }
  metrics.complete_instructions = rows.size();
  const double n = static_cast<double>(rows.size());
  metrics.pnt_percent =
      100.0 * static_cast<double>(metrics.non_transitive) / n;
  metrics.mean_sntd = sntd_total / n;
  return metrics;
}

std::vector<Triplet> AllPermutations(std::span<const ModelId> models) {
  std::vector<Triplet> out;
  const std::size_t n = models.size();
  if (n >= 3) out.reserve(n * (n - 1) * (n - 2));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        out.push_back({models[i], models[j], models[k]});
      }
    }
  }
  return out;
}

std::vector<Triplet> AllCombinations(std::span<const ModelId> models) {
  std::vector<Triplet> out;
  const std::size_t n = models.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        out.push_back({models[i], models[j], models[k]});
      }
    }
  }
  return out;
}

double HeatmapGrid::BinLow(std::size_t index) const {
  return -range + 2.0 * range * static_cast<double>(index) /
                      static_cast<double>(bins);
}

std::size_t HeatmapBin(double value, double range, std::size_t bins) {
  if (!(range > 0.0)) return bins / 2;
  double scaled = (value + range) / (2.0 * range) * static_cast<double>(bins);
  if (scaled <= 0.0) return 0;
  auto index = static_cast<std::size_t>(std::floor(scaled));
  return std::min(index, bins - 1);
}

std::vector<double> GaussianSmooth(std::span<const double> grid,
                                   std::size_t bins, double sigma) {
  std::vector<double> out(grid.begin(), grid.end());
  if (sigma <= 0.0 || bins == 0) return out;
  const auto radius = static_cast<long long>(4.0 * sigma + 0.5);
  std::vector<double> weights(2 * radius + 1);
  double total = 0.0;
  for (long long k = -radius; k <= radius; ++k) {
    double w = std::exp(-0.5 * static_cast<double>(k * k) / (sigma * sigma));
    weights[k + radius] = w;
    total += w;
  }
  for (double& w : weights) w /= total;

  std::vector<double> tmp(out.size(), 0.0);
  // Along y (contiguous).
  for (std::size_t x = 0; x < bins; ++x) {
    for (std::size_t y = 0; y < bins; ++y) {
      double acc = 0.0;
      for (long long k = -radius; k <= radius; ++k) {
        std::size_t yy = Reflect(static_cast<long long>(y) + k, bins);
        acc += weights[k + radius] * out[x * bins + yy];
      }
      tmp[x * bins + y] = acc;
    }
  }
  // Along x.
  for (std::size_t x = 0; x < bins; ++x) {
    for (std::size_t y = 0; y < bins; ++y) {
      double acc = 0.0;
      for (long long k = -radius; k <= radius; ++k) {
        std::size_t xx = Reflect(static_cast<long long>(x) + k, bins);
        acc += weights[k + radius] * tmp[xx * bins + y];
      }
      out[x * bins + y] = acc;
    }
  }
  return out;
}

HeatmapGrid ComputeHeatmapGrid(const PreferenceDataset& dataset,
                               std::span<const double> reference_win_rates,
                               const HeatmapOptions& options) {
  const auto& models = dataset.models();
  if (models.size() < 3) {
    throw Error(ErrorCode::kInsufficientModels,
                "heatmap needs at least 3 models, got " +
                    std::to_string(models.size()));
  }
  if (reference_win_rates.size() != models.size()) {
    throw Error(ErrorCode::kValidation,
                "expected one reference win rate per model");
  }
  if (options.bins == 0) {
    throw Error(ErrorCode::kConfiguration, "heatmap needs at least one bin");
  }
  options.thresholds.Validate();

  HeatmapGrid grid;
  grid.bins = options.bins;
  if (options.range) {
    grid.range = *options.range;
  } else {
    auto [lo, hi] = std::minmax_element(reference_win_rates.begin(),
                                        reference_win_rates.end());
    grid.range = *hi - *lo;
  }

  const std::size_t n = models.size();
  std::vector<TripletIndex> permutations;
  permutations.reserve(n * (n - 1) * (n - 2));
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      if (j == i) continue;
      for (std::uint32_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        permutations.push_back({i, j, k});
      }
    }
  }
  grid.permutations = permutations.size();

  std::vector<DatasetMetrics> results;
  if (options.parallel) {
    PreferenceTensor tensor = PreferenceTensor::FromDataset(dataset);
    results = EvaluateTripletsParallel(tensor, permutations,
                                       options.thresholds, options.epsilon);
  } else {
    std::vector<Triplet> named;
    named.reserve(permutations.size());
    for (const TripletIndex& t : permutations) {
      named.push_back({models[t.a], models[t.b], models[t.c]});
    }
    results = EvaluateTripletsSerial(dataset, named, options.thresholds,
                                     options.epsilon);
  }

  const std::size_t cells = grid.bins * grid.bins;
  std::vector<double> pnt_sum(cells, 0.0);
  std::vector<double> sntd_sum(cells, 0.0);
  grid.cells.assign(cells, HeatmapCell{});
  for (std::size_t p = 0; p < permutations.size(); ++p) {
    const DatasetMetrics& m = results[p];
    if (m.complete_instructions == 0) continue;
    const TripletIndex& t = permutations[p];
    double dx = reference_win_rates[t.a] - reference_win_rates[t.b];
    double dy = reference_win_rates[t.b] - reference_win_rates[t.c];
    std::size_t cell = HeatmapBin(dx, grid.range, grid.bins) * grid.bins +
                       HeatmapBin(dy, grid.range, grid.bins);
    pnt_sum[cell] += m.pnt_percent;
    sntd_sum[cell] += m.mean_sntd;
    ++grid.cells[cell].count;
  }
  for (std::size_t c = 0; c < cells; ++c) {
    if (grid.cells[c].count == 0) continue;
    const double count = static_cast<double>(grid.cells[c].count);
    pnt_sum[c] /= count;
    sntd_sum[c] /= count;
  }
  std::vector<double> pnt =
      GaussianSmooth(pnt_sum, grid.bins, options.smoothing_sigma);
  std::vector<double> sntd =
      GaussianSmooth(sntd_sum, grid.bins, options.smoothing_sigma);
  for (std::size_t c = 0; c < cells; ++c) {
    grid.cells[c].mean_pnt = pnt[c];
    grid.cells[c].mean_sntd = sntd[c];
  }
  return grid;
}

std::string HeatmapToCsv(const HeatmapGrid& grid) {
  std::string out = "x_bin,y_bin,mean_pnt,mean_sntd,count\n";
  for (std::size_t x = 0; x < grid.bins; ++x) {
    for (std::size_t y = 0; y < grid.bins; ++y) {
      const HeatmapCell& c = grid.cell(x, y);
      out += std::to_string(x) + ',' + std::to_string(y) + ',' +
             FormatDouble(c.mean_pnt) + ',' + FormatDouble(c.mean_sntd) +
             ',' + std::to_string(c.count) + '\n';
    }
  }
  return out;
}

std::string TripletMetricsToCsv(std::span<const TripletMetrics> metrics) {
  std::string out = "instruction_id,a,b,c,pattern,sntd\n";
  for (const TripletMetrics& m : metrics) {
    out += CsvField(m.instruction_id) + ',' + CsvField(m.triplet.a) + ',' +
           CsvField(m.triplet.b) + ',' + CsvField(m.triplet.c) + ',' +
           CsvField(m.verdict.PatternName()) + ',' + FormatDouble(m.sntd) +
           '\n';
  }
  return out;
}

}  // namespace judgerank
