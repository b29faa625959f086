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

#include "judgerank/tournament.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "judgerank/correlation.h"
#include "judgerank/random.h"
#include "judgerank/text_io.h"

namespace judgerank {
namespace {

PreferenceDataset ToDataset(const std::map<PairKey, PairPreference>& records,
                            std::vector<ModelId> models,
                            std::span<const InstructionId> instructions) {
  std::vector<PairPreference> pairs;
  pairs.reserve(records.size());
  for (const auto& [key, pair] : records) pairs.push_back(pair);
  return PreferenceDataset::FromPairs(
      std::move(pairs), std::move(models),
      std::vector<InstructionId>(instructions.begin(), instructions.end()));
}

// Collects records for one tournament run, consulting the prior dataset
// before the evaluator.
class Collector {
 public:
  Collector(PairEvaluator& evaluator, std::span<const InstructionId> instructions,
            const TournamentOptions& options)
      : evaluator_(evaluator), instructions_(instructions), options_(options) {}

  // Evaluates {x, y} on every instruction.
  void Play(const ModelId& x, const ModelId& y) {
    for (const InstructionId& instruction : instructions_) {
      const PairPreference* prior =
          options_.prior ? options_.prior->Find(instruction, x, y) : nullptr;
      PairPreference record =
          prior != nullptr ? *prior : evaluator_.Evaluate(x, y, instruction);
      if (options_.transform) record = options_.transform(record);
      PairKey expected = CanonicalKey(instruction, x, y);
      if (record.key() != expected) {
        throw Error(ErrorCode::kValidation,
                    "evaluator returned a record for the wrong pair: (" +
                        record.model_a + ", " + record.model_b + ")");
      }
      record.Validate();
      records_[expected] = std::move(record);
    }
  }

  const std::map<PairKey, PairPreference>& records() const { return records_; }

 private:
  PairEvaluator& evaluator_;
  std::span<const InstructionId> instructions_;
  const TournamentOptions& options_;
  std::map<PairKey, PairPreference> records_;
};

std::vector<ModelId> SortedUnique(std::span<const ModelId> models) {
  std::vector<ModelId> sorted(models.begin(), models.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::kValidation, "duplicate model in tournament pool");
  }
  if (sorted.size() < 2) {
    throw Error(ErrorCode::kInsufficientModels,
                "a tournament needs at least two models");
  }
  return sorted;
}

void Finish(TournamentResult& result, const std::map<PairKey, PairPreference>& records,
            std::vector<ModelId> models,
            std::span<const InstructionId> instructions,
            const TournamentOptions& options,
            std::optional<std::vector<double>> warm_start) {
  result.dataset = ToDataset(records, std::move(models), instructions);
  result.win_matrix = BuildWinMatrix(result.dataset, options.scheme);
  FitOptions fit_options = options.fit;
  if (warm_start) fit_options.initial_beta = std::move(warm_start);
  result.fit = FitBradleyTerry(result.win_matrix, fit_options);
  result.elo = ToElo(result.fit, options.anchor);
  result.ranking = result.elo.ToRanking();
  result.comparisons_made = result.schedule.size();
}

}  // namespace

PairPreference DatasetEvaluator::Evaluate(const ModelId& x, const ModelId& y,
                                          const InstructionId& instruction) {
  CountEvaluation();
  const PairPreference* pair = dataset_.Find(instruction, x, y);
  if (pair == nullptr) {
    throw Error(ErrorCode::kMissingComparison,
                "dataset has no record for (" + x + ", " + y +
                    ") on instruction " + instruction);
  }
  return *pair;
}

TournamentResult RoundRobin(std::span<const ModelId> models,
                            std::span<const InstructionId> instructions,
                            PairEvaluator& evaluator,
                            const TournamentOptions& options) {
  std::vector<ModelId> pool = SortedUnique(models);
  std::vector<std::pair<ModelId, ModelId>> pairs;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (std::size_t j = i + 1; j < pool.size(); ++j) {
      pairs.emplace_back(pool[i], pool[j]);
    }
  }

  TournamentResult result;
  Collector collector(evaluator, instructions, options);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto& [a, b] = pairs[p];
    try {
      collector.Play(a, b);
    } catch (const std::exception& e) {
      // Records of the failed pair are dropped so the remaining list is
      // exactly what still has to be played.
      std::map<PairKey, PairPreference> done;
      for (const auto& [key, record] : collector.records()) {
        if (!(key.model_a == a && key.model_b == b)) done.emplace(key, record);
      }
      throw PartialResultError(
          std::string("round-robin stopped at (") + a + ", " + b + "): " +
              e.what(),
          ToDataset(done, pool, instructions),
          std::vector<std::pair<ModelId, ModelId>>(pairs.begin() + p,
                                                    pairs.end()));
    }
    result.schedule.push_back({a, b, instructions.size()});
  }
  Finish(result, collector.records(), pool, instructions, options,
         std::nullopt);
  return result;
}

std::size_t SwimOpponentCount(std::size_t ranked) {
  if (ranked <= 2) return 1;
  // ceil(log2(s)) is the bit width of s - 1.
  return static_cast<std::size_t>(std::bit_width(ranked - 1));
}

std::size_t SwimTotalComparisons(std::size_t models) {
  std::size_t total = 0;
  for (std::size_t s = 1; s < models; ++s) total += SwimOpponentCount(s);
  return total;
}

TournamentResult Swim(std::span<const ModelId> models,
                      std::span<const InstructionId> instructions,
                      PairEvaluator& evaluator, const SwimConfig& config) {
  std::vector<ModelId> unranked = SortedUnique(models);
  const std::vector<ModelId> pool = unranked;
  const TournamentOptions& options = config.options;
  std::mt19937_64 rng(config.rng_seed);

  auto take_random = [&rng](std::vector<ModelId>& from) {
    std::size_t index = UniformIndex(rng, from.size());
    ModelId picked = from[index];
    from.erase(from.begin() + static_cast<std::ptrdiff_t>(index));
    return picked;
  };

  TournamentResult result;
  Collector collector(evaluator, instructions, options);
  std::map<ModelId, double> beta;  // latest coefficients
  std::vector<ModelId> ranked = {take_random(unranked)};

  auto play = [&](const ModelId& model, const ModelId& opponent) {
    try {
      collector.Play(model, opponent);
    } catch (const std::exception& e) {
      std::map<PairKey, PairPreference> done;
      for (const auto& [key, record] : collector.records()) {
        if (CanonicalKey(key.instruction_id, model, opponent) != key) {
          done.emplace(key, record);
        }
      }
      throw PartialResultError(
          "swim stopped at (" + model + ", " + opponent + "): " + e.what(),
          ToDataset(done, pool, instructions), {{model, opponent}});
    }
    result.schedule.push_back({model, opponent, instructions.size()});
  };

  auto refit = [&](std::vector<ModelId> members) {
    std::sort(members.begin(), members.end());
    std::map<PairKey, PairPreference> subset;
    for (const auto& [key, record] : collector.records()) {
      if (std::binary_search(members.begin(), members.end(), key.model_a) &&
          std::binary_search(members.begin(), members.end(), key.model_b)) {
        subset.emplace(key, record);
      }
    }
    PreferenceDataset ds = ToDataset(subset, members, instructions);
    WinMatrix w = BuildWinMatrix(ds, options.scheme);
    FitOptions fit_options = options.fit;
    std::vector<double> start;
    for (const ModelId& m : w.models()) {
      auto it = beta.find(m);
      start.push_back(it == beta.end() ? 0.0 : it->second);
    }
    fit_options.initial_beta = std::move(start);
    BtFit fit = FitBradleyTerry(w, fit_options);
    for (std::size_t i = 0; i < fit.models.size(); ++i) {
      beta[fit.models[i]] = fit.beta[i];
    }
  };

  while (!unranked.empty()) {
    ModelId entrant = take_random(unranked);
    const std::size_t opponents = SwimOpponentCount(ranked.size());

    std::vector<ModelId> remaining = ranked;
    ModelId first = take_random(remaining);
    std::vector<ModelId> members = ranked;
    members.push_back(entrant);

    play(entrant, first);
    refit(members);
    for (std::size_t round = 1; round < opponents; ++round) {
      const double own = beta.at(entrant);
      // remaining is sorted, so the first minimum is the smallest id.
      auto best = remaining.begin();
      double best_gap = std::abs(beta.at(*best) - own);
      for (auto it = remaining.begin() + 1; it != remaining.end(); ++it) {
        double gap = std::abs(beta.at(*it) - own);
        if (gap < best_gap) {
          best = it;
          best_gap = gap;
        }
      }
      ModelId opponent = *best;
      remaining.erase(best);
      play(entrant, opponent);
      refit(members);
    }
    ranked.insert(std::upper_bound(ranked.begin(), ranked.end(), entrant),
                  entrant);
  }

  std::vector<double> warm;
  for (const ModelId& m : pool) warm.push_back(beta.count(m) ? beta.at(m) : 0.0);
  Finish(result, collector.records(), pool, instructions, options,
         std::move(warm));
  return result;
}

BaselineSensitivity ComputeBaselineSensitivity(
    const PreferenceDataset& dataset) {
  BaselineSensitivity out;
  const auto& models = dataset.models();
  if (models.size() < 2) {
    throw Error(ErrorCode::kInsufficientModels,
                "baseline sensitivity needs at least two models");
  }
  for (const ModelId& baseline : models) {
    out.baselines.push_back(baseline);
    out.rankings.push_back(BaselineRating(dataset, baseline));
  }
  const std::size_t lists = out.rankings.size();
  std::size_t stable = 0;
  for (const ModelId& m : models) {
    auto first = out.rankings[0].PositionOf(m);
    bool same = true;
    for (std::size_t l = 1; l < lists && same; ++l) {
      same = out.rankings[l].PositionOf(m) == first;
    }
    stable += same;
  }
  out.stable_fraction =
      static_cast<double>(stable) / static_cast<double>(models.size());

  double agreement_total = 0.0;
  std::size_t list_pairs = 0;
  for (std::size_t l1 = 0; l1 < lists; ++l1) {
    for (std::size_t l2 = l1 + 1; l2 < lists; ++l2) {
      std::size_t equal = 0;
      for (const ModelId& m : models) {
        equal += out.rankings[l1].PositionOf(m) == out.rankings[l2].PositionOf(m);
      }
      agreement_total +=
          static_cast<double>(equal) / static_cast<double>(models.size());
      ++list_pairs;
    }
  }
  out.mean_pairwise_agreement =
      agreement_total / static_cast<double>(list_pairs);
  return out;
}

std::string WinMatrixToCsv(const WinMatrix& w) {
  std::string out = "model";
  for (const ModelId& m : w.models()) out += ',' + CsvField(m);
  out += '\n';
  for (std::size_t i = 0; i < w.size(); ++i) {
    out += CsvField(w.models()[i]);
    for (std::size_t j = 0; j < w.size(); ++j) {
      out += ',' + FormatDouble(w(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string ScheduleToCsv(std::span<const ScheduleEntry> schedule) {
  std::string out = "step,model,opponent,instructions\n";
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    out += std::to_string(i + 1) + ',' + CsvField(schedule[i].model) + ',' +
           CsvField(schedule[i].opponent) + ',' +
           std::to_string(schedule[i].instructions) + '\n';
  }
  return out;
}

void WriteTournamentResult(const TournamentResult& result, LabelScheme scheme,
                           const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  WriteFileAtomic(dir / "win_matrix.csv", WinMatrixToCsv(result.win_matrix));
  WriteFileAtomic(dir / "elo.csv", EloTableToCsv(result.elo, scheme));
  WriteFileAtomic(dir / "schedule.csv", ScheduleToCsv(result.schedule));
  WriteFileAtomic(dir / "ranking.csv", RankingToCsv(result.ranking));
}

}  // namespace judgerank
