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

#ifndef JUDGERANK_SIMJUDGE_H_
#define JUDGERANK_SIMJUDGE_H_

// Synthetic judge. For output orders (first, second) on instruction k:
//
//   p_first = logistic(gamma[first][k] - gamma[second][k] + bias_b
//                      + cyclic_c * skew[first][second] + noise)
//
// with noise ~ Normal(0, noise_sd) drawn per call. The skew term is
// antisymmetric, so with bias_b = 0 the two orders agree; it is also the only
// term that can break Bradley-Terry consistency across a triplet.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "judgerank/core.h"
#include "judgerank/evaluator.h"

namespace judgerank {

struct SimConfig {
  std::vector<ModelId> models;
  std::size_t instructions = 0;
  // gamma[m][k]: latent quality of model m's output on instruction k.
  std::vector<std::vector<double>> gamma;
  double bias_b = 0.0;
  double cyclic_c = 0.0;
  // skew[i][j] = -skew[j][i]. Empty means all zero.
  std::vector<std::vector<double>> skew;
  double noise_sd = 0.0;
  std::uint64_t seed = 0;
  int calls_per_order = 2;
  std::string judge_id = "sim";

  // Throws Error(kValidation) on shape mismatches, non-finite gamma, a skew
  // that is not exactly antisymmetric, or negative noise/cyclic scale.
  void Validate() const;

  // "inst-0000", "inst-0001", ...: zero padded so lexicographic order is
  // numeric order.
  std::vector<InstructionId> InstructionIds() const;

  double Skew(std::size_t i, std::size_t j) const {
    return skew.empty() ? 0.0 : skew[i][j];
  }
};

// Pool of `quality.size()` models named m01, m02, ... with gamma[m][k] =
// quality[m] + jitter * Normal(0, 1) drawn from the seed.
SimConfig MakeSimConfig(const std::vector<double>& quality,
                        std::size_t instructions, std::uint64_t seed,
                        double jitter = 0.0);

// 3x3 cycle: model 0 beats 1, 1 beats 2, 2 beats 0.
std::vector<std::vector<double>> RockPaperScissorsSkew();

// Antisymmetric matrix with upper entries uniform in (-1, 1).
std::vector<std::vector<double>> RandomSkew(std::size_t n, std::uint64_t seed);

// Samples for one unordered pair (model indices i < j) on instruction k:
// calls_per_order for order (i, j) followed by calls_per_order for (j, i).
std::vector<PreferenceSample> SimulatePair(const SimConfig& cfg, std::size_t k,
                                           std::size_t i, std::size_t j);

// Every instruction, unordered pair, order and call, in that nesting.
std::vector<PreferenceSample> Generate(const SimConfig& cfg);

struct GroundTruth {
  Ranking ranking;
  // Two or more models share a mean quality; order among them is by id.
  bool degenerate = false;
};

// Models ordered by mean gamma over instructions.
GroundTruth GroundTruthRanking(const SimConfig& cfg);

std::string SimConfigToJson(const SimConfig& cfg);
SimConfig SimConfigFromJson(std::string_view text);

// Evaluator that serves exactly what Generate would emit for a key.
class SimulatedEvaluator : public PairEvaluator {
 public:
  explicit SimulatedEvaluator(SimConfig cfg);

  PairPreference Evaluate(const ModelId& x, const ModelId& y,
                          const InstructionId& instruction) override;

  const SimConfig& config() const { return cfg_; }

 private:
  SimConfig cfg_;
  std::vector<InstructionId> instruction_ids_;
};

}  // namespace judgerank

#endif  // JUDGERANK_SIMJUDGE_H_
