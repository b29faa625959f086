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

#include "judgerank/simjudge.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "json.hpp"
#include "judgerank/errors.h"
#include "judgerank/random.h"

namespace judgerank {
namespace {

double Logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::string ZeroPad(std::size_t value, std::size_t width) {
  std::string digits = std::to_string(value);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return digits;
}

std::size_t IdWidth(std::size_t count) {
  return std::max<std::size_t>(
      4, std::to_string(count == 0 ? 0 : count - 1).size());
}

void Invalid(const std::string& message) {
  throw Error(ErrorCode::kValidation, "simulator config: " + message);
}

}  // namespace

void SimConfig::Validate() const {
  const std::size_t n = models.size();
  if (n < 2) Invalid("need at least two models");
  std::map<ModelId, int> seen;
  for (const ModelId& m : models) {
    if (m.empty()) Invalid("empty model id");
    if (seen[m]++ > 0) Invalid("duplicate model id " + m);
  }
  if (instructions == 0) Invalid("need at least one instruction");
  if (gamma.size() != n) Invalid("gamma must have one row per model");
  for (const auto& row : gamma) {
    if (row.size() != instructions) {
      Invalid("gamma rows must have one entry per instruction");
    }
    for (double g : row) {
      if (!std::isfinite(g)) Invalid("gamma must be finite");
    }
  }
  if (!std::isfinite(bias_b)) Invalid("bias_b must be finite");
  if (!(cyclic_c >= 0.0) || !std::isfinite(cyclic_c)) {
    Invalid("cyclic_c must be finite and >= 0");
  }
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) {
    Invalid("noise_sd must be finite and >= 0");
  }
  if (calls_per_order < 1) Invalid("calls_per_order must be >= 1");
  if (!skew.empty()) {
    if (skew.size() != n) Invalid("skew must be models x models");
    for (std::size_t i = 0; i < n; ++i) {
      if (skew[i].size() != n) Invalid("skew must be models x models");
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(skew[i][j]) || skew[i][j] != -skew[j][i]) {
          Invalid("skew is not antisymmetric at (" + std::to_string(i) +
                  ", " + std::to_string(j) + ")");
        }
      }
    }
  }
}

std::vector<InstructionId> SimConfig::InstructionIds() const {
  const std::size_t width = IdWidth(instructions);
  std::vector<InstructionId> ids;
  ids.reserve(instructions);
  for (std::size_t k = 0; k < instructions; ++k) {
    ids.push_back("inst-" + ZeroPad(k, width));
  }
  return ids;
}

SimConfig MakeSimConfig(const std::vector<double>& quality,
                        std::size_t instructions, std::uint64_t seed,
                        double jitter) {
  SimConfig cfg;
  cfg.instructions = instructions;
  cfg.seed = seed;
  std::size_t width =
      std::max<std::size_t>(2, std::to_string(quality.size()).size());
  for (std::size_t m = 0; m < quality.size(); ++m) {
    cfg.models.push_back("m" + ZeroPad(m + 1, width));
    std::mt19937_64 rng(SubstreamSeed(seed, "gamma", {m}));
    std::vector<double> row(instructions, quality[m]);
    if (jitter != 0.0) {
      for (double& g : row) g += jitter * StandardNormal(rng);
    }
    cfg.gamma.push_back(std::move(row));
  }
  return cfg;
}

std::vector<std::vector<double>> RockPaperScissorsSkew() {
  return {{0.0, 1.0, -1.0}, {-1.0, 0.0, 1.0}, {1.0, -1.0, 0.0}};
}

std::vector<std::vector<double>> RandomSkew(std::size_t n, std::uint64_t seed) {
  std::vector<std::vector<double>> k(n, std::vector<double>(n, 0.0));
  std::mt19937_64 rng(SubstreamSeed(seed, "skew", {n}));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      k[i][j] = 2.0 * UniformOpen(rng) - 1.0;
      k[j][i] = -k[i][j];
    }
  }
  return k;
}

std::vector<PreferenceSample> SimulatePair(const SimConfig& cfg, std::size_t k,
                                           std::size_t i, std::size_t j) {
  const InstructionId instruction =
      "inst-" + ZeroPad(k, IdWidth(cfg.instructions));
  std::vector<PreferenceSample> out;
  out.reserve(2 * static_cast<std::size_t>(cfg.calls_per_order));
  const std::size_t orders[2][2] = {{i, j}, {j, i}};
  for (std::uint64_t o = 0; o < 2; ++o) {
    const std::size_t first = orders[o][0];
    const std::size_t second = orders[o][1];
    const double logit = cfg.gamma[first][k] - cfg.gamma[second][k] +
                         cfg.bias_b + cfg.cyclic_c * cfg.Skew(first, second);
    for (int call = 0; call < cfg.calls_per_order; ++call) {
      double noise = 0.0;
      if (cfg.noise_sd > 0.0) {
        // Keyed by the unordered pair so the stream does not depend on the
        // order pairs are visited in.
        std::mt19937_64 rng(SubstreamSeed(
            cfg.seed, "noise",
            {k, std::min(i, j), std::max(i, j), o,
             static_cast<std::uint64_t>(call)}));
        noise = cfg.noise_sd * StandardNormal(rng);
      }
      out.push_back({instruction, cfg.models[first], cfg.models[second],
                     cfg.judge_id, call, Logistic(logit + noise)});
    }
  }
  return out;
}

std::vector<PreferenceSample> Generate(const SimConfig& cfg) {
  cfg.Validate();
  std::vector<PreferenceSample> samples;
  const std::size_t n = cfg.models.size();
  for (std::size_t k = 0; k < cfg.instructions; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        auto pair = SimulatePair(cfg, k, i, j);
        samples.insert(samples.end(), pair.begin(), pair.end());
      }
    }
  }
  return samples;
}

GroundTruth GroundTruthRanking(const SimConfig& cfg) {
  std::vector<RankedModel> entries;
  for (std::size_t m = 0; m < cfg.models.size(); ++m) {
    double total = 0.0;
    for (double g : cfg.gamma[m]) total += g;
    entries.push_back(
        {cfg.models[m], total / static_cast<double>(cfg.gamma[m].size())});
  }
  GroundTruth truth;
  truth.ranking = Ranking::FromScores(std::move(entries));
  truth.degenerate = truth.ranking.has_ties();
  return truth;
}

std::string SimConfigToJson(const SimConfig& cfg) {
  nlohmann::ordered_json j;
  j["models"] = cfg.models;
  j["instructions"] = cfg.instructions;
  j["gamma"] = cfg.gamma;
  j["bias_b"] = cfg.bias_b;
  j["cyclic_c"] = cfg.cyclic_c;
  j["skew"] = cfg.skew;
  j["noise_sd"] = cfg.noise_sd;
  j["seed"] = cfg.seed;
  j["calls_per_order"] = cfg.calls_per_order;
  j["judge_id"] = cfg.judge_id;
  return j.dump(2) + "\n";
}

SimConfig SimConfigFromJson(std::string_view text) {
  SimConfig cfg;
  try {
    auto j = nlohmann::json::parse(text);
    cfg.models = j.at("models").get<std::vector<ModelId>>();
    cfg.instructions = j.at("instructions").get<std::size_t>();
    cfg.gamma = j.at("gamma").get<std::vector<std::vector<double>>>();
    cfg.bias_b = j.value("bias_b", 0.0);
    cfg.cyclic_c = j.value("cyclic_c", 0.0);
    cfg.skew = j.value("skew", std::vector<std::vector<double>>{});
    cfg.noise_sd = j.value("noise_sd", 0.0);
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.calls_per_order = j.value("calls_per_order", 2);
    cfg.judge_id = j.value("judge_id", std::string("sim"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse,
                std::string("simulator config JSON: ") + e.what());
  }
  cfg.Validate();
  return cfg;
}

SimulatedEvaluator::SimulatedEvaluator(SimConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.Validate();
  instruction_ids_ = cfg_.InstructionIds();
}

PairPreference SimulatedEvaluator::Evaluate(const ModelId& x, const ModelId& y,
                                            const InstructionId& instruction) {
  CountEvaluation();
  auto index_of = [this](const ModelId& m) {
    auto it = std::find(cfg_.models.begin(), cfg_.models.end(), m);
    if (it == cfg_.models.end()) {
      throw Error(ErrorCode::kLookup, "unknown simulated model " + m);
    }
    return static_cast<std::size_t>(it - cfg_.models.begin());
  };
  // Instruction ids are zero padded and therefore sorted.
  auto it = std::lower_bound(instruction_ids_.begin(), instruction_ids_.end(),
                             instruction);
  if (it == instruction_ids_.end() || *it != instruction) {
    throw Error(ErrorCode::kLookup, "unknown simulated instruction " + instruction);
  }
  std::size_t i = index_of(x);
  std::size_t j = index_of(y);
  if (i == j) throw Error(ErrorCode::kValidation, "model paired with itself");
  auto samples = SimulatePair(cfg_, static_cast<std::size_t>(
                                        it - instruction_ids_.begin()),
                              std::min(i, j), std::max(i, j));
  PreferenceDataset ds = AggregateSamples(samples);
  return ds.pairs().begin()->second;
}

}  // namespace judgerank
