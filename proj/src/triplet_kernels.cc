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

#include "judgerank/triplet_kernels.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <omp.h>

#include "judgerank/errors.h"

namespace judgerank {

PreferenceTensor PreferenceTensor::FromDataset(
    const PreferenceDataset& dataset) {
  PreferenceTensor t;
  const auto& models = dataset.models();
  const auto& instructions = dataset.instructions();
  t.num_models_ = models.size();
  t.num_instructions_ = instructions.size();
  t.values_.assign(t.num_instructions_ * t.num_models_ * t.num_models_,
                   std::numeric_limits<double>::quiet_NaN());
  auto index_in = [](const auto& sorted, const auto& id) {
    return static_cast<std::size_t>(
        std::lower_bound(sorted.begin(), sorted.end(), id) - sorted.begin());
  };
  for (const auto& [key, pair] : dataset.pairs()) {
    std::size_t k = index_in(instructions, key.instruction_id);
    std::size_t a = index_in(models, key.model_a);
    std::size_t b = index_in(models, key.model_b);
    std::size_t base = k * t.num_models_ * t.num_models_;
    t.values_[base + a * t.num_models_ + b] = pair.j_ab;
    t.values_[base + b * t.num_models_ + a] = 1.0 - pair.j_ab;
  }
  return t;
}

std::vector<DatasetMetrics> EvaluateTripletsParallel(
    const PreferenceTensor& tensor, std::span<const TripletIndex> triplets,
    const TieThresholds& thresholds, double epsilon) {
  thresholds.Validate();
  std::vector<DatasetMetrics> out(triplets.size());
  const auto count = static_cast<std::int64_t>(triplets.size());
  const std::size_t num_instructions = tensor.num_instructions();

#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t t = 0; t < count; ++t) {
    const TripletIndex& tri = triplets[static_cast<std::size_t>(t)];
    DatasetMetrics m;
    double sntd_total = 0.0;
    for (std::size_t k = 0; k < num_instructions; ++k) {
      const double ab = tensor.j(k, tri.a, tri.b);
      const double bc = tensor.j(k, tri.b, tri.c);
      const double ac = tensor.j(k, tri.a, tri.c);
      if (std::isnan(ab) || std::isnan(bc) || std::isnan(ac)) continue;
      ++m.complete_instructions;
      if (ClassifyTriplet(ab, bc, ac, thresholds).non_transitive()) {
        ++m.non_transitive;
      }
      sntd_total += SntdFromPreferences(ab, bc, ac, epsilon);
    }
    if (m.complete_instructions > 0) {
      const double n = static_cast<double>(m.complete_instructions);
      m.pnt_percent = 100.0 * static_cast<double>(m.non_transitive) / n;
      m.mean_sntd = sntd_total / n;
    }
    out[static_cast<std::size_t>(t)] = m;
  }
  return out;
}

std::vector<DatasetMetrics> EvaluateTripletsSerial(
    const PreferenceDataset& dataset, std::span<const Triplet> triplets,
    const TieThresholds& thresholds, double epsilon) {
  std::vector<DatasetMetrics> out;
  out.reserve(triplets.size());
  for (const Triplet& triplet : triplets) {
    try {
      out.push_back(
          ComputeDatasetMetrics(dataset, triplet, thresholds, epsilon));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEmptyInput) throw;
      out.push_back(DatasetMetrics{});
    }
  }
  return out;
}

void SetParallelJobs(int jobs) {
  if (jobs >= 1) omp_set_num_threads(jobs);
}

}  // namespace judgerank
