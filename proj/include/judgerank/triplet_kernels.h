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

#ifndef JUDGERANK_TRIPLET_KERNELS_H_
#define JUDGERANK_TRIPLET_KERNELS_H_

// Bulk evaluation of PNT/SNTD over many triplets.
//
// EvaluateTripletsParallel works on a dense instruction x model x model
// tensor and splits the triplet list across OpenMP threads; each triplet's
// instruction loop runs in a fixed order so results are bit-identical to the
// serial path regardless of thread count. EvaluateTripletsSerial is the
// reference: it goes through the map-based dataset lookups one triplet at a
// time and is kept for testing and benchmarking.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "judgerank/core.h"
#include "judgerank/transitivity.h"

namespace judgerank {

struct TripletIndex {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  std::uint32_t c = 0;
};

// Dense view of a dataset's debiased preferences. j(k, x, y) is J(x > y) on
// instruction k, NaN when the pair was not compared.
class PreferenceTensor {
 public:
  static PreferenceTensor FromDataset(const PreferenceDataset& dataset);

  std::size_t num_models() const { return num_models_; }
  std::size_t num_instructions() const { return num_instructions_; }

  double j(std::size_t instruction, std::size_t x, std::size_t y) const {
    return values_[(instruction * num_models_ + x) * num_models_ + y];
  }

 private:
  std::size_t num_models_ = 0;
  std::size_t num_instructions_ = 0;
  std::vector<double> values_;
};

// Metrics per triplet, aligned with `triplets`. Triplets without a complete
// instruction get complete_instructions == 0 and zero metrics.
std::vector<DatasetMetrics> EvaluateTripletsParallel(
    const PreferenceTensor& tensor, std::span<const TripletIndex> triplets,
    const TieThresholds& thresholds, double epsilon);

std::vector<DatasetMetrics> EvaluateTripletsSerial(
    const PreferenceDataset& dataset, std::span<const Triplet> triplets,
    const TieThresholds& thresholds, double epsilon);

// Sets the OpenMP thread ceiling; values < 1 leave the runtime default.
void SetParallelJobs(int jobs);

}  // namespace judgerank

#endif  // JUDGERANK_TRIPLET_KERNELS_H_
