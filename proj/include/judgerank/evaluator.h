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

#ifndef JUDGERANK_EVALUATOR_H_
#define JUDGERANK_EVALUATOR_H_

#include <atomic>
#include <cstdint>

#include "judgerank/core.h"

namespace judgerank {

// Source of pair preferences for the tournament drivers: a live judge, a
// cached dataset or the simulator.
class PairEvaluator {
 public:
  virtual ~PairEvaluator() = default;

  // Preference record for the unordered pair {x, y} on `instruction`, in
  // canonical orientation (model_a < model_b).
  virtual PairPreference Evaluate(const ModelId& x, const ModelId& y,
                                  const InstructionId& instruction) = 0;

  // Repeated evaluation of the same key returns the same record.
  virtual bool deterministic() const { return true; }

  // Number of Evaluate calls served so far.
  std::int64_t evaluations() const { return evaluations_.load(); }

 protected:
  void CountEvaluation() { evaluations_.fetch_add(1); }

 private:
  std::atomic<std::int64_t> evaluations_{0};
};

// Serves records from a precomputed dataset. Throws
// Error(kMissingComparison) for pairs the dataset does not contain.
class DatasetEvaluator : public PairEvaluator {
 public:
  explicit DatasetEvaluator(PreferenceDataset dataset)
      : dataset_(std::move(dataset)) {}

  PairPreference Evaluate(const ModelId& x, const ModelId& y,
                          const InstructionId& instruction) override;

  const PreferenceDataset& dataset() const { return dataset_; }

 private:
  PreferenceDataset dataset_;
};

}  // namespace judgerank

#endif  // JUDGERANK_EVALUATOR_H_
