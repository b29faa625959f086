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

#include <gtest/gtest.h>

#include "judgerank/simjudge.h"
#include "judgerank/transitivity.h"

namespace judgerank {
namespace {

PreferenceDataset NoisyCyclicDataset(std::size_t models, std::size_t n,
                                     std::uint64_t seed) {
  std::vector<double> q;
  for (std::size_t m = 0; m < models; ++m) q.push_back(0.3 * static_cast<double>(m));
  SimConfig cfg = MakeSimConfig(q, n, seed, 0.5);
  cfg.cyclic_c = 1.5;
  cfg.skew = RandomSkew(models, seed);
  cfg.noise_sd = 0.4;
  cfg.bias_b = 0.3;
  return AggregateSamples(Generate(cfg));
}

TEST(TripletKernels, TensorMirrorsDataset) {
  PreferenceDataset ds = NoisyCyclicDataset(4, 6, 2);
  PreferenceTensor t = PreferenceTensor::FromDataset(ds);
  ASSERT_EQ(t.num_models(), 4u);
  ASSERT_EQ(t.num_instructions(), 6u);
  for (std::size_t k = 0; k < 6; ++k) {
    for (std::size_t x = 0; x < 4; ++x) {
      for (std::size_t y = 0; y < 4; ++y) {
        if (x == y) continue;
        EXPECT_EQ(t.j(k, x, y), *ds.Preference(ds.instructions()[k],
                                               ds.models()[x], ds.models()[y]));
      }
    }
  }
}

TEST(TripletKernels, ParallelMatchesSerialExactly) {
  PreferenceDataset ds = NoisyCyclicDataset(7, 40, 9);
  const auto& models = ds.models();
  std::vector<TripletIndex> index;
  std::vector<Triplet> named;
  for (std::uint32_t a = 0; a < models.size(); ++a) {
    for (std::uint32_t b = 0; b < models.size(); ++b) {
      for (std::uint32_t c = 0; c < models.size(); ++c) {
        if (a == b || b == c || a == c) continue;
        index.push_back({a, b, c});
        named.push_back({models[a], models[b], models[c]});
      }
    }
  }
  for (int jobs : {1, 2, 4}) {
    SetParallelJobs(jobs);
    auto par = EvaluateTripletsParallel(PreferenceTensor::FromDataset(ds), index,
                                        {}, kDefaultEpsilon);
    auto ser = EvaluateTripletsSerial(ds, named, {}, kDefaultEpsilon);
    ASSERT_EQ(par.size(), ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
      EXPECT_EQ(par[i].non_transitive, ser[i].non_transitive);
      EXPECT_EQ(par[i].complete_instructions, ser[i].complete_instructions);
      EXPECT_EQ(par[i].pnt_percent, ser[i].pnt_percent);
      EXPECT_EQ(par[i].mean_sntd, ser[i].mean_sntd);
    }
  }
  SetParallelJobs(0);
}

TEST(TripletKernels, SerialMatchesDatasetMetrics) {
  PreferenceDataset ds = NoisyCyclicDataset(4, 15, 5);
  std::vector<Triplet> triplets = AllPermutations(ds.models());
  auto ser = EvaluateTripletsSerial(ds, triplets, {}, kDefaultEpsilon);
  for (std::size_t i = 0; i < triplets.size(); ++i) {
    DatasetMetrics m = ComputeDatasetMetrics(ds, triplets[i]);
    EXPECT_EQ(ser[i].pnt_percent, m.pnt_percent);
    EXPECT_EQ(ser[i].mean_sntd, m.mean_sntd);
  }
}

}  // namespace
}  // namespace judgerank
