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

#ifndef JUDGERANK_DATASET_IO_H_
#define JUDGERANK_DATASET_IO_H_

// File formats:
//
//   Preference file (JSON lines), one sample per line:
//     {"instruction_id":..,"model_first":..,"model_second":..,
//      "judge_id":..,"call_index":..,"p_first":..}
//
//   Dataset export (CSV):
//     instruction_id,model_a,model_b,phi_ab,phi_ba,j_ab
//   An empty phi field marks a single-order record.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "judgerank/core.h"

namespace judgerank {

inline constexpr char kDatasetCsvHeader[] =
    "instruction_id,model_a,model_b,phi_ab,phi_ba,j_ab";

// Blank lines are skipped. Throws ParseError naming the line for malformed
// JSON, missing keys, or invalid values (including p_first outside [0, 1]).
std::vector<PreferenceSample> ReadSamplesJsonl(std::istream& in);
std::vector<PreferenceSample> LoadSamples(const std::filesystem::path& path);

std::string SamplesToJsonl(std::span<const PreferenceSample> samples);
void SaveSamples(const std::filesystem::path& path,
                 std::span<const PreferenceSample> samples);

std::string DatasetToCsv(const PreferenceDataset& dataset);

// Parses the dataset CSV. Throws ParseError for malformed rows and
// Error(kValidation) for records that break the dataset invariants.
PreferenceDataset DatasetFromCsv(std::istream& in);

// Loads either format: a file whose first non-blank line is the dataset CSV
// header is read as a dataset export, anything else as a preference file
// which is then aggregated. An empty file gives an empty dataset.
PreferenceDataset LoadDataset(const std::filesystem::path& path);

// Writes the dataset CSV. LoadDataset(SaveDataset(ds)) == ds.
void SaveDataset(const PreferenceDataset& dataset,
                 const std::filesystem::path& path);

}  // namespace judgerank

#endif  // JUDGERANK_DATASET_IO_H_
