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

#include "judgerank/dataset_io.h"

#include <istream>
#include <optional>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "judgerank/errors.h"
#include "judgerank/text_io.h"

namespace judgerank {
namespace {

bool IsBlank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

template <typename T>
T RequireField(const nlohmann::json& record, const char* key,
               std::size_t line) {
  auto it = record.find(key);
  if (it == record.end()) {
    throw ParseError(line, std::string("missing key '") + key + "'");
  }
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(line, std::string("wrong type for key '") + key + "'");
  }
}

PreferenceSample ParseSampleLine(const std::string& text, std::size_t line) {
  nlohmann::json record;
  try {
    record = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(line, std::string("malformed JSON: ") + e.what());
  }
  if (!record.is_object()) throw ParseError(line, "expected a JSON object");
  PreferenceSample sample;
  sample.instruction_id = RequireField<std::string>(record, "instruction_id", line);
  sample.model_first = RequireField<std::string>(record, "model_first", line);
  sample.model_second = RequireField<std::string>(record, "model_second", line);
  sample.judge_id = RequireField<std::string>(record, "judge_id", line);
  if (!record.contains("call_index") || !record["call_index"].is_number_integer()) {
    throw ParseError(line, "call_index must be an integer");
  }
  sample.call_index = record["call_index"].get<int>();
  if (!record.contains("p_first") || !record["p_first"].is_number()) {
    throw ParseError(line, "p_first must be a number");
  }
  sample.p_first = record["p_first"].get<double>();
  try {
    sample.Validate();
  } catch (const Error& e) {
    throw ParseError(line, e.what());
  }
  return sample;
}

std::optional<double> ParseOptionalProbability(const std::string& field,
                                               std::size_t line) {
  if (field.empty()) return std::nullopt;
  return ParseDouble(field, line);
}

PreferenceDataset ParseDatasetCsvBody(std::istream& in, std::size_t line_no) {
  std::vector<PairPreference> pairs;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    std::vector<std::string> f = SplitCsvLine(line, line_no);
    if (f.size() != 6) {
      throw ParseError(line_no, "expected 6 fields, got " +
                                    std::to_string(f.size()));
    }
    PairPreference pair;
    pair.instruction_id = f[0];
    pair.model_a = f[1];
    pair.model_b = f[2];
    pair.phi_ab = ParseOptionalProbability(f[3], line_no);
    pair.phi_ba = ParseOptionalProbability(f[4], line_no);
    pair.j_ab = ParseDouble(f[5], line_no);
    try {
      pair.Validate();
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
    pairs.push_back(std::move(pair));
  }
  return PreferenceDataset::FromPairs(std::move(pairs));
}

}  // namespace

std::vector<PreferenceSample> ReadSamplesJsonl(std::istream& in) {
  std::vector<PreferenceSample> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    samples.push_back(ParseSampleLine(line, line_no));
  }
  return samples;
}

std::vector<PreferenceSample> LoadSamples(const std::filesystem::path& path) {
  std::istringstream in(ReadFile(path));
  return ReadSamplesJsonl(in);
}

std::string SamplesToJsonl(std::span<const PreferenceSample> samples) {
  std::string out;
  for (const PreferenceSample& s : samples) {
    nlohmann::ordered_json record;
    record["instruction_id"] = s.instruction_id;
    record["model_first"] = s.model_first;
    record["model_second"] = s.model_second;
    record["judge_id"] = s.judge_id;
    record["call_index"] = s.call_index;
    record["p_first"] = s.p_first;
    out += record.dump();
    out += '\n';
  }
  return out;
}

void SaveSamples(const std::filesystem::path& path,
                 std::span<const PreferenceSample> samples) {
  WriteFileAtomic(path, SamplesToJsonl(samples));
}

std::string DatasetToCsv(const PreferenceDataset& dataset) {
  std::string out = kDatasetCsvHeader;
  out += '\n';
  for (const auto& [key, pair] : dataset.pairs()) {
    out += CsvField(pair.instruction_id);
    out += ',';
    out += CsvField(pair.model_a);
    out += ',';
    out += CsvField(pair.model_b);
    out += ',';
    if (pair.phi_ab) out += FormatDouble(*pair.phi_ab);
    out += ',';
    if (pair.phi_ba) out += FormatDouble(*pair.phi_ba);
    out += ',';
    out += FormatDouble(pair.j_ab);
    out += '\n';
  }
  return out;
}

PreferenceDataset DatasetFromCsv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    if (line.back() == '\r') line.pop_back();
    if (line != kDatasetCsvHeader) {
      throw ParseError(line_no, "expected header '" +
                                    std::string(kDatasetCsvHeader) + "'");
    }
    return ParseDatasetCsvBody(in, line_no);
  }
  return PreferenceDataset();
}

PreferenceDataset LoadDataset(const std::filesystem::path& path) {
  std::string content = ReadFile(path);
  std::istringstream probe(content);
  std::string line;
  while (std::getline(probe, line)) {
    if (IsBlank(line)) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream in(content);
    if (line == kDatasetCsvHeader) return DatasetFromCsv(in);
    std::vector<PreferenceSample> samples = ReadSamplesJsonl(in);
    return AggregateSamples(samples);
  }
  return PreferenceDataset();
}

void SaveDataset(const PreferenceDataset& dataset,
                 const std::filesystem::path& path) {
  WriteFileAtomic(path, DatasetToCsv(dataset));
}

}  // namespace judgerank
