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

#ifndef JUDGERANK_TEXT_IO_H_
#define JUDGERANK_TEXT_IO_H_

// Small helpers shared by the CSV and JSON-lines readers and writers.

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace judgerank {

// Shortest decimal text that parses back to exactly `value`.
std::string FormatDouble(double value);

// Parses a full decimal field; throws ParseError(line) otherwise.
double ParseDouble(std::string_view text, std::size_t line);
long long ParseInteger(std::string_view text, std::size_t line);

// RFC 4180-style field splitting (quoted fields may contain commas and
// doubled quotes). Throws ParseError(line) on an unterminated quote.
std::vector<std::string> SplitCsvLine(std::string_view line,
                                      std::size_t line_number);

// Quotes a field when it contains a comma, quote or newline.
std::string CsvField(std::string_view field);

std::string ReadFile(const std::filesystem::path& path);

// Writes through a sibling temporary file and renames it into place so a
// reader never observes a partially written file.
void WriteFileAtomic(const std::filesystem::path& path,
                     std::string_view content);

}  // namespace judgerank

#endif  // JUDGERANK_TEXT_IO_H_
