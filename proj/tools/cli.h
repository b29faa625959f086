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

#ifndef JUDGERANK_TOOLS_CLI_H_
#define JUDGERANK_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace judgerank::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;
inline constexpr int kExitUsage = 64;

// Parses argv (argv[0] is the program name) and runs one subcommand.
int Run(const std::vector<std::string>& argv, std::ostream& out,
        std::ostream& err);

}  // namespace judgerank::cli

#endif  // JUDGERANK_TOOLS_CLI_H_
