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

#include "judgerank/judgeclient.h"

#include <map>

#include "judgerank/errors.h"

namespace judgerank {
namespace {

// Identifier slots are templated too so non-default identifier tokens can
// be configured; with the defaults the result is the published text.
constexpr std::string_view kSystemTemplate =
    R"tmpl(You are a highly efficient assistant, who evaluates and selects the best large language model (LLMs) based on the quality of their responses to a given instruction. This process will be used to create a leaderboard reflecting the most accurate and human-preferred answers.)tmpl";

constexpr std::string_view kUserTemplate = R"tmpl(I require a leaderboard for various large language models. I'll provide you with prompts given to these models and their corresponding outputs. Your task is to assess these responses, and select the model that produces the best output from a human perspective.

## Instruction

{
    "instruction": """{instruction}""",
}

## Model Outputs

Here are the unordered outputs from the models. Each output is associated with a specific model, identified by a unique model identifier.

{
    {
        "model_identifier": "{id_first}",
        "output": """{output_1}"""
    },
    {
        "model_identifier": "{id_second}",
        "output": """{output_2}"""
    }
}

## Task

Evaluate the models based on the quality and relevance of their outputs, and select the model that generated the best output. Answer by providing the model identifier of the best model. We will use your output as the name of the best model, so make sure your output only contains one of the following model identifiers and nothing else (no quotes, no spaces, no new lines, ...): {id_first} or {id_second}.

## Best Model Identifier)tmpl";

}  // namespace

std::string_view DirectComparisonSystemTemplate() { return kSystemTemplate; }
std::string_view DirectComparisonUserTemplate() { return kUserTemplate; }

std::string SubstituteTemplate(
    std::string_view tmpl, const std::map<std::string, std::string>& values) {
  for (const auto& [name, value] : values) {
    if (tmpl.find("{" + name + "}") == std::string_view::npos) {
      throw Error(ErrorCode::kTemplate,
                  "template has no placeholder {" + name + "}");
    }
  }
  // Single left-to-right pass: substituted text is never rescanned, so
  // outputs that happen to contain "{output_2}" stay literal.
  std::string out;
  out.reserve(tmpl.size());
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    std::size_t open = tmpl.find('{', pos);
    if (open == std::string_view::npos) break;
    std::size_t close = tmpl.find('}', open + 1);
    if (close == std::string_view::npos) break;
    auto it = values.find(std::string(tmpl.substr(open + 1, close - open - 1)));
    if (it == values.end()) {
      out.append(tmpl.substr(pos, open + 1 - pos));
      pos = open + 1;
      continue;
    }
    out.append(tmpl.substr(pos, open - pos));
    out.append(it->second);
    pos = close + 1;
  }
  out.append(tmpl.substr(pos));
  return out;
}

void JudgeRequest::Validate() const {
  if (instruction_text.empty()) {
    throw Error(ErrorCode::kValidation, "empty instruction text");
  }
  if (output_first.empty() || output_second.empty()) {
    throw Error(ErrorCode::kValidation, "empty model output");
  }
  identifiers.Validate();
}

void Identifiers::Validate() const {
  if (first.empty() || second.empty() || first == second) {
    throw Error(ErrorCode::kConfiguration,
                "identifiers must be two distinct non-empty tokens");
  }
}

Prompt BuildPrompt(const JudgeRequest& request) {
  request.Validate();
  Prompt prompt;
  prompt.system = std::string(kSystemTemplate);
  prompt.user = SubstituteTemplate(
      kUserTemplate, {{"instruction", request.instruction_text},
                      {"output_1", request.output_first},
                      {"output_2", request.output_second},
                      {"id_first", request.identifiers.first},
                      {"id_second", request.identifiers.second}});
  return prompt;
}

}  // namespace judgerank
