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

#ifndef JUDGERANK_JUDGECLIENT_H_
#define JUDGERANK_JUDGECLIENT_H_

// Live judge over an OpenAI-compatible chat-completions endpoint.
//
// The judge is asked for a single identifier token with log probabilities;
// p_first is the two-way softmax of the identifier bound to the first-listed
// output against the one bound to the second. Responses are cached on disk,
// keyed by a SHA-256 digest, so interrupted sweeps resume without repeating
// network calls.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "judgerank/core.h"
#include "judgerank/errors.h"
#include "judgerank/evaluator.h"

namespace judgerank {

inline constexpr std::string_view kTemplateVersion = "direct-comparison/1";

struct Identifiers {
  std::string first = "m";
  std::string second = "M";

  void Validate() const;
};

struct JudgeRequest {
  std::string instruction_text;
  std::string output_first;
  std::string output_second;
  std::string judge_model;
  double temperature = 0.0;
  Identifiers identifiers;

  // Throws Error(kValidation) for empty instruction or outputs.
  void Validate() const;
};

struct Prompt {
  std::string system;
  std::string user;

  bool operator==(const Prompt&) const = default;
};

std::string_view DirectComparisonSystemTemplate();
std::string_view DirectComparisonUserTemplate();

// Replaces each {name} in one pass. Throws Error(kTemplate) when a supplied
// name has no placeholder in `tmpl`.
std::string SubstituteTemplate(std::string_view tmpl,
                               const std::map<std::string, std::string>& values);

Prompt BuildPrompt(const JudgeRequest& request);

// (token, logprob) entries from a top-logprobs listing.
using TopLogprobs = std::vector<std::pair<std::string, double>>;

// Raised when an identifier token is absent from the listing.
class ExtractionError : public Error {
 public:
  explicit ExtractionError(const std::string& message)
      : Error(ErrorCode::kExtraction, message) {}
};

struct IdentifierLogprobs {
  double first = 0.0;
  double second = 0.0;
};

// First matching entry per identifier; throws ExtractionError if either is
// missing.
IdentifierLogprobs FindIdentifierLogprobs(const TopLogprobs& top,
                                          const Identifiers& ids);

// exp(lp_first) / (exp(lp_first) + exp(lp_second)), computed stably.
double SoftmaxFirst(double lp_first, double lp_second);

double ExtractPreference(const TopLogprobs& top, const Identifiers& ids = {});

struct JudgeResponse {
  double logprob_first = 0.0;
  double logprob_second = 0.0;
  double p_first = 0.5;
  std::string raw_payload_digest;
  std::int64_t latency_ms = 0;
};

// Chat-completions request body: temperature, max_tokens = 1 and
// top_logprobs entries requested.
std::string ChatRequestJson(const Prompt& prompt, const std::string& judge_model,
                            double temperature, int top_logprobs);

// Top-logprobs listing of the first generated token. Throws
// ExtractionError if the payload has none.
TopLogprobs ParseTopLogprobs(std::string_view response_body);

// Failure to obtain a response. Partial samples are attached by JudgePair.
class TransportError : public Error {
 public:
  TransportError(const std::string& message, bool retryable)
      : Error(ErrorCode::kTransport, message), retryable_(retryable) {}

  bool retryable() const { return retryable_; }
  const std::vector<PreferenceSample>& partial_samples() const {
    return partial_;
  }
  void set_partial_samples(std::vector<PreferenceSample> samples) {
    partial_ = std::move(samples);
  }

 private:
  bool retryable_;
  std::vector<PreferenceSample> partial_;
};

class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  // Posts a request body, returns the response body. Throws TransportError.
  virtual std::string Post(const std::string& body) = 0;
};

// POSTs to <base_url>/chat/completions with a bearer token.
class HttpChatTransport : public ChatTransport {
 public:
  HttpChatTransport(std::string base_url, std::string api_key,
                    std::chrono::seconds timeout = std::chrono::seconds(60));

  std::string Post(const std::string& body) override;

 private:
  std::string host_;  // scheme://host[:port]
  std::string path_;
  std::string api_key_;
  std::chrono::seconds timeout_;
};

// Digest of (judge_model, instruction_id, model_first, model_second,
// call_index, template version).
std::string CacheKey(const std::string& judge_model,
                     const InstructionId& instruction_id,
                     const ModelId& model_first, const ModelId& model_second,
                     int call_index);

// Append-only store: <dir>/<first two hex chars>/<digest>.json. The first
// response written for a key is the one every later read returns.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir);

  std::optional<JudgeResponse> Get(const std::string& key) const;

  // Stores unless the key exists; returns whatever is stored afterwards.
  JudgeResponse Put(const std::string& key, const std::string& request_body,
                    const std::string& response_body,
                    const JudgeResponse& response);

  std::filesystem::path PathFor(const std::string& key) const;

 private:
  std::filesystem::path dir_;
};

struct JudgeClientOptions {
  std::string judge_model;
  Identifiers identifiers;
  double temperature = 0.0;
  int top_logprobs = 20;
  // Attempts after the first one, for transport and extraction failures.
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{500};
  int max_in_flight = 4;
  std::optional<std::filesystem::path> cache_dir;
};

struct JudgePairResult {
  std::vector<PreferenceSample> samples;
  // Calls whose identifiers never appeared in the listing; left out rather
  // than imputed.
  std::size_t missing = 0;
};

class JudgeClient {
 public:
  JudgeClient(JudgeClientOptions options,
              std::shared_ptr<ChatTransport> transport);

  // One judge call with retries. `cache_key` may be empty to bypass the
  // cache.
  JudgeResponse Call(const JudgeRequest& request, const std::string& cache_key);

  // Both orders with calls_per_order calls each, or with `ablation_seed` a
  // single call in an order drawn from that seed. Calls run concurrently up
  // to max_in_flight. Throws TransportError with the samples gathered.
  JudgePairResult JudgePair(const InstructionId& instruction_id,
                            const std::string& instruction_text,
                            const ModelId& model_i, const std::string& output_i,
                            const ModelId& model_j, const std::string& output_j,
                            int calls_per_order = 2,
                            std::optional<std::uint64_t> ablation_seed =
                                std::nullopt);

  // Sends a throwaway prompt and checks both identifiers come back as
  // distinct entries of the listing. Throws Error(kConfiguration) if not.
  void ProbeIdentifiers();

  const JudgeClientOptions& options() const { return options_; }
  std::int64_t network_calls() const { return network_calls_.load(); }
  std::int64_t cache_hits() const { return cache_hits_.load(); }
  int max_in_flight_observed() const { return max_observed_.load(); }

 private:
  JudgeResponse CallNetwork(const JudgeRequest& request, std::string* body);

  JudgeClientOptions options_;
  std::shared_ptr<ChatTransport> transport_;
  std::optional<ResponseCache> cache_;
  std::counting_semaphore<1 << 16> slots_;
  std::atomic<std::int64_t> network_calls_{0};
  std::atomic<std::int64_t> cache_hits_{0};
  std::atomic<int> in_flight_{0};
  std::atomic<int> max_observed_{0};
};

// Model outputs: one JSON object per model mapping instruction_id to text,
// plus the instruction texts in the same shape.
struct OutputCorpus {
  std::map<InstructionId, std::string> instructions;
  std::map<ModelId, std::map<InstructionId, std::string>> outputs;

  // Loads <dir>/<model>.json for every JSON file in `outputs_dir`.
  static OutputCorpus Load(const std::filesystem::path& instructions_file,
                           const std::filesystem::path& outputs_dir);

  const std::string& Output(const ModelId& model,
                            const InstructionId& instruction) const;
  const std::string& Instruction(const InstructionId& instruction) const;
};

// Tournament evaluator backed by the live judge.
class JudgeEvaluator : public PairEvaluator {
 public:
  JudgeEvaluator(JudgeClient& client, const OutputCorpus& corpus,
                 int calls_per_order = 2,
                 std::optional<std::uint64_t> ablation_seed = std::nullopt);

  PairPreference Evaluate(const ModelId& x, const ModelId& y,
                          const InstructionId& instruction) override;

  bool deterministic() const override;

  std::size_t missing_samples() const { return missing_.load(); }

 private:
  JudgeClient& client_;
  const OutputCorpus& corpus_;
  int calls_per_order_;
  std::optional<std::uint64_t> ablation_seed_;
  std::atomic<std::size_t> missing_{0};
};

}  // namespace judgerank

#endif  // JUDGERANK_JUDGECLIENT_H_
