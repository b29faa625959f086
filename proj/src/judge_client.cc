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

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <ctime>
#include <future>
#include <random>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "judgerank/digest.h"
#include "judgerank/random.h"
#include "judgerank/text_io.h"

namespace judgerank {
namespace {

using nlohmann::json;

std::string UtcTimestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Holds one concurrency slot and tracks the in-flight high-water mark.
class InFlight {
 public:
  InFlight(std::counting_semaphore<1 << 16>& slots, std::atomic<int>& count,
           std::atomic<int>& high_water)
      : slots_(slots), count_(count) {
    slots_.acquire();
    int now = count_.fetch_add(1) + 1;
    int seen = high_water.load();
    while (now > seen && !high_water.compare_exchange_weak(seen, now)) {
    }
  }
  ~InFlight() {
    count_.fetch_sub(1);
    slots_.release();
  }
  InFlight(const InFlight&) = delete;
  InFlight& operator=(const InFlight&) = delete;

 private:
  std::counting_semaphore<1 << 16>& slots_;
  std::atomic<int>& count_;
};

}  // namespace

IdentifierLogprobs FindIdentifierLogprobs(const TopLogprobs& top,
                                          const Identifiers& ids) {
  std::optional<double> first;
  std::optional<double> second;
  for (const auto& [token, lp] : top) {
    if (!first && token == ids.first) first = lp;
    if (!second && token == ids.second) second = lp;
  }
  if (!first || !second) {
    throw ExtractionError("identifier '" + (first ? ids.second : ids.first) +
                          "' not among the returned top log probabilities");
  }
  return {*first, *second};
}

double SoftmaxFirst(double lp_first, double lp_second) {
  return 1.0 / (1.0 + std::exp(lp_second - lp_first));
}

double ExtractPreference(const TopLogprobs& top, const Identifiers& ids) {
  IdentifierLogprobs lp = FindIdentifierLogprobs(top, ids);
  return SoftmaxFirst(lp.first, lp.second);
}

std::string ChatRequestJson(const Prompt& prompt, const std::string& judge_model,
                            double temperature, int top_logprobs) {
  nlohmann::ordered_json body;
  body["model"] = judge_model;
  body["messages"] = nlohmann::ordered_json::array(
      {{{"role", "system"}, {"content", prompt.system}},
       {{"role", "user"}, {"content", prompt.user}}});
  body["temperature"] = temperature;
  body["max_tokens"] = 1;
  body["logprobs"] = true;
  body["top_logprobs"] = top_logprobs;
  return body.dump();
}

TopLogprobs ParseTopLogprobs(std::string_view response_body) {
  TopLogprobs out;
  try {
    json payload = json::parse(response_body);
    const json& content =
        payload.at("choices").at(0).at("logprobs").at("content");
    if (content.empty()) throw ExtractionError("response has no tokens");
    for (const json& entry : content.at(0).at("top_logprobs")) {
      out.emplace_back(entry.at("token").get<std::string>(),
                       entry.at("logprob").get<double>());
    }
  } catch (const json::exception& e) {
    throw ExtractionError(std::string("malformed completion payload: ") +
                          e.what());
  }
  return out;
}

HttpChatTransport::HttpChatTransport(std::string base_url, std::string api_key,
                                     std::chrono::seconds timeout)
    : api_key_(std::move(api_key)), timeout_(timeout) {
  std::size_t scheme = base_url.find("://");
  if (scheme == std::string::npos) {
    throw Error(ErrorCode::kConfiguration,
                "base URL needs a scheme: " + base_url);
  }
  std::size_t slash = base_url.find('/', scheme + 3);
  host_ = base_url.substr(0, slash);
  path_ = slash == std::string::npos ? "" : base_url.substr(slash);
  while (!path_.empty() && path_.back() == '/') path_.pop_back();
  path_ += "/chat/completions";
}

std::string HttpChatTransport::Post(const std::string& body) {
  httplib::Client client(host_);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_write_timeout(timeout_);
  httplib::Headers headers;
  if (!api_key_.empty()) {
    headers.emplace("Authorization", "Bearer " + api_key_);
  }
  auto res = client.Post(path_, headers, body, "application/json");
  if (!res) {
    throw TransportError("request failed: " + httplib::to_string(res.error()),
                         true);
  }
  if (res->status != 200) {
    bool retryable = res->status == 429 || res->status >= 500;
    throw TransportError("HTTP " + std::to_string(res->status) + ": " +
                             res->body.substr(0, 200),
                         retryable);
  }
  return res->body;
}

std::string CacheKey(const std::string& judge_model,
                     const InstructionId& instruction_id,
                     const ModelId& model_first, const ModelId& model_second,
                     int call_index) {
  // Unit separators keep field boundaries unambiguous.
  std::string material;
  for (std::string_view part :
       {std::string_view(judge_model), std::string_view(instruction_id),
        std::string_view(model_first), std::string_view(model_second)}) {
    material.append(part);
    material.push_back('\x1f');
  }
  material += std::to_string(call_index);
  material.push_back('\x1f');
  material.append(kTemplateVersion);
  return Sha256Hex(material);
}

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path ResponseCache::PathFor(const std::string& key) const {
  return dir_ / key.substr(0, 2) / (key + ".json");
}

std::optional<JudgeResponse> ResponseCache::Get(const std::string& key) const {
  std::filesystem::path path = PathFor(key);
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return std::nullopt;
  try {
    json entry = json::parse(ReadFile(path));
    JudgeResponse r;
    r.logprob_first = entry.at("logprob_first").get<double>();
    r.logprob_second = entry.at("logprob_second").get<double>();
    r.p_first = entry.at("p_first").get<double>();
    r.raw_payload_digest = entry.at("raw_payload_digest").get<std::string>();
    r.latency_ms = entry.at("latency_ms").get<std::int64_t>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kIo,
                "corrupt cache entry " + path.string() + ": " + e.what());
  }
}

JudgeResponse ResponseCache::Put(const std::string& key,
                                 const std::string& request_body,
                                 const std::string& response_body,
                                 const JudgeResponse& response) {
  std::filesystem::path path = PathFor(key);
  std::filesystem::create_directories(path.parent_path());

  nlohmann::ordered_json entry;
  entry["key"] = key;
  entry["template_version"] = kTemplateVersion;
  entry["request_digest"] = Sha256Hex(request_body);
  entry["raw_payload_digest"] = response.raw_payload_digest;
  entry["logprob_first"] = response.logprob_first;
  entry["logprob_second"] = response.logprob_second;
  entry["p_first"] = response.p_first;
  entry["latency_ms"] = response.latency_ms;
  entry["created_at"] = UtcTimestamp();
  entry["response"] = json::parse(response_body, nullptr, false);

  static std::atomic<std::uint64_t> counter{0};
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." +
         std::to_string(counter.fetch_add(1));
  WriteFileAtomic(tmp, entry.dump(2) + "\n");
  // A hard link never replaces an existing entry, so the first writer wins.
  std::error_code ec;
  std::filesystem::create_hard_link(tmp, path, ec);
  std::filesystem::remove(tmp);
  if (ec) {
    if (auto existing = Get(key)) return *existing;
    throw Error(ErrorCode::kIo,
                "cannot store cache entry " + path.string() + ": " +
                    ec.message());
  }
  return response;
}

JudgeClient::JudgeClient(JudgeClientOptions options,
                         std::shared_ptr<ChatTransport> transport)
    : options_(std::move(options)),
      transport_(std::move(transport)),
      slots_(std::max(1, options_.max_in_flight)) {
  options_.identifiers.Validate();
  if (options_.max_in_flight < 1) {
    throw Error(ErrorCode::kConfiguration, "max_in_flight must be >= 1");
  }
  if (options_.top_logprobs < 2) {
    throw Error(ErrorCode::kConfiguration, "top_logprobs must be >= 2");
  }
  if (options_.cache_dir) cache_.emplace(*options_.cache_dir);
}

JudgeResponse JudgeClient::CallNetwork(const JudgeRequest& request,
                                       std::string* body) {
  std::string request_body =
      ChatRequestJson(BuildPrompt(request), options_.judge_model,
                      options_.temperature, options_.top_logprobs);
  auto start = std::chrono::steady_clock::now();
  {
    InFlight slot(slots_, in_flight_, max_observed_);
    network_calls_.fetch_add(1);
    *body = transport_->Post(request_body);
  }
  JudgeResponse r;
  r.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - start)
                     .count();
  IdentifierLogprobs lp =
      FindIdentifierLogprobs(ParseTopLogprobs(*body), request.identifiers);
  r.logprob_first = lp.first;
  r.logprob_second = lp.second;
  r.p_first = SoftmaxFirst(lp.first, lp.second);
  r.raw_payload_digest = Sha256Hex(*body);
  return r;
}

JudgeResponse JudgeClient::Call(const JudgeRequest& request,
                                const std::string& cache_key) {
  request.Validate();
  const bool cached = cache_ && !cache_key.empty();
  if (cached) {
    if (auto hit = cache_->Get(cache_key)) {
      cache_hits_.fetch_add(1);
      return *hit;
    }
  }
  for (int attempt = 0;; ++attempt) {
    try {
      std::string body;
      JudgeResponse r = CallNetwork(request, &body);
      if (cached) {
        std::string request_body =
            ChatRequestJson(BuildPrompt(request), options_.judge_model,
                            options_.temperature, options_.top_logprobs);
        r = cache_->Put(cache_key, request_body, body, r);
      }
      return r;
    } catch (const TransportError& e) {
      if (!e.retryable() || attempt >= options_.max_retries) throw;
    } catch (const ExtractionError&) {
      if (attempt >= options_.max_retries) throw;
    }
    std::this_thread::sleep_for(options_.initial_backoff * (1LL << attempt));
  }
}

JudgePairResult JudgeClient::JudgePair(
    const InstructionId& instruction_id, const std::string& instruction_text,
    const ModelId& model_i, const std::string& output_i,
    const ModelId& model_j, const std::string& output_j, int calls_per_order,
    std::optional<std::uint64_t> ablation_seed) {
  if (calls_per_order < 1) {
    throw Error(ErrorCode::kValidation, "calls_per_order must be >= 1");
  }
  if (model_i == model_j) {
    throw Error(ErrorCode::kValidation, "model paired with itself");
  }
  struct Slot {
    const ModelId* first;
    const std::string* first_output;
    const ModelId* second;
    const std::string* second_output;
    int call_index;
  };
  std::vector<Slot> slots;
  if (ablation_seed) {
    // Keyed by the unordered pair so either argument order draws the same.
    bool i_is_low = model_i < model_j;
    const ModelId& low = i_is_low ? model_i : model_j;
    const ModelId& high = i_is_low ? model_j : model_i;
    std::mt19937_64 rng(SubstreamSeed(
        *ablation_seed, "ablation",
        {HashString(instruction_id), HashString(low), HashString(high)}));
    bool low_first = UniformIndex(rng, 2) == 0;
    if (low_first == i_is_low) {
      slots.push_back({&model_i, &output_i, &model_j, &output_j, 0});
    } else {
      slots.push_back({&model_j, &output_j, &model_i, &output_i, 0});
    }
  } else {
    for (int c = 0; c < calls_per_order; ++c) {
      slots.push_back({&model_i, &output_i, &model_j, &output_j, c});
    }
    for (int c = 0; c < calls_per_order; ++c) {
      slots.push_back({&model_j, &output_j, &model_i, &output_i, c});
    }
  }

  std::vector<std::future<JudgeResponse>> futures;
  for (const Slot& s : slots) {
    futures.push_back(std::async(std::launch::async, [this, s, &instruction_id,
                                                      &instruction_text] {
      JudgeRequest request;
      request.instruction_text = instruction_text;
      request.output_first = *s.first_output;
      request.output_second = *s.second_output;
      request.judge_model = options_.judge_model;
      request.temperature = options_.temperature;
      request.identifiers = options_.identifiers;
      return Call(request, CacheKey(options_.judge_model, instruction_id,
                                    *s.first, *s.second, s.call_index));
    }));
  }

  JudgePairResult result;
  std::optional<TransportError> transport_failure;
  std::exception_ptr other_failure;
  for (std::size_t k = 0; k < futures.size(); ++k) {
    try {
      JudgeResponse r = futures[k].get();
      result.samples.push_back({instruction_id, *slots[k].first,
                                *slots[k].second, options_.judge_model,
                                slots[k].call_index, r.p_first});
    } catch (const ExtractionError&) {
      ++result.missing;
    } catch (const TransportError& e) {
      if (!transport_failure) transport_failure = e;
    } catch (...) {
      if (!other_failure) other_failure = std::current_exception();
    }
  }
  if (other_failure) std::rethrow_exception(other_failure);
  if (transport_failure) {
    transport_failure->set_partial_samples(std::move(result.samples));
    throw *transport_failure;
  }
  return result;
}

void JudgeClient::ProbeIdentifiers() {
  JudgeRequest probe;
  probe.instruction_text = "Say hello.";
  probe.output_first = "Hello!";
  probe.output_second = "Hi there.";
  probe.judge_model = options_.judge_model;
  probe.temperature = options_.temperature;
  probe.identifiers = options_.identifiers;
  try {
    std::string body;
    CallNetwork(probe, &body);
  } catch (const ExtractionError& e) {
    throw Error(ErrorCode::kConfiguration,
                "identifier probe failed; '" + options_.identifiers.first +
                    "' and '" + options_.identifiers.second +
                    "' must each be a single token for " +
                    options_.judge_model + ": " + e.what());
  }
}

namespace {

std::map<std::string, std::string> LoadStringMap(
    const std::filesystem::path& path) {
  try {
    return json::parse(ReadFile(path)).get<std::map<std::string, std::string>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, path.string() +
                                       ": expected a JSON object of strings: " +
                                       e.what());
  }
}

}  // namespace

OutputCorpus OutputCorpus::Load(const std::filesystem::path& instructions_file,
                                const std::filesystem::path& outputs_dir) {
  OutputCorpus corpus;
  corpus.instructions = LoadStringMap(instructions_file);
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(outputs_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    corpus.outputs[file.stem().string()] = LoadStringMap(file);
  }
  return corpus;
}

const std::string& OutputCorpus::Output(const ModelId& model,
                                        const InstructionId& instruction) const {
  auto m = outputs.find(model);
  if (m == outputs.end()) {
    throw Error(ErrorCode::kLookup, "no outputs for model " + model);
  }
  auto o = m->second.find(instruction);
  if (o == m->second.end()) {
    throw Error(ErrorCode::kLookup,
                "model " + model + " has no output for " + instruction);
  }
  return o->second;
}

const std::string& OutputCorpus::Instruction(
    const InstructionId& instruction) const {
  auto it = instructions.find(instruction);
  if (it == instructions.end()) {
    throw Error(ErrorCode::kLookup, "unknown instruction " + instruction);
  }
  return it->second;
}

JudgeEvaluator::JudgeEvaluator(JudgeClient& client, const OutputCorpus& corpus,
                               int calls_per_order,
                               std::optional<std::uint64_t> ablation_seed)
    : client_(client),
      corpus_(corpus),
      calls_per_order_(calls_per_order),
      ablation_seed_(ablation_seed) {}

PairPreference JudgeEvaluator::Evaluate(const ModelId& x, const ModelId& y,
                                        const InstructionId& instruction) {
  CountEvaluation();
  JudgePairResult result = client_.JudgePair(
      instruction, corpus_.Instruction(instruction), x,
      corpus_.Output(x, instruction), y, corpus_.Output(y, instruction),
      calls_per_order_, ablation_seed_);
  missing_.fetch_add(result.missing);
  if (result.samples.empty()) {
    throw ExtractionError("every judge call for (" + x + ", " + y + ") on " +
                          instruction + " lacked identifier log probabilities");
  }
  return AggregateSamples(result.samples).pairs().begin()->second;
}

bool JudgeEvaluator::deterministic() const {
  return client_.options().cache_dir.has_value();
}

}  // namespace judgerank
