// Copyright 2026 The evofg Authors.
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

#ifndef EVOFG_LLM_CLIENT_H_
#define EVOFG_LLM_CLIENT_H_

#include <chrono>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "evofg/error.h"
#include "evofg/feature_generation.h"

namespace evofg {

enum class LlmErrorKind {
  kNetwork,
  kHttpStatus,
  kTimeout,
  kMalformedResponse,  // body is not a chat-completion object
  kMalformedDecision,  // content is not the required JSON object
  kArity,
  kUnknownColumn,
  kInvalidDecision,    // bad operator/category names or cross-category args
  kFixturesExhausted,
};

std::string_view to_string(LlmErrorKind kind);

class LlmError : public Error {
 public:
  LlmError(LlmErrorKind kind, const std::string& what);
  LlmErrorKind kind() const { return kind_; }
  bool retryable() const;

 private:
  LlmErrorKind kind_;
};

struct ChatMessage {
  std::string role;
  std::string content;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 0.7;
  int max_tokens = 256;

  std::string to_json() const;
};

// Sends a serialized request body and returns the raw response body.
// Failures are reported as LlmError.
class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual std::string post(const std::string& body) = 0;
};

struct HttpOptions {
  std::string base_url;  // scheme://host[:port][/prefix]
  std::string api_key;   // sent as a bearer token when non-empty
  std::chrono::seconds timeout{30};
};

// POST {base_url}/v1/chat/completions.
class HttpTransport : public ChatTransport {
 public:
  explicit HttpTransport(HttpOptions opt);
  std::string post(const std::string& body) override;

 private:
  HttpOptions opt_;
};

// Replays the files of a directory, in file-name order, one per request.
// A file ending in ".status" holds an HTTP status code to fail with;
// anything else is returned as the response body.
class FixtureTransport : public ChatTransport {
 public:
  explicit FixtureTransport(const std::filesystem::path& dir);
  std::string post(const std::string& body) override;

  const std::vector<std::string>& requests() const { return requests_; }
  std::size_t remaining() const { return files_.size() - next_; }

 private:
  std::vector<std::filesystem::path> files_;
  std::size_t next_ = 0;
  std::vector<std::string> requests_;
};

struct ChatOptions {
  std::string model = "Qwen2-7B-Instruct";
  double temperature = 0.7;
  int max_tokens = 256;
  int retries = 2;
  std::chrono::milliseconds backoff{500};  // doubled per retry
};

class ChatClient {
 public:
  ChatClient(std::unique_ptr<ChatTransport> transport, ChatOptions opt);

  // Returns choices[0].message.content. Transport failures are retried.
  std::string complete(const std::vector<ChatMessage>& messages);
  ChatTransport& transport() { return *transport_; }

 private:
  std::unique_ptr<ChatTransport> transport_;
  ChatOptions opt_;
};

// API key from EVOFG_LLM_API_KEY, empty when unset.
std::string api_key_from_env();

inline constexpr std::string_view kPromptVersion = "evofg-prompt-v1";

// System and user messages for one generation step. Only column names,
// categories, operator rules and the previous round's expressions are
// included.
std::vector<ChatMessage> build_prompt(const GenerationContext& ctx);

// Strict parse of {category, features, operator, rationale}; extra keys or
// wrong types are rejected. Surrounding whitespace and a single ```json
// fence are tolerated.
GenerationDecision parse_decision(const std::string& content);

// One request, parsed and validated; every failure is an LlmError.
FeatureExpr propose_expr(ChatClient& client, const GenerationContext& ctx);

class LlmFeatureGenerator : public FeatureGenerator {
 public:
  explicit LlmFeatureGenerator(ChatClient& client) : client_(client) {}
  std::string name() const override { return "llm"; }
  GenerationDecision propose(const GenerationContext& ctx) override;

 private:
  ChatClient& client_;
};

}  // namespace evofg

#endif  // EVOFG_LLM_CLIENT_H_
