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

#include "evofg/llm_client.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "evofg/io.h"

namespace evofg {

using nlohmann::json;

std::string_view to_string(LlmErrorKind kind) {
  switch (kind) {
    case LlmErrorKind::kNetwork: return "network";
    case LlmErrorKind::kHttpStatus: return "http-status";
    case LlmErrorKind::kTimeout: return "timeout";
    case LlmErrorKind::kMalformedResponse: return "malformed-response";
    case LlmErrorKind::kMalformedDecision: return "malformed-decision";
    case LlmErrorKind::kArity: return "arity";
    case LlmErrorKind::kUnknownColumn: return "unknown-column";
    case LlmErrorKind::kInvalidDecision: return "invalid-decision";
    case LlmErrorKind::kFixturesExhausted: return "fixtures-exhausted";
  }
  return "unknown";
}

LlmError::LlmError(LlmErrorKind kind, const std::string& what)
    : Error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

bool LlmError::retryable() const {
  return kind_ == LlmErrorKind::kNetwork || kind_ == LlmErrorKind::kTimeout ||
         kind_ == LlmErrorKind::kHttpStatus;
}

std::string ChatRequest::to_json() const {
  json msgs = json::array();
  for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
  json body = {{"model", model},
               {"messages", msgs},
               {"temperature", temperature},
               {"max_tokens", max_tokens}};
  return body.dump();
}

HttpTransport::HttpTransport(HttpOptions opt) : opt_(std::move(opt)) {
  if (opt_.base_url.empty()) throw ParameterError("LLM base_url is empty");
}

std::string HttpTransport::post(const std::string& body) {
  // Split scheme://host[:port] from an optional path prefix.
  const auto scheme_end = opt_.base_url.find("://");
  const auto path_start =
      opt_.base_url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  const std::string origin = opt_.base_url.substr(0, path_start);
  std::string prefix = path_start == std::string::npos ? "" : opt_.base_url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();

  httplib::Client cli(origin);
  cli.set_connection_timeout(opt_.timeout);
  cli.set_read_timeout(opt_.timeout);
  cli.set_write_timeout(opt_.timeout);
  httplib::Headers headers;
  if (!opt_.api_key.empty()) headers.emplace("Authorization", "Bearer " + opt_.api_key);

  const auto started = std::chrono::steady_clock::now();
  auto res = cli.Post(prefix + "/v1/chat/completions", headers, body, "application/json");
  if (!res) {
    const auto err = res.error();
    const auto elapsed = std::chrono::steady_clock::now() - started;
    if (err == httplib::Error::ConnectionTimeout ||
        (err == httplib::Error::Read && elapsed >= opt_.timeout)) {
      throw LlmError(LlmErrorKind::kTimeout, httplib::to_string(err));
    }
    throw LlmError(LlmErrorKind::kNetwork, httplib::to_string(err));
  }
  if (res->status < 200 || res->status >= 300) {
    throw LlmError(LlmErrorKind::kHttpStatus, "HTTP " + std::to_string(res->status));
  }
  return res->body;
}

FixtureTransport::FixtureTransport(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error("fixture directory not found: " + dir.string());
  }
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file()) files_.push_back(entry.path());
  }
  std::sort(files_.begin(), files_.end());
}

std::string FixtureTransport::post(const std::string& body) {
  requests_.push_back(body);
  if (next_ >= files_.size()) {
    throw LlmError(LlmErrorKind::kFixturesExhausted, "no recorded responses left");
  }
  const auto& path = files_[next_++];
  auto in = io::open_input(path);
  std::stringstream ss;
  ss << in.rdbuf();
  if (path.extension() == ".status") {
    int status = 0;
    ss >> status;
    throw LlmError(LlmErrorKind::kHttpStatus, "HTTP " + std::to_string(status) + " (fixture)");
  }
  return ss.str();
}

ChatClient::ChatClient(std::unique_ptr<ChatTransport> transport, ChatOptions opt)
    : transport_(std::move(transport)), opt_(std::move(opt)) {}

std::string ChatClient::complete(const std::vector<ChatMessage>& messages) {
  ChatRequest req{opt_.model, messages, opt_.temperature, opt_.max_tokens};
  const std::string body = req.to_json();
  std::string response;
  auto backoff = opt_.backoff;
  for (int attempt = 0;; ++attempt) {
    try {
      response = transport_->post(body);
      break;
    } catch (const LlmError& e) {
      if (!e.retryable() || attempt >= opt_.retries) throw;
      spdlog::warn("chat request failed ({}); retry {} of {}", e.what(), attempt + 1,
                   opt_.retries);
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
  try {
    const json j = json::parse(response);
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw LlmError(LlmErrorKind::kMalformedResponse, e.what());
  }
}

std::string api_key_from_env() {
  const char* key = std::getenv("EVOFG_LLM_API_KEY");
  return key ? key : "";
}

namespace {

constexpr std::string_view kSystemPrompt =
    R"(You design router features for graph anomaly detection. A router feature is a
per-node statistic computed from existing columns. You never see node data, only
column names grouped by category.

Build one new feature in four steps:
1. Choose one category.
2. Choose k distinct columns from that category only.
3. Choose an operator whose arity matches k:
   unary (k = 1): LOG1P, LOG, SQRT, SQUARE, CUBE, RECIPROCAL, SIGMOID
   binary (k = 2): BINARY_SUB, BINARY_DIV, BINARY_DIFF_OVER_SUM
   multi (k >= 3): MULTI_MEAN, MULTI_VAR
4. Compose the feature.

Answer with a single JSON object and nothing else:
{"category": "<category>", "features": ["<column>", ...], "operator": "<OPERATOR>", "rationale": "<one sentence>"})";

}  // namespace

std::vector<ChatMessage> build_prompt(const GenerationContext& ctx) {
  std::ostringstream user;
  user << "Prompt version: " << kPromptVersion << "\n";
  user << "Round: " << ctx.round << "\n\nAvailable columns by category:\n";
  const auto groups = ctx.table->active_by_category();
  for (int c = 0; c < kNumCategories; ++c) {
    user << "- " << to_string(static_cast<Category>(c)) << ":";
    if (groups[c].empty()) user << " (none)";
    for (std::size_t i = 0; i < groups[c].size(); ++i) {
      user << (i ? ", " : " ") << groups[c][i];
    }
    user << "\n";
  }
  auto list = [&](const char* title, const std::vector<std::string>& items) {
    if (items.empty()) return;
    user << "\n" << title << ":\n";
    for (const auto& s : items) user << "- " << s << "\n";
  };
  list("Kept after the last round", ctx.accepted);
  list("Dropped after the last round", ctx.rejected);
  user << "\nPropose one new feature that is not already listed.";
  return {{"system", std::string(kSystemPrompt)}, {"user", user.str()}};
}

GenerationDecision parse_decision(const std::string& content) {
  std::string text = content;
  auto trim = [](std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    const auto e = s.find_last_not_of(" \t\r\n");
    s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  trim(text);
  if (text.rfind("```", 0) == 0) {
    const auto nl = text.find('\n');
    const auto close = text.rfind("```");
    if (nl == std::string::npos || close <= nl) {
      throw LlmError(LlmErrorKind::kMalformedDecision, "unterminated code fence");
    }
    text = text.substr(nl + 1, close - nl - 1);
    trim(text);
  }

  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw LlmError(LlmErrorKind::kMalformedDecision, e.what());
  }
  if (!j.is_object()) throw LlmError(LlmErrorKind::kMalformedDecision, "not a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "category" && key != "features" && key != "operator" && key != "rationale") {
      throw LlmError(LlmErrorKind::kMalformedDecision, "unexpected key '" + key + "'");
    }
  }
  auto need_string = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_string()) {
      throw LlmError(LlmErrorKind::kMalformedDecision, std::string("missing string '") + key + "'");
    }
    return j[key].get<std::string>();
  };
  GenerationDecision d;
  d.category = need_string("category");
  d.op = need_string("operator");
  d.rationale = j.contains("rationale") && j["rationale"].is_string()
                    ? j["rationale"].get<std::string>()
                    : std::string();
  if (!j.contains("features") || !j["features"].is_array()) {
    throw LlmError(LlmErrorKind::kMalformedDecision, "missing array 'features'");
  }
  for (const auto& f : j["features"]) {
    if (!f.is_string()) throw LlmError(LlmErrorKind::kMalformedDecision, "non-string feature");
    d.feature_names.push_back(f.get<std::string>());
  }
  return d;
}

namespace {

FeatureExpr validate_decision(const GenerationDecision& d, const RouterFeatureTable& table) {
  try {
    return decision_to_expr(d, table);
  } catch (const ReferenceError& e) {
    throw LlmError(LlmErrorKind::kUnknownColumn, e.what());
  } catch (const ArityError& e) {
    throw LlmError(LlmErrorKind::kArity, e.what());
  } catch (const ParameterError& e) {
    throw LlmError(LlmErrorKind::kInvalidDecision, e.what());
  }
}

}  // namespace

FeatureExpr propose_expr(ChatClient& client, const GenerationContext& ctx) {
  return validate_decision(parse_decision(client.complete(build_prompt(ctx))), *ctx.table);
}

GenerationDecision LlmFeatureGenerator::propose(const GenerationContext& ctx) {
  GenerationDecision d = parse_decision(client_.complete(build_prompt(ctx)));
  const FeatureExpr e = validate_decision(d, *ctx.table);
  spdlog::debug("llm proposed {}: {}", e.to_string(), d.rationale);
  return d;
}

}  // namespace evofg
