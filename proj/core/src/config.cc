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

#include "evofg/config.h"

#include <sstream>

#include <json.hpp>

#include "evofg/error.h"
#include "evofg/io.h"

namespace evofg {

using nlohmann::json;

namespace {

void require(bool ok, const char* field, const char* rule) {
  if (!ok) throw ParameterError(std::string("config field '") + field + "' must be " + rule);
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const char* where) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ParameterError(std::string("unknown config field '") + key + "' in " + where);
  }
}

}  // namespace

void PipelineConfig::validate() const {
  require(d > 0, "d", "positive");
  require(d_e > 0, "d_e", "positive");
  require(d_prime > 0, "d_prime", "positive");
  require(d_m > 0, "d_m", "positive");
  require(M > 0, "M", "positive");
  require(E == 4, "E", "4 (one per expert architecture)");
  require(lr > 0, "lr", "positive");
  require(router_lr >= 0, "router_lr", "non-negative");
  require(wd >= 0, "wd", "non-negative");
  for (int e : expert_epochs) require(e >= 0, "expert_epochs", "non-negative");
  require(warmup_epochs >= 0, "warmup_epochs", "non-negative");
  require(router_epochs >= 0, "router_epochs", "non-negative");
  require(T > 0, "T", "positive");
  require(K > 0, "K", "positive");
  require(lambda >= 0, "lambda", "non-negative");
  require(m > 0, "m", "positive");
  require(R >= 0, "R", "non-negative");
  require(mask_rate >= 0 && mask_rate < 1, "mask_rate", "in [0, 1)");
  require(key_fraction > 0 && key_fraction < 1, "key_fraction", "in (0, 1)");
  if (llm.enabled && llm.fixtures_dir.empty()) {
    require(!llm.base_url.empty(), "llm.base_url", "set when llm.enabled without fixtures");
  }
}

std::string PipelineConfig::to_json() const {
  json j = {{"d", d},
            {"d_e", d_e},
            {"d_prime", d_prime},
            {"d_m", d_m},
            {"M", M},
            {"E", E},
            {"lr", lr},
            {"router_lr", router_lr},
            {"wd", wd},
            {"expert_epochs", expert_epochs},
            {"warmup_epochs", warmup_epochs},
            {"router_epochs", router_epochs},
            {"T", T},
            {"K", K},
            {"lambda", lambda},
            {"m", m},
            {"R", R},
            {"z_crit", z_crit},
            {"mask_rate", mask_rate},
            {"key_fraction", key_fraction},
            {"target_keys", target_keys},
            {"llm",
             {{"base_url", llm.base_url},
              {"model", llm.model},
              {"fixtures_dir", llm.fixtures_dir},
              {"enabled", llm.enabled}}},
            {"ablation",
             {{"select", ablation.select},
              {"random_backend", ablation.random_backend},
              {"memory", ablation.memory},
              {"reset_final", ablation.reset_final}}},
            {"seed", seed}};
  return j.dump(2);
}

PipelineConfig PipelineConfig::from_json(const std::string& text) {
  PipelineConfig c;
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw ParameterError("config must be a JSON object");
    reject_unknown(j,
                   {"d", "d_e", "d_prime", "d_m", "M", "E", "lr", "router_lr", "wd", "expert_epochs",
                    "warmup_epochs", "router_epochs", "T", "K", "lambda", "m", "R", "z_crit",
                    "mask_rate", "key_fraction", "target_keys", "llm", "ablation", "seed"},
                   "config");
    read(j, "d", c.d);
    read(j, "d_e", c.d_e);
    read(j, "d_prime", c.d_prime);
    read(j, "d_m", c.d_m);
    read(j, "M", c.M);
    read(j, "E", c.E);
    read(j, "lr", c.lr);
    read(j, "router_lr", c.router_lr);
    read(j, "wd", c.wd);
    read(j, "expert_epochs", c.expert_epochs);
    read(j, "warmup_epochs", c.warmup_epochs);
    read(j, "router_epochs", c.router_epochs);
    read(j, "T", c.T);
    read(j, "K", c.K);
    read(j, "lambda", c.lambda);
    read(j, "m", c.m);
    read(j, "R", c.R);
    read(j, "z_crit", c.z_crit);
    read(j, "mask_rate", c.mask_rate);
    read(j, "key_fraction", c.key_fraction);
    read(j, "target_keys", c.target_keys);
    read(j, "seed", c.seed);
    if (j.contains("llm")) {
      const json& l = j.at("llm");
      reject_unknown(l, {"base_url", "model", "fixtures_dir", "enabled"}, "llm");
      read(l, "base_url", c.llm.base_url);
      read(l, "model", c.llm.model);
      read(l, "fixtures_dir", c.llm.fixtures_dir);
      read(l, "enabled", c.llm.enabled);
    }
    if (j.contains("ablation")) {
      const json& a = j.at("ablation");
      reject_unknown(a, {"select", "random_backend", "memory", "reset_final"}, "ablation");
      read(a, "select", c.ablation.select);
      read(a, "random_backend", c.ablation.random_backend);
      read(a, "memory", c.ablation.memory);
      read(a, "reset_final", c.ablation.reset_final);
    }
  } catch (const json::exception& e) {
    throw ParameterError(std::string("invalid config: ") + e.what());
  }
  c.validate();
  return c;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  auto in = io::open_input(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace evofg
