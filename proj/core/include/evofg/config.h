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

#ifndef EVOFG_CONFIG_H_
#define EVOFG_CONFIG_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>

namespace evofg {

struct LlmConfig {
  std::string base_url;
  std::string model = "Qwen2-7B-Instruct";
  std::string fixtures_dir;  // replay mode when non-empty
  bool enabled = false;
};

// Each flag switches off one mechanism.
struct AblationConfig {
  bool select = true;           // false: keep every generated feature
  bool random_backend = false;  // true: deterministic generator even if llm.enabled
  bool memory = true;           // false: projection-only router
  bool reset_final = false;     // true: fresh router for the final retrain
};

// JSON field names match the member names.
struct PipelineConfig {
  int d = 32;
  int d_e = 32;
  int d_prime = 32;
  int d_m = 32;
  int M = 32;
  int E = 4;
  double lr = 1e-5;
  double router_lr = 0.0;  // 0: same as lr
  double wd = 5e-5;
  std::array<int, 4> expert_epochs = {10, 10, 10, 40};  // LOWPASS, ATTENTION, CHEBY, GPR
  int warmup_epochs = 20;
  int router_epochs = 10;
  int T = 20;
  int K = 20;
  double lambda = 0.8;
  int m = 15;
  int R = 3;
  double z_crit = 1.645;
  double mask_rate = 0.3;
  double key_fraction = 0.1;
  bool target_keys = false;  // draw inference keys from the target graph instead
  LlmConfig llm;
  AblationConfig ablation;
  std::uint64_t seed = 0;

  // Throws ParameterError naming the offending field.
  void validate() const;
  std::string to_json() const;
  // Unknown fields are rejected; missing ones keep their defaults.
  static PipelineConfig from_json(const std::string& text);
  static PipelineConfig load(const std::filesystem::path& path);
};

}  // namespace evofg

#endif  // EVOFG_CONFIG_H_
