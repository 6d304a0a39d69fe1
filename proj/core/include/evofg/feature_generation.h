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

#ifndef EVOFG_FEATURE_GENERATION_H_
#define EVOFG_FEATURE_GENERATION_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "evofg/feature_dsl.h"
#include "evofg/feature_table.h"
#include "evofg/rng.h"

namespace evofg {

// Raw output of one generation step, before validation.
struct GenerationDecision {
  std::string category;
  std::vector<std::string> feature_names;
  std::string op;
  std::string rationale;
};

// Validates a decision against the table. Besides make_expr's errors this
// throws ParameterError for an unknown operator or category, and when the
// named features are not all in the stated category.
FeatureExpr decision_to_expr(const GenerationDecision& d, const RouterFeatureTable& table);

// What a backend may see: the schema (never node values) and the previous
// round's outcome.
struct GenerationContext {
  const RouterFeatureTable* table = nullptr;
  std::vector<std::string> accepted;  // last round, kept after selection
  std::vector<std::string> rejected;  // last round, dropped by selection
  int round = 0;
};

class FeatureGenerator {
 public:
  virtual ~FeatureGenerator() = default;
  virtual std::string name() const = 0;
  // Throws on backend failure; the returned decision may still be invalid.
  virtual GenerationDecision propose(const GenerationContext& ctx) = 0;
};

// Seeded four-stage sampler over the active columns: category uniform over
// non-empty categories, k from {1,2,3} with weights {0.4,0.4,0.2} capped by
// the category size, operator uniform within the arity class.
class RandomFeatureGenerator : public FeatureGenerator {
 public:
  explicit RandomFeatureGenerator(std::uint64_t seed);
  std::string name() const override { return "random"; }
  GenerationDecision propose(const GenerationContext& ctx) override;

 private:
  Rng rng_;
};

inline constexpr int kGenerationRetries = 10;

struct GenerationReport {
  std::vector<FeatureExpr> candidates;
  int skipped_slots = 0;
  bool fell_back = false;
  std::vector<std::string> log;
};

// Produces up to m distinct expressions that do not duplicate any existing
// column. A duplicate is retried up to 10 times before the slot is skipped.
// If `backend` throws or returns an invalid decision, the remaining slots
// (including the current one) use `fallback`.
GenerationReport generate_candidates(FeatureGenerator& backend, FeatureGenerator& fallback,
                                     const GenerationContext& ctx, int m);

}  // namespace evofg

#endif  // EVOFG_FEATURE_GENERATION_H_
