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

#include "evofg/feature_generation.h"

#include <algorithm>
#include <set>

#include <spdlog/spdlog.h>

#include "evofg/error.h"

namespace evofg {

FeatureExpr decision_to_expr(const GenerationDecision& d, const RouterFeatureTable& table) {
  const auto op = parse_op(d.op);
  if (!op) throw ParameterError("unknown operator '" + d.op + "'");
  const auto category = parse_category(d.category);
  if (!category) throw ParameterError("unknown category '" + d.category + "'");
  FeatureExpr e = make_expr(*op, d.feature_names, table);
  for (const auto& f : d.feature_names) {
    if (table.categories()[table.index_of(f)] != *category) {
      throw ParameterError("feature '" + f + "' is not in category " + d.category);
    }
  }
  return e;
}

RandomFeatureGenerator::RandomFeatureGenerator(std::uint64_t seed)
    : rng_(make_rng(seed, "random-generator")) {}

GenerationDecision RandomFeatureGenerator::propose(const GenerationContext& ctx) {
  const auto groups = ctx.table->active_by_category();
  std::vector<int> nonempty;
  for (int c = 0; c < kNumCategories; ++c) {
    if (!groups[c].empty()) nonempty.push_back(c);
  }
  if (nonempty.empty()) throw ContractError("no active feature columns to combine");
  const int c = nonempty[uniform_index(rng_, nonempty.size())];
  const auto& cols = groups[c];

  const double u = uniform01(rng_);
  int k = u < 0.4 ? 1 : (u < 0.8 ? 2 : 3);
  k = std::min<int>(k, static_cast<int>(cols.size()));

  std::vector<std::string> pool = cols;
  GenerationDecision d;
  d.category = std::string(to_string(static_cast<Category>(c)));
  for (int i = 0; i < k; ++i) {
    const auto j = uniform_index(rng_, pool.size());
    d.feature_names.push_back(pool[j]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(j));
  }
  const auto ops = ops_for_arity(k);
  d.op = std::string(to_string(ops[uniform_index(rng_, ops.size())]));
  d.rationale = "random draw";
  return d;
}

GenerationReport generate_candidates(FeatureGenerator& backend, FeatureGenerator& fallback,
                                     const GenerationContext& ctx, int m) {
  GenerationReport report;
  std::set<std::string> taken(ctx.table->names().begin(), ctx.table->names().end());
  FeatureGenerator* active = &backend;

  for (int slot = 0; slot < m; ++slot) {
    bool filled = false;
    for (int attempt = 0; attempt <= kGenerationRetries && !filled; ++attempt) {
      FeatureExpr e;
      try {
        e = decision_to_expr(active->propose(ctx), *ctx.table);
      } catch (const Error& err) {
        if (active == &fallback) throw;
        const std::string msg = "backend '" + backend.name() + "' failed (" + err.what() +
                                "); falling back to '" + fallback.name() + "'";
        spdlog::warn("{}", msg);
        report.log.push_back(msg);
        report.fell_back = true;
        active = &fallback;
        --attempt;
        continue;
      }
      const std::string name = e.to_string();
      if (taken.count(name)) {
        report.log.push_back("duplicate " + name);
        continue;
      }
      taken.insert(name);
      report.candidates.push_back(std::move(e));
      filled = true;
    }
    if (!filled) {
      ++report.skipped_slots;
      const std::string msg = "slot " + std::to_string(slot) + " skipped after " +
                              std::to_string(kGenerationRetries) + " duplicate retries";
      spdlog::warn("{}", msg);
      report.log.push_back(msg);
    }
  }
  return report;
}

}  // namespace evofg
