// Copyright 2026 The Fare Alliance Authors
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

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "alliance/bayes_opt.hpp"
#include "alliance/descent.hpp"
#include "alliance/evaluator.hpp"

namespace alliance {

class NoResult : public Error {
 public:
  NoResult() : Error("budget produced no result") {}
};

enum class Algorithm { Sos2Cd, Sos2CdR, Sos2CdMd, Sos2CdMdr, BfCd, Bo };

inline constexpr std::array<Algorithm, 6> kAlgorithms = {
    Algorithm::Sos2Cd, Algorithm::Sos2CdR, Algorithm::Sos2CdMd,
    Algorithm::Sos2CdMdr, Algorithm::BfCd, Algorithm::Bo};

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Sos2Cd: return "sos2cd";
    case Algorithm::Sos2CdR: return "sos2cd-r";
    case Algorithm::Sos2CdMd: return "sos2cd-md";
    case Algorithm::Sos2CdMdr: return "sos2cd-mdr";
    case Algorithm::BfCd: return "bfcd";
    case Algorithm::Bo: return "bo";
  }
  return "?";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view s) {
  for (Algorithm a : kAlgorithms) {
    if (to_string(a) == s) return a;
  }
  return std::nullopt;
}

inline bool is_sos2(Algorithm a) {
  return a != Algorithm::BfCd && a != Algorithm::Bo;
}

struct SolveConfig {
  Algorithm algorithm = Algorithm::Sos2CdMdr;
  Budget budget = Budget::seconds(60.0);
  Budget warm_start_budget = Budget::seconds(0.0);
  WarmStartProcedure warm_start = WarmStartProcedure::Uniform;
  int anchors = 11;
  double epsilon = 1e-4;
  double bf_money_step = 0.01;
  double bf_discount_step = 0.01;
  int max_passes = 1000;
  int threads = 1;
  std::uint64_t seed = 0;
  BoOptions bo;
};

struct SolveOutcome {
  FareVector fares;
  double welfare = -std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
  double seconds = 0.0;
  std::size_t trajectories = 0;
  std::size_t discarded = 0;
  std::size_t warm_starts = 0;
  std::vector<TrajectoryLog> logs;
  std::vector<BoHistoryEntry> history;

  bool found() const { return std::isfinite(welfare); }
};

inline DescentConfig descent_config(const SolveConfig& cfg) {
  DescentConfig dc;
  dc.anchors = cfg.anchors;
  dc.random = cfg.algorithm == Algorithm::Sos2CdR || cfg.algorithm == Algorithm::Sos2CdMdr;
  dc.multidim = cfg.algorithm == Algorithm::Sos2CdMd || cfg.algorithm == Algorithm::Sos2CdMdr;
  dc.epsilon = cfg.epsilon;
  dc.bf_money_step = cfg.bf_money_step;
  dc.bf_discount_step = cfg.bf_discount_step;
  dc.max_passes = cfg.max_passes;
  dc.threads = cfg.threads;
  dc.seed = cfg.seed;
  return dc;
}

// BF-CD restarted from uniform draws until the budget is spent. Unlike the
// SOS2 trajectories, a run cut short by the budget still reports its best
// point.
inline SolveOutcome timed_bf_cd(Evaluator& ev, const SolveConfig& cfg) {
  if (!(cfg.budget.amount > 0.0)) throw std::invalid_argument("budget must be positive");
  Stopwatch watch;
  const std::size_t before = ev.evaluations();
  const BudgetClock clock(cfg.budget.unit, ev);
  const double start = clock.now();
  const Deadline deadline{&clock, start + cfg.budget.amount};
  std::mt19937_64 rng(cfg.seed);
  const DescentConfig dc = descent_config(cfg);
  SolveOutcome out;
  while (!deadline.passed()) {
    ev.clear_cache();
    const DescentResult r = bf_cd(ev, uniform_fares(ev.bounds(), rng), dc, deadline);
    ++out.trajectories;
    if (r.welfare > out.welfare) {
      out.fares = r.fares;
      out.welfare = r.welfare;
    }
    out.logs.push_back(r.log);
  }
  ev.clear_cache();
  out.evaluations = ev.evaluations() - before;
  out.seconds = watch.seconds();
  return out;
}

inline SolveOutcome solve(Evaluator& ev, const SolveConfig& cfg) {
  if (!(cfg.budget.amount > 0.0)) throw std::invalid_argument("budget must be positive");
  if (cfg.algorithm == Algorithm::BfCd) return timed_bf_cd(ev, cfg);
  if (cfg.algorithm == Algorithm::Bo) {
    BoOptions opt = cfg.bo;
    opt.seed = cfg.seed;
    BoFareResult r = bo_loop(ev, cfg.budget, opt);
    SolveOutcome out;
    out.fares = r.fares;
    out.welfare = r.welfare;
    out.evaluations = r.evaluations;
    out.seconds = r.seconds;
    out.history = std::move(r.history);
    return out;
  }
  TimedConfig tc;
  tc.budget = cfg.budget;
  tc.warm_start_budget = cfg.warm_start_budget;
  tc.procedure = cfg.warm_start;
  tc.descent = descent_config(cfg);
  tc.bo = cfg.bo;
  tc.seed = cfg.seed;
  TimedResult r = timed_sos2_cd(ev, tc);
  SolveOutcome out;
  out.fares = r.fares;
  out.welfare = r.welfare;
  out.evaluations = r.evaluations;
  out.seconds = r.seconds;
  out.trajectories = r.trajectories;
  out.discarded = r.discarded;
  out.warm_starts = r.warm_starts;
  out.logs = std::move(r.logs);
  return out;
}

inline SolveOutcome solve(const Model& m, const ObjectiveWeights& w, const SolveConfig& cfg,
                          Regime regime = Regime::Alliance) {
  Evaluator ev(m, w, regime);
  return solve(ev, cfg);
}

}  // namespace alliance
