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

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "alliance/bayes_opt.hpp"
#include "alliance/evaluator.hpp"
#include "alliance/sos2.hpp"

namespace alliance {

struct DescentConfig {
  int anchors = 11;
  bool random = false;
  bool multidim = false;
  double epsilon = 1e-4;
  double bf_discount_step = 0.01;
  double bf_money_step = 0.01;
  std::uint64_t seed = 0;
  int max_passes = 1000;
  int threads = 1;
  std::array<bool, kFareDims> free_axes = {true, true, true, true, true};

  void check() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (!(bf_discount_step > 0.0) || !(bf_money_step > 0.0)) {
      throw std::invalid_argument("grid steps must be positive");
    }
    if (anchors < 2) throw std::invalid_argument("need at least two anchors");
  }
};

struct AcceptedPoint {
  FareVector fares;
  double welfare = 0.0;
  int pass = 0;
  std::string direction;
};

struct TrajectoryLog {
  std::vector<AcceptedPoint> accepted;
  std::map<std::string, std::size_t> direction_evaluations;
  std::vector<double> pass_seconds;
  int passes = 0;
  bool truncated = false;
  bool hit_pass_cap = false;
};

struct DescentResult {
  FareVector fares;
  double welfare = 0.0;
  TrajectoryLog log;
};

inline std::vector<SearchDirection> search_directions(
    bool random, bool multidim, std::mt19937_64& rng,
    const std::array<bool, kFareDims>& free_axes = {true, true, true, true, true}) {
  std::vector<SearchDirection> dirs;
  auto is_free = [&](FareAxis a) { return free_axes[axis_index(a)]; };
  if (multidim) {
    for (OperatorKind k : kOperatorKinds) {
      const bool b = is_free(base_axis(k)), mk = is_free(markup_axis(k));
      if (b && mk) {
        dirs.push_back(SearchDirection::plane(k));
      } else if (b) {
        dirs.push_back(SearchDirection::single(base_axis(k)));
      } else if (mk) {
        dirs.push_back(SearchDirection::single(markup_axis(k)));
      }
    }
    if (is_free(FareAxis::Discount)) dirs.push_back(SearchDirection::single(FareAxis::Discount));
  } else {
    for (FareAxis a : kFareAxes) {
      if (is_free(a)) dirs.push_back(SearchDirection::single(a));
    }
  }
  if (random) std::shuffle(dirs.begin(), dirs.end(), rng);
  return dirs;
}

// SOS2 coordinate descent from y0. A candidate replaces the current point
// only if its true W is strictly larger.
inline DescentResult sos2_cd(Evaluator& ev, const FareVector& y0,
                             const DescentConfig& cfg, std::mt19937_64& rng,
                             const Deadline& deadline = {}) {
  cfg.check();
  const FareBounds& bounds = ev.bounds();
  DescentResult res;
  res.fares = y0;
  res.welfare = ev.solution(y0)->welfare.total;
  res.log.accepted.push_back({y0, res.welfare, 0, "start"});
  double obj_prev = -std::numeric_limits<double>::infinity();
  double obj_cur = res.welfare;
  while (obj_cur - obj_prev > cfg.epsilon) {
    if (res.log.passes >= cfg.max_passes) {
      res.log.hit_pass_cap = true;
      break;
    }
    Stopwatch watch;
    ++res.log.passes;
    obj_prev = obj_cur;
    for (const SearchDirection& dir :
         search_directions(cfg.random, cfg.multidim, rng, cfg.free_axes)) {
      if (deadline.passed()) {
        res.log.truncated = true;
        return res;
      }
      AnchorSet set;
      try {
        set = generate_anchors(res.fares, dir, cfg.anchors, bounds, rng);
      } catch (const DegenerateRange&) {
        continue;
      }
      const std::size_t before = ev.evaluations();
      std::vector<FareVector> pts;
      for (const Anchor& a : set.anchors) pts.push_back(a.fares);
      ev.prefetch(pts, cfg.threads);
      for (Anchor& a : set.anchors) a.solution = ev.solution(a.fares);
      const Sos2Result best = sos2_optimize(set, ev.model(), ev.weights());
      const FareVector cand = clamp_to_bounds(bounds, best.fares);
      const double w = ev.solution(cand)->welfare.total;
      res.log.direction_evaluations[dir.label()] += ev.evaluations() - before;
      if (w > res.welfare) {
        res.fares = cand;
        res.welfare = w;
        res.log.accepted.push_back({cand, w, res.log.passes, dir.label()});
      }
    }
    obj_cur = res.welfare;
    res.log.pass_seconds.push_back(watch.seconds());
  }
  return res;
}

inline std::vector<double> axis_grid(double lo, double hi, double step) {
  std::vector<double> g;
  const auto n = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
  for (long long j = 0; j <= n; ++j) g.push_back(std::min(hi, lo + step * j));
  if (g.back() < hi) g.push_back(hi);
  return g;
}

// Coordinate descent whose line search evaluates the whole axis grid and
// keeps the best grid point. Returns the best point so far when the deadline
// passes.
inline DescentResult bf_cd(Evaluator& ev, const FareVector& y0,
                           const DescentConfig& cfg, const Deadline& deadline = {}) {
  cfg.check();
  const FareBounds& bounds = ev.bounds();
  DescentResult res;
  res.fares = y0;
  res.welfare = ev.value(y0);
  res.log.accepted.push_back({y0, res.welfare, 0, "start"});
  double obj_prev = -std::numeric_limits<double>::infinity();
  double obj_cur = res.welfare;
  while (obj_cur - obj_prev > cfg.epsilon) {
    if (res.log.passes >= cfg.max_passes) {
      res.log.hit_pass_cap = true;
      break;
    }
    Stopwatch watch;
    ++res.log.passes;
    obj_prev = obj_cur;
    for (FareAxis a : kFareAxes) {
      if (!cfg.free_axes[axis_index(a)]) continue;
      const double lo = axis_lower(bounds, a), hi = axis_upper(bounds, a);
      const double step = a == FareAxis::Discount ? cfg.bf_discount_step : cfg.bf_money_step;
      const std::size_t before = ev.evaluations();
      FareVector best = res.fares;
      double best_w = res.welfare;
      for (double z : axis_grid(lo, hi, step)) {
        if (deadline.passed()) {
          res.log.truncated = true;
          break;
        }
        FareVector y = res.fares;
        y[a] = z;
        const double w = ev.value(y);
        if (w > best_w) {
          best_w = w;
          best = y;
        }
      }
      res.log.direction_evaluations[std::string(to_string(a))] += ev.evaluations() - before;
      if (best_w > res.welfare) {
        res.fares = best;
        res.welfare = best_w;
        res.log.accepted.push_back({best, best_w, res.log.passes, std::string(to_string(a))});
      }
      if (res.log.truncated) return res;
    }
    obj_cur = res.welfare;
    res.log.pass_seconds.push_back(watch.seconds());
  }
  return res;
}

enum class WarmStartProcedure { Uniform, Bayesian };

struct TimedConfig {
  Budget warm_start_budget = Budget::seconds(0.0);
  Budget budget = Budget::seconds(60.0);
  WarmStartProcedure procedure = WarmStartProcedure::Uniform;
  DescentConfig descent;
  BoOptions bo;
  std::uint64_t seed = 0;
};

struct WarmStartCandidate {
  FareVector fares;
  double welfare = 0.0;
};

struct TimedResult {
  FareVector fares;
  double welfare = -std::numeric_limits<double>::infinity();
  std::size_t trajectories = 0;
  std::size_t discarded = 0;
  std::size_t warm_starts = 0;
  std::size_t warm_starts_used = 0;
  std::vector<WarmStartCandidate> consumed_warm_starts;
  std::vector<TrajectoryLog> logs;
  std::size_t evaluations = 0;
  double seconds = 0.0;
};

// Multi-trajectory SOS2-CD under a budget, optionally seeded by warm starts.
// A trajectory that overruns the remaining budget is discarded.
inline TimedResult timed_sos2_cd(Evaluator& ev, const TimedConfig& cfg) {
  if (cfg.warm_start_budget.amount < 0.0 || !(cfg.budget.amount > 0.0)) {
    throw std::invalid_argument("need warm-start budget >= 0 and budget > 0");
  }
  if (cfg.warm_start_budget.amount > 0.0 && cfg.warm_start_budget.unit != cfg.budget.unit) {
    throw std::invalid_argument("warm-start and main budgets must share a unit");
  }
  Stopwatch watch;
  const std::size_t evals_before = ev.evaluations();
  std::mt19937_64 rng(cfg.seed);
  const FareBounds& bounds = ev.bounds();
  TimedResult out;
  out.fares = uniform_fares(bounds, rng);
  out.welfare = ev.value(out.fares);

  const BudgetClock clock(cfg.budget.unit, ev);
  std::vector<WarmStartCandidate> pool;
  double t_ws = cfg.warm_start_budget.amount;
  BoOptions bo_opt = cfg.bo;
  bo_opt.seed = cfg.seed ^ 0x9e3779b97f4a7c15ULL;
  BayesOptimizer bo(kFareDims, bo_opt);
  while (t_ws > 0.0) {
    const double t0 = clock.now();
    FareVector y;
    double w = 0.0;
    if (cfg.procedure == WarmStartProcedure::Bayesian) {
      const std::vector<double> u = bo.suggest();
      y = clamp_to_bounds(bounds, from_unit_cube(bounds, u));
      w = ev.value(y);
      bo.observe(u, w);
    } else {
      y = uniform_fares(bounds, rng);
      w = ev.value(y);
    }
    t_ws -= clock.now() - t0;
    if (t_ws >= 0.0) pool.push_back({y, w});
  }
  out.warm_starts = pool.size();

  double t = cfg.budget.amount;
  while (t > 0.0) {
    FareVector y0;
    if (!pool.empty()) {
      auto it = pool.begin();
      for (auto q = pool.begin(); q != pool.end(); ++q) {
        if (q->welfare > it->welfare) it = q;
      }
      y0 = it->fares;
      out.consumed_warm_starts.push_back(*it);
      pool.erase(it);
      ++out.warm_starts_used;
    } else {
      y0 = uniform_fares(bounds, rng);
    }
    const double t0 = clock.now();
    ev.clear_cache();
    const DescentResult r = sos2_cd(ev, y0, cfg.descent, rng, Deadline{&clock, t0 + t});
    t -= clock.now() - t0;
    if (t >= 0.0 && !r.log.truncated) {
      ++out.trajectories;
      if (r.welfare > out.welfare) {
        out.fares = r.fares;
        out.welfare = r.welfare;
      }
    } else {
      ++out.discarded;
    }
    out.logs.push_back(r.log);
  }
  ev.clear_cache();
  out.evaluations = ev.evaluations() - evals_before;
  out.seconds = watch.seconds();
  return out;
}

}  // namespace alliance
