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

#include <limits>
#include <vector>

#include "alliance/evaluator.hpp"
#include "alliance/gp.hpp"

namespace alliance {

struct BoFareResult {
  FareVector fares;
  double welfare = -std::numeric_limits<double>::infinity();
  std::vector<BoHistoryEntry> history;
  std::size_t evaluations = 0;
  double seconds = 0.0;
};

// Bayesian optimization of W over the fare box. Every suggested point is
// solved exactly; the loop stops before starting an evaluation once the
// budget is spent.
inline BoFareResult bo_loop(Evaluator& ev, const Budget& budget,
                            const BoOptions& opt) {
  if (!(budget.amount > 0.0)) throw std::invalid_argument("budget must be positive");
  const BudgetClock clock(budget.unit, ev);
  const double start = clock.now();
  Stopwatch watch;
  std::size_t evals = 0;
  auto f = [&](const std::vector<double>& u) {
    ++evals;
    return ev.value(from_unit_cube(ev.bounds(), u));
  };
  auto stop = [&] { return clock.now() - start >= budget.amount; };
  BoResult r = bo_maximize(f, kFareDims, opt,
                           std::numeric_limits<std::size_t>::max(), stop);
  BoFareResult out;
  out.fares = clamp_to_bounds(ev.bounds(), from_unit_cube(ev.bounds(), r.best_point));
  out.welfare = r.best_value;
  out.history = std::move(r.history);
  out.evaluations = evals;
  out.seconds = watch.seconds();
  return out;
}

}  // namespace alliance
