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

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <vector>

#include "alliance/second_stage.hpp"

namespace alliance {

// Alliance: discounts chosen by the exact second stage. NonCooperative: no
// discounts, every route charged its full price.
enum class Regime { Alliance, NonCooperative };

struct Budget {
  enum class Unit { Seconds, Evaluations };
  Unit unit = Unit::Seconds;
  double amount = 0.0;

  static Budget seconds(double s) { return {Unit::Seconds, s}; }
  static Budget evaluations(double n) { return {Unit::Evaluations, n}; }
};

class Evaluator {
 public:
  using Key = std::array<std::int64_t, kFareDims>;

  Evaluator(const Model& m, ObjectiveWeights w, Regime regime = Regime::Alliance,
            SecondStageOptions opt = {})
      : model_(&m), weights_(w), regime_(regime), options_(opt) {}
  explicit Evaluator(const Model& m) : Evaluator(m, m.weights()) {}

  const Model& model() const { return *model_; }
  const ObjectiveWeights& weights() const { return weights_; }
  const FareBounds& bounds() const { return model_->bounds(); }
  Regime regime() const { return regime_; }
  std::size_t evaluations() const { return evaluations_; }

  // Uncached second-stage solve; does not touch the evaluation counter.
  SecondStageSolution solve(const FareVector& y) const {
    if (regime_ == Regime::NonCooperative) {
      return evaluate_activation(*model_, y,
                                 ActivationVector(model_->categories().size(), 0),
                                 weights_);
    }
    return solve_exact(*model_, y, weights_, options_);
  }

  std::shared_ptr<const SecondStageSolution> solution(const FareVector& y) {
    const Key k = key(y);
    auto it = solutions_.find(k);
    if (it != solutions_.end()) return it->second;
    auto sol = std::make_shared<const SecondStageSolution>(solve(y));
    ++evaluations_;
    solutions_.emplace(k, sol);
    values_.emplace(k, sol->welfare.total);
    return sol;
  }

  double value(const FareVector& y) {
    const Key k = key(y);
    auto it = values_.find(k);
    if (it != values_.end()) return it->second;
    const double v = solve(y).welfare.total;
    ++evaluations_;
    values_.emplace(k, v);
    return v;
  }

  // Solves every point not yet cached, possibly in parallel, then caches the
  // results in input order.
  void prefetch(const std::vector<FareVector>& ys, int threads) {
    std::vector<FareVector> todo;
    std::vector<Key> keys;
    for (const FareVector& y : ys) {
      const Key k = key(y);
      if (solutions_.count(k) ||
          std::find(keys.begin(), keys.end(), k) != keys.end()) {
        continue;
      }
      keys.push_back(k);
      todo.push_back(y);
    }
    if (todo.empty()) return;
    std::vector<std::shared_ptr<const SecondStageSolution>> out(todo.size());
    parallel_for(todo.size(), threads, [&](std::size_t q) {
      out[q] = std::make_shared<const SecondStageSolution>(solve(todo[q]));
    });
    for (std::size_t q = 0; q < todo.size(); ++q) {
      ++evaluations_;
      solutions_.emplace(keys[q], out[q]);
      values_.emplace(keys[q], out[q]->welfare.total);
    }
  }

  void clear_cache() {
    solutions_.clear();
    values_.clear();
  }

  static Key key(const FareVector& y) {
    Key k{};
    for (int d = 0; d < kFareDims; ++d) {
      k[d] = static_cast<std::int64_t>(std::llround(y.values[d] * 1e9));
    }
    return k;
  }

 private:
  const Model* model_;
  ObjectiveWeights weights_;
  Regime regime_;
  SecondStageOptions options_;
  std::size_t evaluations_ = 0;
  std::map<Key, std::shared_ptr<const SecondStageSolution>> solutions_;
  std::map<Key, double> values_;
};

// Measures budget consumption either in wall-clock seconds or in
// second-stage evaluations of one evaluator.
class BudgetClock {
 public:
  BudgetClock(Budget::Unit unit, const Evaluator& ev) : unit_(unit), ev_(&ev) {}
  Budget::Unit unit() const { return unit_; }
  double now() const {
    return unit_ == Budget::Unit::Seconds ? watch_.seconds()
                                          : static_cast<double>(ev_->evaluations());
  }

 private:
  Budget::Unit unit_;
  const Evaluator* ev_;
  Stopwatch watch_;
};

struct Deadline {
  const BudgetClock* clock = nullptr;
  double at = std::numeric_limits<double>::infinity();
  bool passed() const { return clock != nullptr && clock->now() >= at; }
};

}  // namespace alliance
