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
#include <limits>
#include <random>
#include <vector>

#include "alliance/descent.hpp"
#include "alliance/evaluator.hpp"

namespace alliance {

struct OperatorWeights {
  ObjectiveWeights transit;
  ObjectiveWeights mod{0.0, 1.0, 0.0};
  const ObjectiveWeights& of(OperatorKind k) const {
    return k == OperatorKind::Transit ? transit : mod;
  }
};

// W_k: the welfare formula under operator k's weights, with no discounts so
// every route is charged its full price.
inline double operator_objective(const Model& m, const FareVector& fares,
                                 const ObjectiveWeights& wk) {
  return welfare(m, fares, ActivationVector(m.categories().size(), 0), wk).total;
}

struct GameConfig {
  DescentConfig descent;
  int starts = 3;
  int coarse_grid = 21;
  int refine_points = 21;
  double refine_step = 0.01;
  double polish_step = 0.01;
  double polish_tolerance = 1e-6;
  double epsilon = 1e-4;
  int max_rounds = 50;
  std::uint64_t seed = 0;

  GameConfig() { descent.random = true; }
};

struct BestResponse {
  FareVector fares;
  double objective = 0.0;
};

inline std::array<bool, kFareDims> own_axes(OperatorKind k) {
  std::array<bool, kFareDims> free{};
  free[axis_index(base_axis(k))] = true;
  free[axis_index(markup_axis(k))] = true;
  return free;
}

// Maximizes W_k over operator k's fare box with the other operator fixed:
// a coarse grid, SOS2-CD from several starts, a fine grid around the
// incumbent and a shrinking compass search.
inline BestResponse best_response(const Model& m, OperatorKind k, const FareVector& fares,
                                  const ObjectiveWeights& wk, const GameConfig& cfg,
                                  std::mt19937_64& rng) {
  Evaluator ev(m, wk, Regime::NonCooperative);
  const FareBounds& b = m.bounds();
  const FareAxis ax = base_axis(k), ay = markup_axis(k);
  const double x_lo = axis_lower(b, ax), x_hi = axis_upper(b, ax);
  const double y_lo = axis_lower(b, ay), y_hi = axis_upper(b, ay);

  BestResponse best{fares, ev.value(fares)};
  auto consider = [&](const FareVector& y) {
    const double v = ev.value(y);
    if (v > best.objective) best = {y, v};
    return v;
  };

  FareVector coarse = fares;
  double coarse_v = -std::numeric_limits<double>::infinity();
  const int g = std::max(cfg.coarse_grid, 2);
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      FareVector y = fares;
      y[ax] = x_lo + (x_hi - x_lo) * i / (g - 1);
      y[ay] = y_lo + (y_hi - y_lo) * j / (g - 1);
      const double v = consider(y);
      if (v > coarse_v) {
        coarse_v = v;
        coarse = y;
      }
    }
  }

  DescentConfig dc = cfg.descent;
  dc.free_axes = own_axes(k);
  std::vector<FareVector> starts{fares, coarse};
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (static_cast<int>(starts.size()) < cfg.starts) {
    FareVector y = fares;
    y[ax] = x_lo + unit(rng) * (x_hi - x_lo);
    y[ay] = y_lo + unit(rng) * (y_hi - y_lo);
    starts.push_back(y);
  }
  starts.resize(static_cast<std::size_t>(std::max(cfg.starts, 1)));
  for (const FareVector& s : starts) {
    const DescentResult r = sos2_cd(ev, s, dc, rng);
    if (r.welfare > best.objective) best = {r.fares, r.welfare};
  }

  const FareVector center = best.fares;
  const int half = cfg.refine_points / 2;
  for (int i = -half; i <= half; ++i) {
    for (int j = -half; j <= half; ++j) {
      FareVector y = center;
      y[ax] = std::clamp(center[ax] + i * cfg.refine_step, x_lo, x_hi);
      y[ay] = std::clamp(center[ay] + j * cfg.refine_step, y_lo, y_hi);
      consider(y);
    }
  }

  for (double h = cfg.polish_step; h >= cfg.polish_tolerance;) {
    bool moved = false;
    for (FareAxis a : {ax, ay}) {
      for (double sgn : {1.0, -1.0}) {
        FareVector y = best.fares;
        y[a] = std::clamp(y[a] + sgn * h, axis_lower(b, a), axis_upper(b, a));
        const double before = best.objective;
        consider(y);
        moved |= best.objective > before;
      }
    }
    if (!moved) h *= 0.5;
  }
  return best;
}

struct IbrStep {
  int round = 0;
  OperatorKind op = OperatorKind::Transit;
  FareVector before;
  FareVector after;
  double objective_before = 0.0;
  double objective_after = 0.0;
  double gain = 0.0;
  bool moved = false;
};

struct IbrResult {
  FareVector fares;
  std::array<double, 2> objective{};
  int rounds = 0;
  bool converged = false;
  std::vector<IbrStep> transcript;
};

// Alternating best responses (transit first) from a uniform draw of both
// operators' fares. Each turn compares against W_k at the current fares.
inline IbrResult iterated_best_response(const Model& m, const OperatorWeights& w,
                                        const GameConfig& cfg) {
  if (!(cfg.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  std::mt19937_64 rng(cfg.seed);
  IbrResult out;
  FareVector fares = uniform_fares(m.bounds(), rng);
  fares[FareAxis::Discount] = m.bounds().discount_min;
  while (out.rounds < cfg.max_rounds) {
    ++out.rounds;
    double max_gain = 0.0;
    for (OperatorKind k : kOperatorKinds) {
      IbrStep step;
      step.round = out.rounds;
      step.op = k;
      step.before = fares;
      step.objective_before = operator_objective(m, fares, w.of(k));
      const BestResponse br = best_response(m, k, fares, w.of(k), cfg, rng);
      step.gain = br.objective - step.objective_before;
      if (br.objective > step.objective_before) {
        fares = br.fares;
        step.moved = true;
      }
      step.after = fares;
      step.objective_after = std::max(br.objective, step.objective_before);
      max_gain = std::max(max_gain, step.gain);
      out.transcript.push_back(step);
    }
    if (max_gain <= cfg.epsilon) {
      out.converged = true;
      break;
    }
  }
  out.fares = fares;
  for (OperatorKind k : kOperatorKinds) {
    out.objective[kind_index(k)] = operator_objective(m, fares, w.of(k));
  }
  return out;
}

struct NeCheck {
  bool ok = true;
  double worst_deviation = 0.0;
  OperatorKind op = OperatorKind::Transit;
  FareVector deviation;
};

// Scans every unilateral deviation on a grid of each operator's fare box.
inline NeCheck verify_ne(const Model& m, const FareVector& fares, const OperatorWeights& w,
                         double grid_step, double eps) {
  NeCheck out;
  out.deviation = fares;
  out.worst_deviation = -std::numeric_limits<double>::infinity();
  const FareBounds& b = m.bounds();
  for (OperatorKind k : kOperatorKinds) {
    const double base = operator_objective(m, fares, w.of(k));
    const FareAxis ax = base_axis(k), ay = markup_axis(k);
    for (double x : axis_grid(axis_lower(b, ax), axis_upper(b, ax), grid_step)) {
      for (double y : axis_grid(axis_lower(b, ay), axis_upper(b, ay), grid_step)) {
        FareVector d = fares;
        d[ax] = x;
        d[ay] = y;
        const double gain = operator_objective(m, d, w.of(k)) - base;
        if (gain > out.worst_deviation) {
          out.worst_deviation = gain;
          out.op = k;
          out.deviation = d;
        }
      }
    }
  }
  out.ok = out.worst_deviation <= eps;
  return out;
}

}  // namespace alliance
