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
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "alliance/instance_json.hpp"
#include "alliance/solve.hpp"
#include "alliance/sos2.hpp"

namespace alliance {

struct Ridership {
  int id = 0;
  double riders = 0.0;
  double demand = 0.0;
};

struct RunReport {
  std::string instance_hash;
  std::string algorithm;
  json config;
  std::uint64_t seed = 0;
  ObjectiveWeights weights;
  FareVector fares;
  WelfareBreakdown welfare;
  ActivationVector activations;
  std::vector<int> category_ids;
  std::vector<Ridership> towns;
  std::vector<Ridership> categories;
  double revenue_transit = 0.0;
  double revenue_mod = 0.0;
  std::size_t evaluations = 0;
  std::optional<double> seconds;
};

inline std::vector<Ridership> town_ridership(const Model& m, const ShareTable& s) {
  std::map<int, Ridership> acc;
  for (std::size_t i = 0; i < m.types().size(); ++i) {
    const auto& t = m.types()[i];
    Ridership& r = acc[t.town];
    r.id = t.town;
    r.riders += t.count * (1.0 - s.outside_share[i]);
    r.demand += t.count;
  }
  std::vector<Ridership> out;
  for (auto& [id, r] : acc) out.push_back(r);
  return out;
}

inline std::vector<Ridership> category_ridership(const Model& m, const ShareTable& s) {
  std::vector<Ridership> out(m.categories().size());
  for (std::size_t a = 0; a < out.size(); ++a) out[a].id = m.categories()[a].id;
  for (std::size_t i = 0; i < m.types().size(); ++i) {
    const auto& t = m.types()[i];
    for (std::size_t j = 0; j < t.routes.size(); ++j) {
      const int a = m.routes()[t.routes[j]].category;
      if (a < 0) continue;
      out[a].riders += t.count * s.share[i][j];
      out[a].demand += t.count;
    }
  }
  return out;
}

inline double total_riders(const Model& m, const ShareTable& s) {
  double r = 0.0;
  for (std::size_t i = 0; i < m.types().size(); ++i) {
    r += m.types()[i].count * (1.0 - s.outside_share[i]);
  }
  return r;
}

inline double total_demand(const Model& m) {
  double d = 0.0;
  for (const auto& t : m.types()) d += t.count;
  return d;
}

inline RunReport make_report(const Model& m, const ObjectiveWeights& w, const FareVector& fares,
                             Regime regime = Regime::Alliance) {
  Evaluator ev(m, w, regime);
  const SecondStageSolution sol = ev.solve(fares);
  RunReport r;
  r.instance_hash = instance_hash_hex(m.instance());
  r.weights = w;
  r.fares = fares;
  r.welfare = sol.welfare;
  r.activations = sol.activations;
  for (const auto& c : m.categories()) r.category_ids.push_back(c.id);
  r.towns = town_ridership(m, sol.shares);
  r.categories = category_ridership(m, sol.shares);
  r.revenue_transit = operator_revenue(m, fares, sol.activations, OperatorKind::Transit);
  r.revenue_mod = operator_revenue(m, fares, sol.activations, OperatorKind::Mod);
  return r;
}

// Re-evaluates the reported fares and checks the reported W.
inline bool verify_report(const Model& m, const RunReport& r, double tol = 1e-9,
                          Regime regime = Regime::Alliance) {
  Evaluator ev(m, r.weights, regime);
  const double w = ev.solve(r.fares).welfare.total;
  return std::fabs(w - r.welfare.total) <= tol * std::max(1.0, std::fabs(w));
}

inline json to_json(const WelfareBreakdown& w) {
  return {{"pax", w.pax_term}, {"rev", w.rev_term}, {"vmt", w.vmt_term}, {"total", w.total}};
}

inline json to_json(const std::vector<Ridership>& rows, const char* key) {
  json out = json::array();
  for (const Ridership& r : rows) {
    out.push_back({{key, r.id}, {"riders", r.riders}, {"demand", r.demand}});
  }
  return out;
}

inline json to_json(const RunReport& r) {
  json acts = json::array();
  for (std::size_t a = 0; a < r.activations.size(); ++a) {
    acts.push_back({{"category", r.category_ids[a]}, {"active", r.activations[a] != 0}});
  }
  json j = {{"instance_hash", r.instance_hash},
            {"algorithm", r.algorithm},
            {"config", r.config},
            {"seed", r.seed},
            {"weights", to_json(r.weights)},
            {"fares", to_json(r.fares)},
            {"welfare", to_json(r.welfare)},
            {"activations", acts},
            {"ridership",
             {{"towns", to_json(r.towns, "town")},
              {"categories", to_json(r.categories, "category")}}},
            {"revenue", {{"transit", r.revenue_transit}, {"mod", r.revenue_mod}}},
            {"evaluations", r.evaluations}};
  if (r.seconds) j["seconds"] = *r.seconds;
  return j;
}

inline json to_json(const SolveConfig& c) {
  auto budget = [](const Budget& b) {
    return json{{"unit", b.unit == Budget::Unit::Seconds ? "seconds" : "evaluations"},
                {"amount", b.amount}};
  };
  return {{"algorithm", std::string(to_string(c.algorithm))},
          {"budget", budget(c.budget)},
          {"warm_start_budget", budget(c.warm_start_budget)},
          {"warm_start", c.warm_start == WarmStartProcedure::Uniform ? "uniform" : "bo"},
          {"anchors", c.anchors},
          {"epsilon", c.epsilon},
          {"bf_money_step", c.bf_money_step},
          {"bf_discount_step", c.bf_discount_step},
          {"max_passes", c.max_passes},
          {"threads", c.threads},
          {"seed", c.seed},
          {"bo",
           {{"lengthscale", c.bo.hyper.lengthscale},
            {"signal_variance", c.bo.hyper.signal_variance},
            {"jitter", c.bo.hyper.jitter},
            {"kappa", c.bo.ucb.kappa},
            {"candidate_count", c.bo.ucb.candidate_count}}}};
}

// Runs one optimization and wraps it in a report. Wall-clock time is only
// recorded for time budgets so that evaluation-budget reports are
// reproducible byte for byte.
inline RunReport run_and_report(const Model& m, const ObjectiveWeights& w, const SolveConfig& cfg,
                                SolveOutcome* outcome = nullptr) {
  SolveOutcome out = solve(m, w, cfg);
  if (!out.found()) throw NoResult();
  RunReport r = make_report(m, w, out.fares);
  r.algorithm = std::string(to_string(cfg.algorithm));
  r.config = to_json(cfg);
  r.seed = cfg.seed;
  r.evaluations = out.evaluations;
  if (cfg.budget.unit == Budget::Unit::Seconds) r.seconds = out.seconds;
  if (outcome) *outcome = std::move(out);
  return r;
}

// One row per weight vector.
struct SweepRow {
  ObjectiveWeights weights;
  FareVector fares;
  WelfareBreakdown welfare;
  double price_min = 0.0;
  double price_mean = 0.0;
  double price_max = 0.0;
  double pax_norm = 0.0;
  double rev_norm = 0.0;
  double vmt_norm = 0.0;
  double utilization_pct = 0.0;
};

inline const char* kSweepCsvHeader =
    "mu_pax,mu_rev,mu_vmt,price_min,price_mean,price_max,pax_norm,rev_norm,vmt_norm,"
    "utilization_pct,welfare";

// Optimizes every weight vector and tabulates the resulting prices and the
// three welfare terms. Terms are normalized across the sweep so that 1 marks
// the best row: PAX and VMT by min-max scaling (VMT reversed), REV relative
// to its largest value.
inline std::vector<SweepRow> regime_sweep(const Model& m, const std::vector<ObjectiveWeights>& grid,
                                          const SolveConfig& cfg) {
  std::vector<SweepRow> rows;
  const double demand = total_demand(m);
  for (const ObjectiveWeights& w : grid) {
    const SolveOutcome out = solve(m, w, cfg);
    if (!out.found()) throw NoResult();
    Evaluator ev(m, w);
    const SecondStageSolution sol = ev.solve(out.fares);
    SweepRow row;
    row.weights = w;
    row.fares = out.fares;
    row.welfare = sol.welfare;
    const auto& p = sol.prices.price;
    if (!p.empty()) {
      row.price_min = *std::min_element(p.begin(), p.end());
      row.price_max = *std::max_element(p.begin(), p.end());
      double s = 0.0;
      for (double v : p) s += v;
      row.price_mean = s / static_cast<double>(p.size());
    }
    row.utilization_pct = demand > 0.0 ? 100.0 * total_riders(m, sol.shares) / demand : 0.0;
    rows.push_back(row);
  }
  if (rows.empty()) return rows;
  auto minmax = [&](auto get) {
    double lo = get(rows[0]), hi = lo;
    for (const SweepRow& r : rows) {
      lo = std::min(lo, get(r));
      hi = std::max(hi, get(r));
    }
    return std::pair{lo, hi};
  };
  const auto [pax_lo, pax_hi] = minmax([](const SweepRow& r) { return r.welfare.pax_term; });
  const auto [vmt_lo, vmt_hi] = minmax([](const SweepRow& r) { return r.welfare.vmt_term; });
  const auto [rev_lo, rev_hi] = minmax([](const SweepRow& r) { return r.welfare.rev_term; });
  (void)rev_lo;
  for (SweepRow& r : rows) {
    r.pax_norm = pax_hi > pax_lo ? (r.welfare.pax_term - pax_lo) / (pax_hi - pax_lo) : 1.0;
    r.vmt_norm = vmt_hi > vmt_lo ? (vmt_hi - r.welfare.vmt_term) / (vmt_hi - vmt_lo) : 1.0;
    r.rev_norm = rev_hi > 0.0 ? r.welfare.rev_term / rev_hi : 0.0;
  }
  return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = std::string(kSweepCsvHeader) + "\n";
  char buf[512];
  for (const SweepRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.4f,%.9g\n",
                  r.weights.pax, r.weights.rev, r.weights.vmt, r.price_min, r.price_mean,
                  r.price_max, r.pax_norm, r.rev_norm, r.vmt_norm, r.utilization_pct,
                  r.welfare.total);
    out += buf;
  }
  return out;
}

// Parses "pax:rev:vmt;pax:rev:vmt;...".
inline std::vector<ObjectiveWeights> parse_weight_grid(const std::string& text) {
  std::vector<ObjectiveWeights> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    double v[3];
    char tail = 0;
    if (std::sscanf(item.c_str(), "%lf:%lf:%lf%c", &v[0], &v[1], &v[2], &tail) != 3) {
      throw std::invalid_argument("bad weight vector '" + item + "', expected pax:rev:vmt");
    }
    ObjectiveWeights w{v[0], v[1], v[2]};
    if (w.pax < 0 || w.rev < 0 || w.vmt < 0 || w.pax + w.rev + w.vmt <= 0) {
      throw std::invalid_argument("weights must be nonnegative and not all zero: '" + item + "'");
    }
    out.push_back(w);
  }
  if (out.empty()) throw std::invalid_argument("empty weight grid");
  return out;
}

struct BenchRow {
  int trial = 0;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::Bo;
  FareVector fares;
  double welfare = 0.0;
  std::size_t evaluations = 0;
  double seconds = 0.0;
  std::size_t trajectories = 0;
  double surplus_vs_bo_pct = 0.0;
};

struct BenchSummary {
  Algorithm algorithm = Algorithm::Bo;
  double mean_welfare = 0.0;
  double best_welfare = 0.0;
  double worst_welfare = 0.0;
  double mean_surplus_vs_bo_pct = 0.0;
};

struct BenchSuite {
  std::vector<BenchRow> rows;
  std::vector<BenchSummary> summary;
};

// Every algorithm runs once per trial with the trial's seed; surplus is
// measured against BO's result in the same trial.
inline BenchSuite bench_suite(const Model& m, const ObjectiveWeights& w, int trials,
                              const SolveConfig& base, const std::vector<Algorithm>& algos) {
  BenchSuite out;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t seed = base.seed + static_cast<std::uint64_t>(t);
    std::vector<BenchRow> trial_rows;
    double bo_w = std::numeric_limits<double>::quiet_NaN();
    for (Algorithm a : algos) {
      SolveConfig cfg = base;
      cfg.algorithm = a;
      cfg.seed = seed;
      const SolveOutcome o = solve(m, w, cfg);
      BenchRow r;
      r.trial = t;
      r.seed = seed;
      r.algorithm = a;
      r.fares = o.fares;
      r.welfare = o.welfare;
      r.evaluations = o.evaluations;
      r.seconds = o.seconds;
      r.trajectories = o.trajectories;
      if (a == Algorithm::Bo) bo_w = o.welfare;
      trial_rows.push_back(r);
    }
    for (BenchRow& r : trial_rows) {
      r.surplus_vs_bo_pct = std::isfinite(bo_w) && bo_w != 0.0
                                ? 100.0 * (r.welfare - bo_w) / std::fabs(bo_w)
                                : 0.0;
      out.rows.push_back(r);
    }
  }
  for (Algorithm a : algos) {
    BenchSummary s;
    s.algorithm = a;
    s.best_welfare = -std::numeric_limits<double>::infinity();
    s.worst_welfare = std::numeric_limits<double>::infinity();
    int n = 0;
    for (const BenchRow& r : out.rows) {
      if (r.algorithm != a) continue;
      ++n;
      s.mean_welfare += r.welfare;
      s.mean_surplus_vs_bo_pct += r.surplus_vs_bo_pct;
      s.best_welfare = std::max(s.best_welfare, r.welfare);
      s.worst_welfare = std::min(s.worst_welfare, r.welfare);
    }
    if (n > 0) {
      s.mean_welfare /= n;
      s.mean_surplus_vs_bo_pct /= n;
    }
    out.summary.push_back(s);
  }
  return out;
}

inline std::string bench_csv(const BenchSuite& b) {
  std::string out =
      "trial,seed,algorithm,welfare,surplus_vs_bo_pct,evaluations,seconds,trajectories\n";
  char buf[256];
  for (const BenchRow& r : b.rows) {
    std::snprintf(buf, sizeof buf, "%d,%llu,%s,%.9g,%.6f,%zu,%.3f,%zu\n", r.trial,
                  static_cast<unsigned long long>(r.seed), std::string(to_string(r.algorithm)).c_str(),
                  r.welfare, r.surplus_vs_bo_pct, r.evaluations, r.seconds, r.trajectories);
    out += buf;
  }
  return out;
}

struct GapSample {
  FareVector point;
  std::string direction;
  int anchors = 0;
  FareVector sos2_fares;
  double sos2_welfare = 0.0;
  double line_max = 0.0;
  double gap = 0.0;
};

struct GapConfig {
  double money_spacing = 1.0;
  double discount_spacing = 0.1;
  double money_scan = 0.1;
  double discount_scan = 0.01;
  std::uint64_t seed = 0;
};

inline bool is_money_axis(FareAxis a) { return a != FareAxis::Discount; }

inline FareVector point_on_line(const FareVector& base, const LineSpec& line, const FareBounds& b,
                                double pos) {
  FareVector y = base;
  y[line.spanning] = pos;
  if (line.slanted) {
    y[line.other] = std::clamp(line.intercept + line.slope * pos, axis_lower(b, line.other),
                               axis_upper(b, line.other));
  }
  return y;
}

// Best W along the line: a grid scan, then golden-section refinement around
// every grid local maximum.
inline double line_maximum(Evaluator& ev, const FareVector& base, const LineSpec& line,
                           double step) {
  const FareBounds& b = ev.bounds();
  const std::vector<double> grid =
      axis_grid(axis_lower(b, line.spanning), axis_upper(b, line.spanning), step);
  std::vector<double> v(grid.size());
  for (std::size_t q = 0; q < grid.size(); ++q) {
    v[q] = ev.value(point_on_line(base, line, b, grid[q]));
  }
  double best = *std::max_element(v.begin(), v.end());
  auto f = [&](double x) { return ev.value(point_on_line(base, line, b, x)); };
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (std::size_t q = 0; q < grid.size(); ++q) {
    const bool left = q == 0 || v[q] >= v[q - 1];
    const bool right = q + 1 == grid.size() || v[q] >= v[q + 1];
    if (!left || !right) continue;
    double lo = grid[q == 0 ? q : q - 1];
    double hi = grid[q + 1 == grid.size() ? q : q + 1];
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > 1e-9) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = f(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = f(x1);
      }
      best = std::max({best, f1, f2});
    }
  }
  return best;
}

// Compares one SOS2 line search per random (point, direction) against the
// line's brute-force maximum.
inline std::vector<GapSample> sos2_gap_experiment(const Model& m, const ObjectiveWeights& w,
                                                  int lines, const GapConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  const FareBounds& b = m.bounds();
  std::vector<SearchDirection> dirs;
  for (FareAxis a : kFareAxes) dirs.push_back(SearchDirection::single(a));
  for (OperatorKind k : kOperatorKinds) dirs.push_back(SearchDirection::plane(k));
  std::vector<GapSample> out;
  Evaluator ev(m, w);
  for (int n = 0; n < lines; ++n) {
    GapSample g;
    g.point = uniform_fares(b, rng);
    std::uniform_int_distribution<std::size_t> pick(0, dirs.size() - 1);
    const SearchDirection dir = dirs[pick(rng)];
    g.direction = dir.label();
    const FareAxis probe = dir.kind == SearchDirection::Kind::OperatorPlane ? base_axis(dir.op) : dir.axis;
    const double spacing = is_money_axis(probe) ? cfg.money_spacing : cfg.discount_spacing;
    g.anchors = static_cast<int>(
        std::lround((axis_upper(b, probe) - axis_lower(b, probe)) / spacing)) + 1;
    g.anchors = std::max(g.anchors, 2);
    AnchorSet set = generate_anchors(g.point, dir, g.anchors, b, rng);
    for (Anchor& a : set.anchors) a.solution = ev.solution(a.fares);
    const Sos2Result r = sos2_optimize(set, m, w);
    g.sos2_fares = r.fares;
    g.sos2_welfare = ev.value(r.fares);
    const double step = is_money_axis(set.line.spanning) ? cfg.money_scan : cfg.discount_scan;
    g.line_max = line_maximum(ev, g.point, set.line, step);
    g.gap = (g.line_max - g.sos2_welfare) / std::max(1.0, std::fabs(g.line_max));
    out.push_back(g);
    ev.clear_cache();
  }
  return out;
}

}  // namespace alliance
