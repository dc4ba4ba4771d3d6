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

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "alliance.hpp"
#include "oracles.hpp"

using namespace alliance;

namespace {

constexpr double kEquivalenceTol = 1e-12;
constexpr double kExactnessTol = 1e-12;
constexpr double kSurrogateTol = 1e-6;
constexpr double kAnchorTol = 1e-12;
constexpr double kSurrogateGridStep = 1e-4;
constexpr double kMeanGapLimit = 0.02;
constexpr double kGapFloor = -1e-9;
constexpr double kNashTol = 1e-9;
constexpr double kNeGridStep = 0.05;
constexpr double kNeEpsilon = 1e-4;
constexpr double kSeedAgreement = 1e-3;
constexpr double kNormalizationTol = 1e-12;
constexpr double kDerivativeTol = 1e-5;
constexpr double kShiftTol = 1e-12;
constexpr double kSweepViolation = 0.01;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

std::string fixture(const char* name) {
  return std::string(FARE_ALLIANCE_FIXTURES) + "/" + name;
}

Model load_desk() { return Model(load_instance(fixture("desk.json"))); }

double env_double(const char* name, double fallback) {
  const char* v = std::getenv(name);
  return v ? std::atof(v) : fallback;
}

// 1. The two-stage solve equals the best activation vector under direct
// evaluation on a fare grid.
Outcome lemma_equivalence() {
  std::mt19937_64 rng(1);
  Stopwatch watch;
  double worst = 0.0;
  long points = 0;
  for (int n = 0; n < 50; ++n) {
    oracle::RandomSpec spec;
    spec.max_types = 5;
    spec.max_categories = 3;
    const Instance inst = oracle::random_instance(rng, spec);
    const Model m(inst);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double mk_tr = 5.0 * u(rng), mk_mod = 5.0 * u(rng);
    for (int a = 0; a <= 10; ++a) {
      for (int b = 0; b <= 10; ++b) {
        for (int c = 0; c <= 10; ++c) {
          const FareVector y = FareVector::make(a * 1.0, mk_tr, b * 1.0, mk_mod, c * 0.05);
          const double exact = solve_exact(m, y, inst.weights).welfare.total;
          const double brute = oracle::brute_force_max(inst, y, inst.weights);
          worst = std::max(worst, oracle::relative_error(exact, brute));
          ++points;
        }
      }
    }
  }
  const double secs = watch.seconds();
  return {worst <= kEquivalenceTol && secs < 60.0,
          fmt("%ld grid points, max relative error %.3g, %.1f s", points, worst, secs)};
}

// 2. Component-wise exact solve equals full enumeration.
Outcome second_stage_exactness() {
  std::mt19937_64 rng(2);
  Stopwatch watch;
  double worst = 0.0;
  int checks = 0;
  for (int n = 0; n < 200; ++n) {
    oracle::RandomSpec spec;
    spec.min_types = 3;
    spec.max_types = 30;
    spec.max_categories = 12;
    spec.max_routes = 20;
    spec.max_routes_per_type = 4;
    const Instance inst = oracle::random_instance(rng, spec);
    const Model m(inst);
    for (int k = 0; k < 3; ++k) {
      const FareVector y = uniform_fares(m.bounds(), rng);
      const double a = solve_exact(m, y, inst.weights).welfare.total;
      const double b = solve_enumerate(m, y, inst.weights).welfare.total;
      worst = std::max(worst, oracle::relative_error(a, b));
      ++checks;
    }
  }
  const double secs = watch.seconds();
  return {worst <= kExactnessTol && secs < 120.0,
          fmt("%d fare points on 200 instances, max relative error %.3g, %.1f s", checks, worst,
              secs)};
}

// 3. Closed-form segment maximization against a dense grid over the
// interpolation weight.
Outcome surrogate_exactness() {
  std::mt19937_64 rng(3);
  double worst_opt = 0.0, worst_anchor = 0.0;
  for (int n = 0; n < 500; ++n) {
    oracle::RandomSpec spec;
    spec.max_types = 8;
    spec.max_categories = 4;
    const Instance inst = oracle::random_instance(rng, spec);
    const Model m(inst);
    const ObjectiveWeights w = inst.weights;
    const FareVector y = uniform_fares(m.bounds(), rng);
    std::vector<SearchDirection> dirs;
    for (FareAxis a : kFareAxes) dirs.push_back(SearchDirection::single(a));
    for (OperatorKind k : kOperatorKinds) dirs.push_back(SearchDirection::plane(k));
    const SearchDirection dir = dirs[std::uniform_int_distribution<std::size_t>(0, 6)(rng)];
    const int D = std::uniform_int_distribution<int>(2, 12)(rng);
    AnchorSet set = generate_anchors(y, dir, D, m.bounds(), rng);
    for (Anchor& a : set.anchors) {
      a.solution = std::make_shared<const SecondStageSolution>(solve_exact(m, a.fares, w));
    }
    double grid_best = -std::numeric_limits<double>::infinity();
    for (std::size_t d = 0; d + 1 < set.anchors.size(); ++d) {
      const auto& sa = *set.anchors[d].solution;
      const auto& sb = *set.anchors[d + 1].solution;
      worst_anchor = std::max(
          worst_anchor, oracle::relative_error(oracle::interpolated_welfare(m, sa, sb, 0.0, w),
                                               sa.welfare.total));
      worst_anchor = std::max(
          worst_anchor, oracle::relative_error(oracle::interpolated_welfare(m, sa, sb, 1.0, w),
                                               sb.welfare.total));
      const int steps = static_cast<int>(std::lround(1.0 / kSurrogateGridStep));
      for (int q = 0; q <= steps; ++q) {
        grid_best = std::max(grid_best,
                             oracle::interpolated_welfare(m, sa, sb, q * kSurrogateGridStep, w));
      }
    }
    if (set.anchors.size() == 1) grid_best = set.anchors[0].solution->welfare.total;
    const Sos2Result r = sos2_optimize(set, m, w);
    worst_opt = std::max(worst_opt, oracle::relative_error(r.predicted, grid_best));
    if (r.predicted < grid_best - kSurrogateTol * std::max(1.0, std::fabs(grid_best))) {
      worst_opt = std::max(worst_opt, 1.0);
    }
  }
  return {worst_opt <= kSurrogateTol && worst_anchor <= kAnchorTol,
          fmt("500 anchor sets, optimum vs t-grid max rel %.3g, anchor mismatch max rel %.3g",
              worst_opt, worst_anchor)};
}

// Line maximum by dense scan plus golden-section refinement of each local
// peak.
double scan_line(const Model& m, const ObjectiveWeights& w, const FareVector& base,
                 const LineSpec& line, double step) {
  const FareBounds& b = m.bounds();
  auto at = [&](double pos) {
    FareVector y = base;
    y[line.spanning] = pos;
    if (line.slanted) {
      y[line.other] = std::clamp(line.intercept + line.slope * pos, axis_lower(b, line.other),
                                 axis_upper(b, line.other));
    }
    return solve_exact(m, y, w).welfare.total;
  };
  const double lo = axis_lower(b, line.spanning), hi = axis_upper(b, line.spanning);
  const int n = static_cast<int>(std::lround((hi - lo) / step));
  std::vector<double> xs(n + 1), vs(n + 1);
  for (int q = 0; q <= n; ++q) {
    xs[q] = q == n ? hi : lo + q * step;
    vs[q] = at(xs[q]);
  }
  double best = *std::max_element(vs.begin(), vs.end());
  for (int q = 0; q <= n; ++q) {
    if ((q > 0 && vs[q] < vs[q - 1]) || (q < n && vs[q] < vs[q + 1])) continue;
    double a = xs[std::max(q - 1, 0)], c = xs[std::min(q + 1, n)];
    const double g = 0.5 * (3.0 - std::sqrt(5.0));
    double x1 = a + g * (c - a), x2 = c - g * (c - a);
    double f1 = at(x1), f2 = at(x2);
    for (int it = 0; it < 60; ++it) {
      if (f1 >= f2) {
        c = x2;
        x2 = x1;
        f2 = f1;
        x1 = a + g * (c - a);
        f1 = at(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = c - g * (c - a);
        f2 = at(x2);
      }
      best = std::max({best, f1, f2});
    }
  }
  return best;
}

// 4. SOS2 line search against a brute-force line maximum on the desk
// fixture.
Outcome sos2_gap() {
  const Model m = load_desk();
  const ObjectiveWeights w = m.weights();
  std::mt19937_64 rng(4);
  Stopwatch watch;
  std::vector<SearchDirection> dirs;
  for (FareAxis a : kFareAxes) dirs.push_back(SearchDirection::single(a));
  for (OperatorKind k : kOperatorKinds) dirs.push_back(SearchDirection::plane(k));
  double sum = 0.0, lowest = 1e300, highest = -1e300;
  for (int n = 0; n < 100; ++n) {
    const FareVector y = uniform_fares(m.bounds(), rng);
    const SearchDirection dir = dirs[std::uniform_int_distribution<std::size_t>(0, 6)(rng)];
    const bool discount = dir.kind == SearchDirection::Kind::SingleAxis &&
                          dir.axis == FareAxis::Discount;
    const FareAxis probe =
        dir.kind == SearchDirection::Kind::OperatorPlane ? base_axis(dir.op) : dir.axis;
    const double spacing = discount ? 0.1 : 1.0;
    const int D = static_cast<int>(std::lround(
                      (axis_upper(m.bounds(), probe) - axis_lower(m.bounds(), probe)) / spacing)) +
                  1;
    AnchorSet set = generate_anchors(y, dir, D, m.bounds(), rng);
    for (Anchor& a : set.anchors) {
      a.solution = std::make_shared<const SecondStageSolution>(solve_exact(m, a.fares, w));
    }
    const Sos2Result r = sos2_optimize(set, m, w);
    const double got = solve_exact(m, r.fares, w).welfare.total;
    const double step = set.line.spanning == FareAxis::Discount ? 0.01 : 0.1;
    const double best = scan_line(m, w, y, set.line, step);
    const double gap = (best - got) / std::max(1.0, std::fabs(best));
    sum += gap;
    lowest = std::min(lowest, gap);
    highest = std::max(highest, gap);
  }
  const double mean = sum / 100.0;
  const double secs = watch.seconds();
  return {mean <= kMeanGapLimit && lowest >= kGapFloor && secs < 1800.0,
          fmt("mean gap %.4f%%, min %.3g, max %.4f%%, %.1f s", 100.0 * mean, lowest,
              100.0 * highest, secs)};
}

// 5. Accepted welfare never decreases and every trajectory stops on its own.
Outcome monotone_termination() {
  const Model m = load_desk();
  Evaluator ev(m, m.weights());
  int violations = 0, capped = 0, runs = 0, max_passes = 0;
  const Algorithm variants[] = {Algorithm::Sos2Cd, Algorithm::Sos2CdR, Algorithm::Sos2CdMd,
                                Algorithm::Sos2CdMdr};
  for (int n = 0; n < 50; ++n) {
    SolveConfig sc;
    sc.algorithm = variants[n % 4];
    sc.seed = 500 + n;
    DescentConfig dc = descent_config(sc);
    std::mt19937_64 rng(sc.seed);
    ev.clear_cache();
    const DescentResult r = sos2_cd(ev, uniform_fares(m.bounds(), rng), dc, rng);
    ++runs;
    for (std::size_t q = 1; q < r.log.accepted.size(); ++q) {
      if (r.log.accepted[q].welfare < r.log.accepted[q - 1].welfare) ++violations;
    }
    if (r.log.hit_pass_cap || r.log.passes >= dc.max_passes) ++capped;
    max_passes = std::max(max_passes, r.log.passes);
  }
  return {violations == 0 && capped == 0,
          fmt("%d trajectories, %d decreases, %d capped, longest %d passes", runs, violations,
              capped, max_passes)};
}

// 6. Benchmark ordering under a wall-clock budget.
Outcome benchmark_ordering() {
  const Model m = load_desk();
  const double budget = env_double("ALLIANCE_ACCEPT_BUDGET_S", 300.0);
  const int seeds = static_cast<int>(env_double("ALLIANCE_ACCEPT_SEEDS", 10));
  double mdr = 0.0, bo = 0.0, bf = 0.0, bf_best = -1e300;
  for (int s = 0; s < seeds; ++s) {
    SolveConfig sc;
    sc.budget = Budget::seconds(budget);
    sc.seed = 6000 + s;
    sc.algorithm = Algorithm::Sos2CdMdr;
    const double a = solve(m, m.weights(), sc).welfare;
    sc.algorithm = Algorithm::Bo;
    const double b = solve(m, m.weights(), sc).welfare;
    sc.algorithm = Algorithm::BfCd;
    const double c = solve(m, m.weights(), sc).welfare;
    std::printf("  seed %d: sos2cd-mdr %.4f  bo %.4f  bfcd %.4f\n", s, a, b, c);
    std::fflush(stdout);
    mdr += a;
    bo += b;
    bf += c;
    bf_best = std::max(bf_best, c);
  }
  mdr /= seeds;
  bo /= seeds;
  bf /= seeds;
  return {mdr >= bo && mdr >= bf,
          fmt("%.0f s budget, %d seeds: mean sos2cd-mdr %.4f, bo %.4f, bfcd %.4f (bfcd max %.4f)",
              budget, seeds, mdr, bo, bf, bf_best)};
}

// 7. Allocation rule properties on random revenue triples.
Outcome allocation_properties() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Stopwatch watch;
  int participation = 0, efficiency = 0, nash = 0, symmetry = 0, surplus_cases = 0;
  const int n = 100000, grid = 200;
  for (int q = 0; q < n; ++q) {
    const double scale = std::pow(10.0, 4.0 * u(rng));
    const double tr = scale * u(rng), mod = scale * u(rng), allied = 2.0 * scale * u(rng);
    const AllocationResult r = allocate(tr, mod, allied);
    if (r.phi_mod < mod) ++participation;
    if (r.delta < 0.0) continue;
    ++surplus_cases;
    if (std::fabs(r.phi_transit + r.phi_mod - allied) > 1e-12 * std::max(1.0, allied)) ++efficiency;
    const AllocationResult s = allocate(mod, tr, allied);
    if (s.phi_transit != r.phi_mod || s.phi_mod != r.phi_transit) ++symmetry;
    // Grid over [d_k, d_k + delta] per operator; the product grows with
    // a_MOD, so the best feasible a_MOD grid point per a_TR suffices.
    const double h = r.delta / (grid - 1);
    double grid_max = 0.0;
    for (int i = 0; i < grid; ++i) {
      const double gain_tr = i * h;
      const double room = r.delta - gain_tr;
      int j = static_cast<int>(std::floor(room / h + 1e-12));
      j = std::clamp(j, 0, grid - 1);
      while (j > 0 && gain_tr + j * h > r.delta * (1.0 + 1e-15)) --j;
      grid_max = std::max(grid_max, gain_tr * (j * h));
    }
    const double product = (r.phi_transit - tr) * (r.phi_mod - mod);
    if (product < grid_max - kNashTol * std::max(1.0, grid_max)) ++nash;
  }
  const double secs = watch.seconds();
  return {participation == 0 && efficiency == 0 && nash == 0 && symmetry == 0 && secs < 10.0,
          fmt("%d triples (%d with surplus): participation %d, efficiency %d, nash %d, "
              "symmetry %d failures, %.2f s",
              n, surplus_cases, participation, efficiency, nash, symmetry, secs)};
}

// 8. Iterated best response reaches a verified equilibrium, the same one
// from every seed.
Outcome ibr_fixed_point() {
  const Model m = load_desk();
  const ObjectiveWeights transit_weights[] = {{0.0, 1.0, 0.0}, {1.0, 1.0, 0.0}, {0.0, 1.0, 0.05}};
  bool ok = true;
  std::string detail;
  for (const ObjectiveWeights& tw : transit_weights) {
    OperatorWeights ow{tw, {0.0, 1.0, 0.0}};
    std::array<double, 2> lo{1e300, 1e300}, hi{-1e300, -1e300};
    int max_rounds = 0, not_converged = 0, ne_fail = 0;
    double worst_dev = -1e300;
    for (int s = 0; s < 5; ++s) {
      GameConfig gc;
      gc.seed = 80 + s;
      const IbrResult r = iterated_best_response(m, ow, gc);
      max_rounds = std::max(max_rounds, r.rounds);
      if (!r.converged) ++not_converged;
      const NeCheck ne = verify_ne(m, r.fares, ow, kNeGridStep, kNeEpsilon);
      if (!ne.ok) ++ne_fail;
      worst_dev = std::max(worst_dev, ne.worst_deviation);
      for (int k = 0; k < 2; ++k) {
        lo[k] = std::min(lo[k], r.objective[k]);
        hi[k] = std::max(hi[k], r.objective[k]);
      }
    }
    double spread = 0.0;
    for (int k = 0; k < 2; ++k) spread = std::max(spread, (hi[k] - lo[k]) / std::max(1.0, std::fabs(hi[k])));
    const bool row = not_converged == 0 && ne_fail == 0 && spread <= kSeedAgreement;
    ok = ok && row;
    detail += fmt("[mu_TR %g:%g:%g rounds<=%d nonconv %d ne_fail %d dev %.3g spread %.3g] ", tw.pax,
                  tw.rev, tw.vmt, max_rounds, not_converged, ne_fail, worst_dev, spread);
  }
  return {ok, detail};
}

// 9. Logit share numerics.
Outcome mnl_numerics() {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double norm = 0.0, deriv = 0.0, shift = 0.0;
  for (int n = 0; n < 1000; ++n) {
    Model::TypeData t;
    const int k = 1 + static_cast<int>(u(rng) * 5);
    std::vector<double> p(k);
    for (int j = 0; j < k; ++j) {
      t.routes.push_back(j);
      t.utility.push_back(-5.0 * u(rng));
      p[j] = 20.0 * u(rng);
    }
    t.outside_utility = -5.0 * u(rng);
    t.alpha = -0.01 - 0.3 * u(rng);
    std::vector<double> s(k);
    double s0 = 0.0;
    mnl_shares(t, p.data(), s.data(), s0);
    double total = s0;
    for (double v : s) total += v;
    norm = std::max(norm, std::fabs(total - 1.0));

    const int j = static_cast<int>(u(rng) * k);
    const double h = 1e-6;
    std::vector<double> pp = p, pm = p, sp(k), sm(k);
    pp[j] += h;
    pm[j] -= h;
    double d0 = 0.0;
    mnl_shares(t, pp.data(), sp.data(), d0);
    mnl_shares(t, pm.data(), sm.data(), d0);
    const double fd = (sp[j] - sm[j]) / (2.0 * h);
    const double analytic = t.alpha * s[j] * (1.0 - s[j]);
    deriv = std::max(deriv, std::fabs(fd - analytic) / std::max(std::fabs(analytic), 1e-300));

    Model::TypeData shifted = t;
    const double c = 50.0 * (u(rng) - 0.5);
    shifted.outside_utility += c;
    for (double& v : shifted.utility) v += c;
    std::vector<double> ss(k);
    double ss0 = 0.0;
    mnl_shares(shifted, p.data(), ss.data(), ss0);
    shift = std::max(shift, std::fabs(ss0 - s0));
    for (int q = 0; q < k; ++q) shift = std::max(shift, std::fabs(ss[q] - s[q]));
  }
  return {norm <= kNormalizationTol && deriv <= kDerivativeTol && shift <= kShiftTol,
          fmt("1000 draws: normalization %.3g, derivative rel %.3g, shift %.3g", norm, deriv,
              shift)};
}

// 10. Regime sweep trends on the desk fixture.
Outcome regime_trends() {
  const Model m = load_desk();
  SolveConfig sc;
  sc.algorithm = Algorithm::Sos2CdMdr;
  sc.budget = Budget::evaluations(20000);
  sc.seed = 10;
  const auto corner = regime_sweep(m, {{1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}}, sc);
  bool corners_ok = true;
  for (const SweepRow& r : corner) {
    for (FareAxis a : {FareAxis::TransitBase, FareAxis::TransitMarkup, FareAxis::ModBase,
                       FareAxis::ModMarkup}) {
      if (r.fares[a] != axis_lower(m.bounds(), a)) corners_ok = false;
    }
    if (r.price_max != 0.0 && axis_lower(m.bounds(), FareAxis::TransitBase) == 0.0 &&
        axis_lower(m.bounds(), FareAxis::ModBase) == 0.0 &&
        axis_lower(m.bounds(), FareAxis::TransitMarkup) == 0.0 &&
        axis_lower(m.bounds(), FareAxis::ModMarkup) == 0.0) {
      corners_ok = false;
    }
  }
  std::vector<ObjectiveWeights> grid;
  for (double rev : {0.0, 0.25, 0.5, 0.75, 1.0}) grid.push_back({1.0, rev, 0.0});
  const auto rows = regime_sweep(m, grid, sc);
  int price_viol = 0, util_viol = 0;
  double price_mag = 0.0, util_mag = 0.0;
  std::string series;
  for (std::size_t q = 0; q < rows.size(); ++q) {
    series += fmt("(%.2f: $%.2f, %.1f%%) ", rows[q].weights.rev, rows[q].price_mean,
                  rows[q].utilization_pct);
    if (q == 0) continue;
    const double dp = rows[q - 1].price_mean - rows[q].price_mean;
    if (dp > 0.0) {
      ++price_viol;
      price_mag = std::max(price_mag, dp / std::max(1e-12, rows[q - 1].price_mean));
    }
    const double du = rows[q].utilization_pct - rows[q - 1].utilization_pct;
    if (du > 0.0) {
      ++util_viol;
      util_mag = std::max(util_mag, du / std::max(1e-12, rows[q - 1].utilization_pct));
    }
  }
  const bool trend_ok = price_viol <= 1 && util_viol <= 1 && price_mag <= kSweepViolation &&
                        util_mag <= kSweepViolation;
  return {corners_ok && trend_ok,
          fmt("lower-bound corners %s; %s; price violations %d (%.3g), utilization violations %d "
              "(%.3g)",
              corners_ok ? "ok" : "missed", series.c_str(), price_viol, price_mag, util_viol,
              util_mag)};
}

// 11. Income-aware fares favor lower-income towns.
Outcome income_awareness() {
  SyntheticConfig cfg = load_synthetic_config(fixture("configs/desk.json"));
  SyntheticConfig aware_cfg = cfg;
  const int T = cfg.town_count;
  aware_cfg.income_ratios.resize(T);
  std::vector<double> ratios(T);
  for (int t = 0; t < T; ++t) ratios[t] = 0.45 + (1.72 - 0.45) * t / (T - 1);
  std::mt19937_64 shuffle_rng(11);
  std::shuffle(ratios.begin(), ratios.end(), shuffle_rng);
  aware_cfg.income_ratios = ratios;
  const Model agnostic(generate(cfg).instance);
  const Model aware(generate(aware_cfg).instance);
  const ObjectiveWeights w{1.0, 1.0, 0.0};
  SolveConfig sc;
  sc.algorithm = Algorithm::Sos2CdMdr;
  sc.budget = Budget::evaluations(20000);
  sc.seed = 11;
  const FareVector y_agn = solve(agnostic, w, sc).fares;
  const FareVector y_aw = solve(aware, w, sc).fares;
  const auto r_agn = town_ridership(aware, solve_exact(aware, y_agn, w).shares);
  const auto r_aw = town_ridership(aware, solve_exact(aware, y_aw, w).shares);
  double low = 0.0, high = 0.0;
  int n_low = 0, n_high = 0;
  for (std::size_t q = 0; q < r_aw.size(); ++q) {
    const int town = r_aw[q].id;
    const double ratio = *aware.instance().towns[town].income_ratio;
    const double inc = (r_aw[q].riders - r_agn[q].riders) / r_agn[q].riders;
    if (ratio < 1.0) {
      low += inc;
      ++n_low;
    } else {
      high += inc;
      ++n_high;
    }
  }
  low /= std::max(1, n_low);
  high /= std::max(1, n_high);
  return {low > high,
          fmt("mean ridership change: below-mean-income towns %+.3f%% (%d), above-mean %+.3f%% (%d)",
              100.0 * low, n_low, 100.0 * high, n_high)};
}

// 12. Yen's algorithm against exhaustive enumeration.
Outcome yen_correctness() {
  std::mt19937_64 rng(12);
  int mismatches = 0, graphs = 0;
  for (int n = 0; n < 1000; ++n) {
    const bool integer = n % 2 == 0;
    const oracle::SmallGraph sg = oracle::random_graph(rng, 10, 0.35, integer);
    RoutingGraph g;
    for (int v = 0; v < sg.nodes; ++v) g.add_node("n" + std::to_string(v));
    for (const auto& e : sg.edges) g.add_edge(e.from, e.to, e.cost, EdgeKind::Walk);
    const int s = 0, t = sg.nodes - 1;
    const int k = std::uniform_int_distribution<int>(1, 12)(rng);
    const auto all = oracle::all_simple_paths(sg, s, t);
    ++graphs;
    if (all.empty()) {
      bool threw = false;
      try {
        yen_k_shortest(g, s, t, k);
      } catch (const NoPath&) {
        threw = true;
      }
      if (!threw) ++mismatches;
      continue;
    }
    const auto got = yen_k_shortest(g, s, t, k);
    const std::size_t want = std::min<std::size_t>(k, all.size());
    bool same = got.size() == want;
    for (std::size_t q = 0; same && q < want; ++q) {
      same = got[q].nodes == all[q].nodes && got[q].edges == all[q].edges &&
             got[q].cost == all[q].cost;
    }
    if (!same) ++mismatches;
  }
  return {mismatches == 0, fmt("%d graphs, %d mismatches", graphs, mismatches)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "two-stage equivalence", lemma_equivalence},
      {2, "second-stage exactness", second_stage_exactness},
      {3, "SOS2 surrogate exactness", surrogate_exactness},
      {4, "SOS2 line-search gap", sos2_gap},
      {5, "monotone acceptance and termination", monotone_termination},
      {6, "benchmark ordering", benchmark_ordering},
      {7, "allocation properties", allocation_properties},
      {8, "iterated best response fixed point", ibr_fixed_point},
      {9, "MNL numerics", mnl_numerics},
      {10, "regime sweep trends", regime_trends},
      {11, "income-aware ridership", income_awareness},
      {12, "Yen correctness", yen_correctness},
  };
  std::vector<int> wanted;
  for (int a = 1; a < argc; ++a) wanted.push_back(std::atoi(argv[a]));
  int failures = 0;
  for (const Criterion& c : all) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[criterion %d] %s %s: %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
