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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "test_support.hpp"

namespace {

using namespace alliance;
using namespace support;

Model tiny_model() {
  return Model(load_instance(std::string(FARE_ALLIANCE_FIXTURES) + "/tiny.json"));
}

void fill(AnchorSet& set, Evaluator& ev) {
  for (Anchor& a : set.anchors) a.solution = ev.solution(a.fares);
}

TEST(Anchors, EvenSpacingOnDiscountAxis) {
  const Model m = tiny_model();
  std::mt19937_64 rng(1);
  FareVector y = FareVector::make(1, 1, 1, 1, 0.23);
  const AnchorSet set =
      generate_anchors(y, SearchDirection::single(FareAxis::Discount), 6, m.bounds(), rng);
  std::vector<double> got;
  for (const Anchor& a : set.anchors) got.push_back(a.fares[FareAxis::Discount]);
  const std::vector<double> want = {0, 0.1, 0.2, 0.23, 0.3, 0.4, 0.5};
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t k = 0; k < want.size(); ++k) EXPECT_NEAR(got[k], want[k], 1e-12);
  EXPECT_TRUE(set.anchors[set.current_index].current);
  EXPECT_EQ(set.anchors[set.current_index].fares, y);
}

TEST(Anchors, CurrentOnGridIsNotDuplicated) {
  const Model m = tiny_model();
  std::mt19937_64 rng(1);
  const AnchorSet set = generate_anchors(FareVector::make(1, 1, 1, 1, 0.2),
                                         SearchDirection::single(FareAxis::Discount), 6,
                                         m.bounds(), rng);
  EXPECT_EQ(set.anchors.size(), 6u);
}

TEST(Anchors, SlopeRangeAtLowerCorner) {
  const SlopeRange r = slope_range(0.0, 0.0, 10.0, 2.0, 0.0, 5.0);
  EXPECT_DOUBLE_EQ(r.min, (0.0 - 2.0) / 10.0);
  EXPECT_DOUBLE_EQ(r.max, (5.0 - 2.0) / 10.0);
}

TEST(Anchors, PlaneAnchorsStayInBounds) {
  const FareBounds b;
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> pick(0, 9);
  for (int n = 0; n < 10000; ++n) {
    FareVector y = uniform_fares(b, rng);
    const int corner = pick(rng);
    if (corner == 0) y[FareAxis::TransitBase] = b.base_min;
    if (corner == 1) y[FareAxis::ModMarkup] = b.markup_max;
    const OperatorKind k = rng() & 1U ? OperatorKind::Mod : OperatorKind::Transit;
    const AnchorSet set = generate_anchors(y, SearchDirection::plane(k), 11, b, rng);
    bool has_current = false;
    for (const Anchor& a : set.anchors) {
      ASSERT_TRUE(within_bounds(b, a.fares, 1e-9));
      has_current |= a.fares == y;
    }
    EXPECT_TRUE(has_current);
  }
}

TEST(Sos2Optimize, FlatLineReturnsFirstAnchor) {
  Instance inst = empty_instance();
  inst.routes = {mod_route(1, 2.0)};
  inst.passenger_types = {type(1, 1.0, {1}, {0.0}, 0.0, -0.1)};
  const Model m(inst);
  Evaluator ev(m);
  std::mt19937_64 rng(2);
  AnchorSet set = generate_anchors(FareVector::make(3, 1, 2, 1, 0.1),
                                   SearchDirection::single(FareAxis::TransitMarkup), 5,
                                   m.bounds(), rng);
  fill(set, ev);
  const Sos2Result r = sos2_optimize(set, m, ev.weights());
  EXPECT_EQ(r.fares, set.anchors.front().fares);
}

TEST(Sos2Optimize, LinearSurrogatePicksAnAnchor) {
  const Model m = tiny_model();
  Evaluator ev(m, {1, 0, 0.02});
  std::mt19937_64 rng(3);
  for (int n = 0; n < 50; ++n) {
    const OperatorKind k = n % 2 ? OperatorKind::Mod : OperatorKind::Transit;
    AnchorSet set = generate_anchors(uniform_fares(m.bounds(), rng), SearchDirection::plane(k),
                                     11, m.bounds(), rng);
    fill(set, ev);
    const Sos2Result r = sos2_optimize(set, m, ev.weights());
    EXPECT_TRUE(r.t == 0.0 || r.t == 1.0);
  }
}

TEST(Sos2Optimize, MatchesDenseGridOverSegments) {
  std::mt19937_64 rng(41);
  for (int n = 0; n < 40; ++n) {
    const Model m(oracle::random_instance(rng));
    const ObjectiveWeights w = oracle::random_weights(rng);
    Evaluator ev(m, w);
    const FareAxis axis = kFareAxes[n % kFareDims];
    AnchorSet set = generate_anchors(uniform_fares(m.bounds(), rng),
                                     n % 3 == 0 ? SearchDirection::plane(OperatorKind::Mod)
                                                : SearchDirection::single(axis),
                                     6, m.bounds(), rng);
    fill(set, ev);
    const Sos2Result r = sos2_optimize(set, m, w);
    double grid = -std::numeric_limits<double>::infinity();
    for (std::size_t d = 0; d + 1 < set.anchors.size(); ++d) {
      for (int q = 0; q <= 10000; ++q) {
        grid = std::max(grid, oracle::interpolated_welfare(m, *set.anchors[d].solution,
                                                           *set.anchors[d + 1].solution,
                                                           q * 1e-4, w));
      }
    }
    EXPECT_GE(r.predicted, grid - 1e-9 * std::max(1.0, std::abs(grid)));
    EXPECT_LE(oracle::relative_error(r.predicted, grid), 1e-6);
  }
}

TEST(Directions, DeclaredOrderAndCounts) {
  std::mt19937_64 rng(0);
  const auto axes = search_directions(false, false, rng);
  ASSERT_EQ(axes.size(), 5u);
  for (int k = 0; k < kFareDims; ++k) EXPECT_EQ(axes[k], SearchDirection::single(kFareAxes[k]));
  const auto md = search_directions(false, true, rng);
  ASSERT_EQ(md.size(), 3u);
  EXPECT_EQ(md[0], SearchDirection::plane(OperatorKind::Transit));
  EXPECT_EQ(md[1], SearchDirection::plane(OperatorKind::Mod));
  EXPECT_EQ(md[2], SearchDirection::single(FareAxis::Discount));
}

TEST(Directions, SeededShuffleIsDeterministic) {
  std::mt19937_64 a(5), b(5);
  for (int n = 0; n < 10; ++n) {
    EXPECT_EQ(search_directions(true, false, a), search_directions(true, false, b));
  }
}

TEST(Sos2Cd, OptimalStartIsKept) {
  Instance inst = empty_instance();
  inst.routes = {mod_route(1, 2.0), transit_route(2, 3.0)};
  add_category(inst, 1, {1});
  inst.passenger_types = {type(1, 2.0, {1, 2}, {-0.2, -0.4}, 0.0, -0.1)};
  inst.weights = {1, 0, 0};
  const Model m(inst);
  Evaluator ev(m);
  std::mt19937_64 rng(6);
  FareVector y0 = lower_corner(m.bounds());
  y0[FareAxis::Discount] = m.bounds().discount_max;
  DescentConfig cfg;
  const DescentResult r = sos2_cd(ev, y0, cfg, rng);
  EXPECT_EQ(r.fares, y0);
  EXPECT_EQ(r.log.passes, 1);
  EXPECT_EQ(r.log.accepted.size(), 1u);
}

TEST(Sos2Cd, AcceptedWelfareIsNondecreasing) {
  const Model m = tiny_model();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Evaluator ev(m);
    std::mt19937_64 rng(seed);
    DescentConfig cfg;
    cfg.random = seed % 2 == 0;
    cfg.multidim = seed % 3 != 0;
    const DescentResult r = sos2_cd(ev, uniform_fares(m.bounds(), rng), cfg, rng);
    for (std::size_t k = 1; k < r.log.accepted.size(); ++k) {
      EXPECT_GT(r.log.accepted[k].welfare, r.log.accepted[k - 1].welfare);
    }
    EXPECT_EQ(r.welfare, r.log.accepted.back().welfare);
  }
}

Instance single_category_desk() {
  Instance inst = load_instance(std::string(FARE_ALLIANCE_FIXTURES) + "/desk.json");
  DiscountCategory all{0, {}, "all"};
  for (Route& r : inst.routes) {
    if (r.category) {
      r.category = 0;
      all.routes.push_back(r.id);
    }
  }
  inst.categories = {all};
  return inst;
}

TEST(Sos2Cd, CloseToBruteForceFromSameStart) {
  const Model m(single_category_desk());
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    std::mt19937_64 rng(seed);
    const FareVector y0 = uniform_fares(m.bounds(), rng);
    Evaluator a(m), b(m);
    DescentConfig cfg;
    const DescentResult s = sos2_cd(a, y0, cfg, rng);
    const DescentResult f = bf_cd(b, y0, cfg);
    EXPECT_GE(s.welfare, f.welfare - 0.005 * std::abs(f.welfare));
  }
}

TEST(BfCd, NoWorseThanSos2CdOnTinyInstance) {
  const Model m = tiny_model();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    std::mt19937_64 rng(seed);
    const FareVector y0 = uniform_fares(m.bounds(), rng);
    Evaluator a(m), b(m);
    const DescentResult s = sos2_cd(a, y0, DescentConfig{}, rng);
    const DescentResult f = bf_cd(b, y0, DescentConfig{});
    EXPECT_GE(f.welfare, s.welfare - 0.005 * std::abs(s.welfare));
  }
}

TEST(BfCd, ThreePointAxisPicksMiddle) {
  Instance inst = empty_instance();
  inst.routes = {mod_route(1, 0.0)};
  inst.passenger_types = {type(1, 1.0, {1}, {0.0}, 0.0, -1.0)};
  inst.bounds.base_max = 2.0;
  const Model m(inst);
  Evaluator ev(m);
  DescentConfig cfg;
  cfg.bf_money_step = 1.0;
  cfg.free_axes = {false, false, true, false, false};
  const DescentResult r = bf_cd(ev, lower_corner(m.bounds()), cfg);
  EXPECT_EQ(r.fares[FareAxis::ModBase], 1.0);
}

TEST(BfCd, DeadlineReturnsBestSoFar) {
  const Model m = tiny_model();
  Evaluator ev(m);
  const BudgetClock clock(Budget::Unit::Evaluations, ev);
  std::mt19937_64 rng(3);
  const FareVector y0 = uniform_fares(m.bounds(), rng);
  const DescentResult r = bf_cd(ev, y0, DescentConfig{}, Deadline{&clock, 300});
  EXPECT_TRUE(r.log.truncated);
  EXPECT_GE(r.welfare, ev.value(y0));
  EXPECT_LE(ev.evaluations(), 302u);
}

TEST(TimedSos2Cd, SeededRunsAreReproducible) {
  const Model m = tiny_model();
  TimedConfig cfg;
  cfg.budget = Budget::evaluations(3000);
  cfg.warm_start_budget = Budget::evaluations(50);
  cfg.descent.random = cfg.descent.multidim = true;
  cfg.seed = 7;
  Evaluator a(m), b(m);
  const TimedResult ra = timed_sos2_cd(a, cfg);
  const TimedResult rb = timed_sos2_cd(b, cfg);
  EXPECT_EQ(ra.fares, rb.fares);
  EXPECT_EQ(ra.welfare, rb.welfare);
  EXPECT_EQ(ra.trajectories, rb.trajectories);
}

TEST(TimedSos2Cd, WarmStartsAreConsumedBestFirst) {
  const Model m = tiny_model();
  TimedConfig cfg;
  cfg.budget = Budget::evaluations(4000);
  cfg.warm_start_budget = Budget::evaluations(40);
  cfg.seed = 3;
  Evaluator ev(m);
  const TimedResult r = timed_sos2_cd(ev, cfg);
  ASSERT_GE(r.consumed_warm_starts.size(), 2u);
  for (std::size_t k = 1; k < r.consumed_warm_starts.size(); ++k) {
    EXPECT_GE(r.consumed_warm_starts[k - 1].welfare, r.consumed_warm_starts[k].welfare);
  }
}

TEST(TimedSos2Cd, NoWarmStartsMeansUniformStarts) {
  const Model m = tiny_model();
  TimedConfig cfg;
  cfg.budget = Budget::evaluations(2000);
  Evaluator ev(m);
  const TimedResult r = timed_sos2_cd(ev, cfg);
  EXPECT_EQ(r.warm_starts, 0u);
  EXPECT_EQ(r.warm_starts_used, 0u);
  EXPECT_GT(r.trajectories, 0u);
}

std::vector<double> gauss_solve(std::vector<std::vector<double>> A, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    }
    std::swap(A[c], A[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = A[r][c] / A[c][c];
      for (std::size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= A[r][k] * x[k];
    x[r] = s / A[r][r];
  }
  return x;
}

TEST(Gp, SingleObservationIsInterpolated) {
  const GaussianProcess gp = gp_fit({{0.3, 0.7}}, {42.0});
  EXPECT_NEAR(gp.predict({0.3, 0.7}).mean, 42.0, 1e-6 * 42.0);
}

TEST(Gp, DuplicatePointsFit) {
  EXPECT_NO_THROW(gp_fit({{0.5, 0.5}, {0.5, 0.5}, {0.1, 0.9}}, {1.0, 1.0, 3.0}));
}

TEST(Gp, PosteriorMatchesDenseSolve) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> X(12, std::vector<double>(3));
  std::vector<double> y(12);
  for (std::size_t i = 0; i < X.size(); ++i) {
    for (double& v : X[i]) v = u(rng);
    y[i] = 100.0 * std::sin(3 * X[i][0]) + 20.0 * X[i][1] * X[i][2];
  }
  GpHyper h;
  h.lengthscale = 0.4;
  const GaussianProcess gp = gp_fit(X, y, h);
  const std::size_t n = X.size();
  std::vector<std::vector<double>> K(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) K[i][j] = gp.kernel(X[i], X[j]);
    K[i][i] += gp.jitter();
  }
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = (y[i] - gp.value_mean()) / gp.value_scale();
  const std::vector<double> alpha = gauss_solve(K, ys);
  for (int q = 0; q < 20; ++q) {
    std::vector<double> x(3);
    for (double& v : x) v = u(rng);
    std::vector<double> k(n);
    for (std::size_t i = 0; i < n; ++i) k[i] = gp.kernel(X[i], x);
    const std::vector<double> v = gauss_solve(K, k);
    double mean = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mean += k[i] * alpha[i];
      quad += k[i] * v[i];
    }
    const GpPrediction p = gp.predict_standardized(x);
    EXPECT_NEAR(p.mean, mean, 1e-8);
    EXPECT_NEAR(p.variance, std::max(0.0, gp.hyper().signal_variance - quad), 1e-8);
    EXPECT_GE(p.variance, 0.0);
  }
}

TEST(Ucb, SuggestionsStayInUnitCube) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> X(8, std::vector<double>(5));
  std::vector<double> y(8);
  for (std::size_t i = 0; i < X.size(); ++i) {
    for (double& v : X[i]) v = u(rng);
    y[i] = X[i][0] - X[i][3];
  }
  const GaussianProcess gp = gp_fit(X, y);
  for (double kappa : {0.0, 2.0, 10.0}) {
    UcbOptions opt;
    opt.kappa = kappa;
    for (int n = 0; n < 10; ++n) {
      for (double v : ucb_suggest(gp, opt, rng)) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
      }
    }
  }
}

double concave5(const std::vector<double>& x) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double c = 0.2 + 0.15 * static_cast<double>(k);
    s -= (x[k] - c) * (x[k] - c);
  }
  return s;
}

TEST(BayesOpt, BeatsRandomSearchOnConcaveFunction) {
  int wins = 0;
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    BoOptions opt;
    opt.seed = rep;
    const BoResult bo = bo_maximize(concave5, 5, opt, 50);
    std::mt19937_64 rng(1000 + rep);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double best = -std::numeric_limits<double>::infinity();
    for (int e = 0; e < 50; ++e) {
      std::vector<double> x(5);
      for (double& v : x) v = u(rng);
      best = std::max(best, concave5(x));
    }
    wins += bo.best_value >= best ? 1 : 0;
  }
  EXPECT_GE(wins, 16);
}

TEST(BayesOpt, HistoryTracksEvaluations) {
  const Model m = tiny_model();
  Evaluator ev(m);
  const BoFareResult r = bo_loop(ev, Budget::evaluations(25), BoOptions{});
  EXPECT_EQ(r.history.size(), r.evaluations);
  EXPECT_EQ(r.evaluations, 25u);
  for (std::size_t k = 1; k < r.history.size(); ++k) {
    EXPECT_GE(r.history[k].best, r.history[k - 1].best);
  }
}

TEST(BayesOpt, SingleEvaluationBudget) {
  const Model m = tiny_model();
  Evaluator ev(m);
  const BoFareResult r = bo_loop(ev, Budget::evaluations(1), BoOptions{});
  ASSERT_EQ(r.history.size(), 1u);
  EXPECT_EQ(r.welfare, r.history[0].value);
  EXPECT_EQ(r.welfare, ev.value(r.fares));
}

}  // namespace
