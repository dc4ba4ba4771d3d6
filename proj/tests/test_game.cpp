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

#include <random>

#include "oracles.hpp"
#include "test_support.hpp"

namespace {

using namespace alliance;
using namespace support;

Model tiny_model() {
  return Model(load_instance(std::string(FARE_ALLIANCE_FIXTURES) + "/tiny.json"));
}

GameConfig quick_config(std::uint64_t seed) {
  GameConfig cfg;
  cfg.seed = seed;
  cfg.starts = 2;
  return cfg;
}

TEST(OperatorObjective, ZeroFaresGiveZeroRevenue) {
  const Model m = tiny_model();
  EXPECT_EQ(operator_objective(m, FareVector{}, {0, 1, 0}), 0.0);
}

TEST(OperatorObjective, EqualsWelfareWithoutDiscounts) {
  const Model m = tiny_model();
  std::mt19937_64 rng(2);
  for (int n = 0; n < 20; ++n) {
    const FareVector y = uniform_fares(m.bounds(), rng);
    EXPECT_EQ(operator_objective(m, y, m.weights()), welfare(m, y, zeros(m)).total);
  }
}

TEST(OperatorObjective, OwnFareChangeMatchesDirectEvaluation) {
  std::mt19937_64 rng(13);
  for (int n = 0; n < 50; ++n) {
    const Instance inst = oracle::random_instance(rng);
    const Model m(inst);
    const ObjectiveWeights w = oracle::random_weights(rng);
    std::map<int, int> none;
    for (const auto& c : inst.categories) none[c.id] = 0;
    FareVector y = uniform_fares(m.bounds(), rng);
    y[FareAxis::TransitBase] = 0.0;
    FareVector raised = y;
    raised[FareAxis::TransitBase] = 0.5;
    const double got = operator_objective(m, raised, w) - operator_objective(m, y, w);
    const double want =
        oracle::direct_welfare(inst, raised, none, w) - oracle::direct_welfare(inst, y, none, w);
    EXPECT_NEAR(got, want, 1e-9 * std::max(1.0, std::abs(want)));
  }
}

TEST(BestResponse, PassengerObjectiveGoesToLowerCorner) {
  const Model m = tiny_model();
  std::mt19937_64 rng(1);
  const FareVector start = FareVector::make(5, 2, 6, 3, 0);
  for (OperatorKind k : kOperatorKinds) {
    const BestResponse br = best_response(m, k, start, {1, 0, 0}, quick_config(1), rng);
    EXPECT_EQ(br.fares.base(k), m.bounds().base_min);
    EXPECT_EQ(br.fares.markup(k), m.bounds().markup_min);
  }
}

TEST(BestResponse, NoWorseThanGridAndIdempotent) {
  const Model m = tiny_model();
  std::mt19937_64 rng(5);
  const FareBounds& b = m.bounds();
  const ObjectiveWeights wk{0, 1, 0};
  for (OperatorKind k : kOperatorKinds) {
    const FareVector start = FareVector::make(3, 1, 4, 2, 0);
    const BestResponse br = best_response(m, k, start, wk, quick_config(2), rng);
    double grid = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 20; ++i) {
      for (int j = 0; j <= 20; ++j) {
        FareVector y = start;
        y[base_axis(k)] = b.base_min + (b.base_max - b.base_min) * i / 20.0;
        y[markup_axis(k)] = b.markup_min + (b.markup_max - b.markup_min) * j / 20.0;
        grid = std::max(grid, operator_objective(m, y, wk));
      }
    }
    EXPECT_GE(br.objective, grid - 1e-6);
    const BestResponse again = best_response(m, k, br.fares, wk, quick_config(3), rng);
    EXPECT_NEAR(again.objective, br.objective, 1e-6 * std::abs(br.objective));
  }
}

TEST(Ibr, PriceMinimizersReachLowerCorners) {
  const Model m = tiny_model();
  OperatorWeights w;
  w.transit = {1, 0, 0};
  w.mod = {1, 0, 0};
  const IbrResult r = iterated_best_response(m, w, quick_config(4));
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.rounds, 2);
  for (OperatorKind k : kOperatorKinds) {
    EXPECT_EQ(r.fares.base(k), m.bounds().base_min);
    EXPECT_EQ(r.fares.markup(k), m.bounds().markup_min);
  }
}

TEST(Ibr, EquilibriumPassesVerifierAndPerturbationIsDetected) {
  const Model m = tiny_model();
  OperatorWeights w;
  w.transit = {0, 1, 0};
  const IbrResult r = iterated_best_response(m, w, quick_config(6));
  ASSERT_TRUE(r.converged);
  EXPECT_TRUE(verify_ne(m, r.fares, w, 0.05, 1e-4).ok);
  FareVector moved = r.fares;
  const double target = moved[FareAxis::TransitBase] + 10 * 0.05 <= m.bounds().base_max
                            ? moved[FareAxis::TransitBase] + 10 * 0.05
                            : moved[FareAxis::TransitBase] - 10 * 0.05;
  moved[FareAxis::TransitBase] = target;
  const NeCheck c = verify_ne(m, moved, w, 0.05, 1e-4);
  const double flat = operator_objective(m, r.fares, w.transit) -
                      operator_objective(m, moved, w.transit);
  EXPECT_TRUE(!c.ok || flat <= 1e-4);
  if (!c.ok) {
    EXPECT_GT(c.worst_deviation, 0.0);
  }
}

TEST(Ibr, PriceInsensitivePassengersGiveFlatLandscape) {
  Instance inst = empty_instance();
  inst.routes = {transit_route(1, 2.0), mod_route(2, 3.0), hybrid_route(3, 1.0, 1.0)};
  inst.passenger_types = {type(1, 5.0, {1, 2, 3}, {-0.2, -0.1, -0.4}, 0.0, 0.0)};
  const Model m(inst);
  OperatorWeights w;
  w.transit = {1, 0, 0.1};
  w.mod = {1, 0, 0};
  std::mt19937_64 rng(8);
  for (int n = 0; n < 5; ++n) {
    EXPECT_TRUE(verify_ne(m, uniform_fares(m.bounds(), rng), w, 0.5, 1e-9).ok);
  }
}

TEST(Allocate, SurplusIsSharedEqually) {
  const AllocationResult r = allocate(100, 50, 170);
  EXPECT_DOUBLE_EQ(r.delta, 20);
  EXPECT_DOUBLE_EQ(r.phi_transit, 110);
  EXPECT_DOUBLE_EQ(r.phi_mod, 60);
}

TEST(Allocate, DeficitIsBorneByTransit) {
  const AllocationResult r = allocate(100, 50, 140);
  EXPECT_DOUBLE_EQ(r.delta, -10);
  EXPECT_DOUBLE_EQ(r.phi_mod, 50);
  EXPECT_DOUBLE_EQ(r.phi_transit, 90);
}

TEST(Allocate, ZerosStayZero) {
  const AllocationResult r = allocate(0, 0, 0);
  EXPECT_EQ(r.delta, 0.0);
  EXPECT_EQ(r.phi_transit, 0.0);
  EXPECT_EQ(r.phi_mod, 0.0);
}

}  // namespace
