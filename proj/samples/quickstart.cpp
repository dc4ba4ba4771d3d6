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
#include <cstdio>

#include "alliance.hpp"

int main() {
  using namespace alliance;
  SyntheticConfig cfg;
  cfg.town_count = 4;
  cfg.tracts_per_town = 2;
  const Model m(generate(cfg).instance);

  const FareVector y = FareVector::make(2.0, 0.2, 3.0, 1.0, 0.3);
  const SecondStageSolution sol = solve_exact(m, y, m.weights());
  std::printf("W at fixed fares: %.2f\n", sol.welfare.total);

  SolveConfig sc;
  sc.budget = Budget::evaluations(2000);
  sc.seed = 7;
  const SolveOutcome out = solve(m, m.weights(), sc);
  std::printf("optimized W: %.2f after %zu evaluations\n", out.welfare, out.evaluations);
  for (FareAxis a : kFareAxes) {
    std::printf("  %-18s %.4f\n", std::string(to_string(a)).c_str(), out.fares[a]);
  }
}
