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
  const ObjectiveWeights rev{0.0, 1.0, 0.0};

  GameConfig gc;
  gc.seed = 1;
  const IbrResult ne = iterated_best_response(m, OperatorWeights{rev, rev}, gc);
  const ActivationVector none(m.categories().size(), 0);
  const double f_tr = operator_revenue(m, ne.fares, none, OperatorKind::Transit);
  const double f_mod = operator_revenue(m, ne.fares, none, OperatorKind::Mod);

  SolveConfig sc;
  sc.budget = Budget::evaluations(3000);
  const SolveOutcome allied = solve(m, rev, sc);
  const AllocationResult a = allocate(f_tr, f_mod, allied.welfare);
  std::printf("non-cooperative: transit %.2f, MOD %.2f (%d rounds)\n", f_tr, f_mod, ne.rounds);
  std::printf("allied revenue %.2f, surplus %.2f\n", a.f_allied, a.delta);
  std::printf("payments: transit %.2f, MOD %.2f\n", a.phi_transit, a.phi_mod);
}
