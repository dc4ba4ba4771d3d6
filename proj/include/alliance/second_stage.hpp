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

#include <cstdint>
#include <random>
#include <vector>

#include "alliance/choice.hpp"
#include "alliance/model.hpp"

namespace alliance {

struct SecondStageSolution {
  FareVector fares;
  ActivationVector activations;
  PriceTable prices;
  ShareTable shares;
  // w[i][j] = p_r * s_ir for the j-th route of type i.
  std::vector<std::vector<double>> linearized_revenue;
  WelfareBreakdown welfare;
  bool exact = true;
};

struct BigMBundle {
  // Indexed like ShareTable: [type][position in the type's route list].
  std::vector<std::vector<double>> m_share;
  std::vector<std::vector<double>> m_rev;
};

struct SecondStageOptions {
  std::size_t component_cap = 20;
  bool heuristic_fallback = false;
  std::uint64_t heuristic_seed = 0;
  int threads = 1;
};

inline const std::vector<Model::Component>& coupling_components(const Model& m) {
  return m.components();
}

// Fills prices, shares, w and welfare for a fixed activation vector.
inline SecondStageSolution evaluate_activation(const Model& m,
                                               const FareVector& y,
                                               ActivationVector x,
                                               const ObjectiveWeights& w) {
  SecondStageSolution sol;
  sol.fares = y;
  sol.activations = std::move(x);
  sol.prices = customer_prices(m, y, sol.activations);
  sol.shares = shares(m, sol.prices);
  sol.linearized_revenue.resize(m.types().size());
  for (std::size_t i = 0; i < m.types().size(); ++i) {
    const Model::TypeData& t = m.types()[i];
    sol.linearized_revenue[i].resize(t.routes.size());
    for (std::size_t j = 0; j < t.routes.size(); ++j) {
      sol.linearized_revenue[i][j] =
          sol.prices.price[t.routes[j]] * sol.shares.share[i][j];
    }
  }
  sol.welfare = welfare(m, y, sol.activations, w);
  return sol;
}

namespace detail {

// Best activation pattern of one component, as a bit mask over the
// component's categories (bit m-1-k is the k-th category, so increasing mask
// order is lexicographic order of x).
inline std::uint64_t best_component_pattern(const Model& m,
                                            const Model::Component& comp,
                                            const std::vector<double>& sigma,
                                            double lambda,
                                            const ObjectiveWeights& w) {
  const std::size_t nc = comp.categories.size();
  std::vector<int> slot(m.categories().size(), -1);
  for (std::size_t k = 0; k < nc; ++k) slot[comp.categories[k]] = static_cast<int>(k);

  // Contribution table of each type over its local patterns.
  struct Local {
    std::vector<int> bits;
    std::vector<double> value;
  };
  std::vector<Local> locals(comp.types.size());
  std::vector<double> p, s;
  for (std::size_t q = 0; q < comp.types.size(); ++q) {
    const Model::TypeData& t = m.types()[comp.types[q]];
    Local& loc = locals[q];
    for (int c : t.categories) loc.bits.push_back(static_cast<int>(nc) - 1 - slot[c]);
    const std::size_t deg = t.categories.size();
    loc.value.resize(std::size_t{1} << deg);
    p.resize(t.routes.size());
    s.resize(t.routes.size());
    for (std::size_t pat = 0; pat < loc.value.size(); ++pat) {
      for (std::size_t j = 0; j < t.routes.size(); ++j) {
        const Model::RouteData& r = m.routes()[t.routes[j]];
        p[j] = sigma[t.routes[j]];
        if (r.category >= 0) {
          const auto pos = std::find(t.categories.begin(), t.categories.end(),
                                     r.category) - t.categories.begin();
          if ((pat >> pos) & 1U) p[j] *= 1.0 - lambda;
        }
      }
      double s0 = 0.0;
      const TypeTerms terms = type_terms(t, p.data(), s.data(), s0);
      loc.value[pat] = t.count * combine(w, terms.pax, terms.rev, terms.vmt);
    }
  }

  const std::uint64_t patterns = std::uint64_t{1} << nc;
  std::uint64_t best_mask = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < patterns; ++mask) {
    double total = 0.0;
    for (const Local& loc : locals) {
      std::size_t pat = 0;
      for (std::size_t b = 0; b < loc.bits.size(); ++b) {
        pat |= static_cast<std::size_t>((mask >> loc.bits[b]) & 1U) << b;
      }
      total += loc.value[pat];
    }
    if (total > best) {
      best = total;
      best_mask = mask;
    }
  }
  return best_mask;
}

}  // namespace detail

inline SecondStageSolution solve_heuristic(const Model& m, const FareVector& y,
                                           std::uint64_t seed,
                                           const ObjectiveWeights& w);

// Exact second stage: enumerates activation patterns independently per
// coupling component. Ties resolve to the lexicographically smallest x.
inline SecondStageSolution solve_exact(const Model& m, const FareVector& y,
                                       const ObjectiveWeights& w,
                                       const SecondStageOptions& opt = {}) {
  const auto& comps = m.components();
  for (const Model::Component& c : comps) {
    if (c.categories.size() > opt.component_cap) {
      if (opt.heuristic_fallback) return solve_heuristic(m, y, opt.heuristic_seed, w);
      throw ComponentTooLarge(c.categories.size(), opt.component_cap);
    }
  }
  const std::vector<double> sigma = base_prices(m, y);
  std::vector<std::uint64_t> masks(comps.size(), 0);
  parallel_for(comps.size(), opt.threads, [&](std::size_t ci) {
    if (!comps[ci].constant) {
      masks[ci] = detail::best_component_pattern(m, comps[ci], sigma,
                                                 y.discount(), w);
    }
  });
  ActivationVector x(m.categories().size(), 0);
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    const auto& cats = comps[ci].categories;
    for (std::size_t k = 0; k < cats.size(); ++k) {
      x[cats[k]] = static_cast<std::uint8_t>((masks[ci] >> (cats.size() - 1 - k)) & 1U);
    }
  }
  return evaluate_activation(m, y, std::move(x), w);
}

inline SecondStageSolution solve_exact(const Model& m, const FareVector& y,
                                       const SecondStageOptions& opt = {}) {
  return solve_exact(m, y, m.weights(), opt);
}

// Exhaustive search over all activation vectors in lexicographic order.
inline SecondStageSolution solve_enumerate(const Model& m, const FareVector& y,
                                           const ObjectiveWeights& w,
                                           std::size_t cap = 20) {
  const std::size_t n = m.categories().size();
  if (n > cap) {
    throw TooManyCategories(std::to_string(n) + " categories exceed the cap of " +
                            std::to_string(cap));
  }
  ActivationVector x(n, 0), best_x(n, 0);
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (std::size_t a = 0; a < n; ++a) {
      x[a] = static_cast<std::uint8_t>((mask >> (n - 1 - a)) & 1U);
    }
    const double v = welfare(m, y, x, w).total;
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  return evaluate_activation(m, y, std::move(best_x), w);
}

inline SecondStageSolution solve_enumerate(const Model& m, const FareVector& y) {
  return solve_enumerate(m, y, m.weights());
}

// Best-improvement single-flip hill climbing from x = 0, x = 1 and five
// seeded random starts.
inline SecondStageSolution solve_heuristic(const Model& m, const FareVector& y,
                                           std::uint64_t seed,
                                           const ObjectiveWeights& w) {
  const std::size_t n = m.categories().size();
  const std::vector<double> sigma = base_prices(m, y);
  std::vector<double> p, s;
  auto type_value = [&](int i, const ActivationVector& x) {
    const Model::TypeData& t = m.types()[i];
    p.resize(t.routes.size());
    s.resize(t.routes.size());
    for (std::size_t j = 0; j < t.routes.size(); ++j) {
      const Model::RouteData& r = m.routes()[t.routes[j]];
      p[j] = sigma[t.routes[j]];
      if (r.category >= 0 && x[r.category]) p[j] *= 1.0 - y.discount();
    }
    double s0 = 0.0;
    const TypeTerms terms = type_terms(t, p.data(), s.data(), s0);
    return t.count * combine(w, terms.pax, terms.rev, terms.vmt);
  };

  std::vector<ActivationVector> starts;
  starts.emplace_back(n, 0);
  starts.emplace_back(n, 1);
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  for (int k = 0; k < 5; ++k) {
    ActivationVector x(n);
    for (auto& b : x) b = coin(rng) ? 1 : 0;
    starts.push_back(std::move(x));
  }

  ActivationVector best_x;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> contrib(m.types().size());
  for (ActivationVector x : starts) {
    for (std::size_t i = 0; i < m.types().size(); ++i) {
      contrib[i] = type_value(static_cast<int>(i), x);
    }
    while (true) {
      double best_gain = 0.0;
      std::size_t best_flip = n;
      for (std::size_t a = 0; a < n; ++a) {
        x[a] ^= 1U;
        double gain = 0.0;
        for (int i : m.categories()[a].types) gain += type_value(i, x) - contrib[i];
        x[a] ^= 1U;
        if (gain > best_gain) {
          best_gain = gain;
          best_flip = a;
        }
      }
      if (best_flip == n) break;
      x[best_flip] ^= 1U;
      for (int i : m.categories()[best_flip].types) {
        contrib[i] = type_value(i, x);
      }
    }
    const double v = welfare(m, y, x, w).total;
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  SecondStageSolution sol = evaluate_activation(m, y, std::move(best_x), w);
  sol.exact = false;
  return sol;
}

inline SecondStageSolution solve_heuristic(const Model& m, const FareVector& y,
                                           std::uint64_t seed) {
  return solve_heuristic(m, y, seed, m.weights());
}

inline BigMBundle big_m(const Model& m, const FareVector& y) {
  BigMBundle b;
  b.m_share.resize(m.types().size());
  b.m_rev.resize(m.types().size());
  for (std::size_t i = 0; i < m.types().size(); ++i) {
    const Model::TypeData& t = m.types()[i];
    for (std::size_t j = 0; j < t.routes.size(); ++j) {
      b.m_share[i].push_back(gamma(m, static_cast<int>(i), static_cast<int>(j), y, false));
      b.m_rev[i].push_back(y.discount() * base_price(m, t.routes[j], y));
    }
  }
  return b;
}

}  // namespace alliance
