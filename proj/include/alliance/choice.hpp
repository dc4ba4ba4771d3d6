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

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "alliance/model.hpp"

namespace alliance {

using ActivationVector = std::vector<std::uint8_t>;

struct PriceTable {
  std::vector<double> price;
};

struct ShareTable {
  // share[i][j] is the share of the j-th route in type i's route list.
  std::vector<std::vector<double>> share;
  std::vector<double> outside_share;
};

struct WelfareBreakdown {
  double pax_term = 0.0;
  double rev_term = 0.0;
  double vmt_term = 0.0;
  double total = 0.0;
};

inline double combine(const ObjectiveWeights& w, double pax, double rev,
                      double vmt) {
  return w.pax * pax + w.rev * rev - w.vmt * vmt;
}

inline double base_price(const Model::RouteData& r, const FareVector& y) {
  return r.price_coef[0] * y.values[0] + r.price_coef[1] * y.values[1] +
         r.price_coef[2] * y.values[2] + r.price_coef[3] * y.values[3];
}

inline double base_price(const Model& m, int route, const FareVector& y) {
  return base_price(m.routes()[route], y);
}

inline std::vector<double> base_prices(const Model& m, const FareVector& y) {
  std::vector<double> sigma(m.routes().size());
  for (std::size_t r = 0; r < sigma.size(); ++r) {
    sigma[r] = base_price(m.routes()[r], y);
  }
  return sigma;
}

inline double customer_price(const Model& m, int route, const FareVector& y,
                             const ActivationVector& x) {
  const Model::RouteData& r = m.routes()[route];
  const double sigma = base_price(r, y);
  if (r.category < 0) return sigma;
  return (1.0 - y.discount() * (x[r.category] ? 1.0 : 0.0)) * sigma;
}

inline PriceTable customer_prices(const Model& m, const FareVector& y,
                                  const ActivationVector& x) {
  PriceTable t;
  t.price.resize(m.routes().size());
  for (std::size_t r = 0; r < t.price.size(); ++r) {
    t.price[r] = customer_price(m, static_cast<int>(r), y, x);
  }
  return t;
}

// Softmax over the outside option and the type's routes, given the price of
// each route in the type's own route order.
inline void mnl_shares(const Model::TypeData& t, const double* prices,
                       double* route_share, double& outside_share) {
  const std::size_t n = t.routes.size();
  double vmax = t.outside_utility;
  for (std::size_t j = 0; j < n; ++j) {
    route_share[j] = t.utility[j] + t.alpha * prices[j];
    vmax = std::max(vmax, route_share[j]);
  }
  outside_share = std::exp(t.outside_utility - vmax);
  double denom = outside_share;
  for (std::size_t j = 0; j < n; ++j) {
    route_share[j] = std::exp(route_share[j] - vmax);
    denom += route_share[j];
  }
  const double inv = 1.0 / denom;
  outside_share *= inv;
  for (std::size_t j = 0; j < n; ++j) route_share[j] *= inv;
}

struct TypeTerms {
  double pax = 0.0;
  double rev = 0.0;
  double vmt = 0.0;
};

// Per-passenger terms of one type; shares are written to the scratch arrays.
inline TypeTerms type_terms(const Model::TypeData& t, const double* prices,
                            double* route_share, double& outside_share) {
  mnl_shares(t, prices, route_share, outside_share);
  TypeTerms out;
  out.pax = t.outside_utility;
  for (std::size_t j = 0; j < t.routes.size(); ++j) {
    out.pax += t.utility[j] + t.alpha * prices[j];
    out.rev += prices[j] * route_share[j];
  }
  out.vmt = t.drive_distance * outside_share;
  return out;
}

inline ShareTable shares(const Model& m, const PriceTable& prices) {
  ShareTable s;
  s.share.resize(m.types().size());
  s.outside_share.resize(m.types().size());
  std::vector<double> p;
  for (std::size_t i = 0; i < m.types().size(); ++i) {
    const Model::TypeData& t = m.types()[i];
    p.resize(t.routes.size());
    for (std::size_t j = 0; j < t.routes.size(); ++j) {
      p[j] = prices.price[t.routes[j]];
    }
    s.share[i].resize(t.routes.size());
    mnl_shares(t, p.data(), s.share[i].data(), s.outside_share[i]);
  }
  return s;
}

// Attractiveness ratio exp(u_i0) / exp(u_ir + alpha_i p_r); `route` is a
// position in the type's route list.
inline double gamma(const Model& m, int type, int route_pos, const FareVector& y,
                    bool discount_applied) {
  const Model::TypeData& t = m.types()[type];
  const Model::RouteData& r = m.routes()[t.routes[route_pos]];
  double p = base_price(r, y);
  if (discount_applied && r.category >= 0) p *= 1.0 - y.discount();
  return std::exp(t.outside_utility - t.utility[route_pos] - t.alpha * p);
}

inline WelfareBreakdown welfare(const Model& m, const FareVector& y,
                                const ActivationVector& x,
                                const ObjectiveWeights& w) {
  const PriceTable prices = customer_prices(m, y, x);
  WelfareBreakdown b;
  std::vector<double> p, s;
  for (const Model::TypeData& t : m.types()) {
    p.resize(t.routes.size());
    s.resize(t.routes.size());
    for (std::size_t j = 0; j < t.routes.size(); ++j) {
      p[j] = prices.price[t.routes[j]];
    }
    double s0 = 0.0;
    const TypeTerms terms = type_terms(t, p.data(), s.data(), s0);
    b.pax_term += t.count * terms.pax;
    b.rev_term += t.count * terms.rev;
    b.vmt_term += t.count * terms.vmt;
  }
  b.total = combine(w, b.pax_term, b.rev_term, b.vmt_term);
  return b;
}

inline WelfareBreakdown welfare(const Model& m, const FareVector& y,
                                const ActivationVector& x) {
  return welfare(m, y, x, m.weights());
}

// Revenue of operator k: its own fare components on every route it serves,
// with the route's discount applied pro rata.
inline double operator_revenue(const Model& m, const FareVector& y,
                               const ActivationVector& x, OperatorKind k) {
  const int ki = kind_index(k);
  const PriceTable prices = customer_prices(m, y, x);
  const ShareTable sh = shares(m, prices);
  double total = 0.0;
  for (std::size_t i = 0; i < m.types().size(); ++i) {
    const Model::TypeData& t = m.types()[i];
    double acc = 0.0;
    for (std::size_t j = 0; j < t.routes.size(); ++j) {
      const Model::RouteData& r = m.routes()[t.routes[j]];
      if (!r.served[ki]) continue;
      const double own = y.base(k) + r.distance[ki] * y.markup(k);
      const double factor =
          r.category >= 0 && x[r.category] ? 1.0 - y.discount() : 1.0;
      acc += sh.share[i][j] * factor * own;
    }
    total += t.count * acc;
  }
  return total;
}

}  // namespace alliance
