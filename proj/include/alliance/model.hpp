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
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "alliance/common.hpp"

namespace alliance {

enum class OperatorKind : int { Transit = 0, Mod = 1 };

inline constexpr std::array<OperatorKind, 2> kOperatorKinds = {
    OperatorKind::Transit, OperatorKind::Mod};

inline constexpr int kind_index(OperatorKind k) { return static_cast<int>(k); }

inline std::string_view to_string(OperatorKind k) {
  return k == OperatorKind::Transit ? "transit" : "mod";
}

struct Operator {
  int id = 0;
  OperatorKind kind = OperatorKind::Transit;
  bool operator==(const Operator&) const = default;
};

struct FareBounds {
  double base_min = 0.0;
  double base_max = 10.0;
  double markup_min = 0.0;
  double markup_max = 5.0;
  double discount_min = 0.0;
  double discount_max = 0.5;
  bool operator==(const FareBounds&) const = default;
};

enum class FareAxis : int {
  TransitBase = 0,
  TransitMarkup = 1,
  ModBase = 2,
  ModMarkup = 3,
  Discount = 4,
};

inline constexpr int kFareDims = 5;

inline constexpr std::array<FareAxis, kFareDims> kFareAxes = {
    FareAxis::TransitBase, FareAxis::TransitMarkup, FareAxis::ModBase,
    FareAxis::ModMarkup, FareAxis::Discount};

inline constexpr int axis_index(FareAxis a) { return static_cast<int>(a); }

inline std::string_view to_string(FareAxis a) {
  switch (a) {
    case FareAxis::TransitBase: return "beta0_transit";
    case FareAxis::TransitMarkup: return "betaDelta_transit";
    case FareAxis::ModBase: return "beta0_mod";
    case FareAxis::ModMarkup: return "betaDelta_mod";
    case FareAxis::Discount: return "Lambda";
  }
  return "?";
}

inline constexpr FareAxis base_axis(OperatorKind k) {
  return static_cast<FareAxis>(2 * kind_index(k));
}
inline constexpr FareAxis markup_axis(OperatorKind k) {
  return static_cast<FareAxis>(2 * kind_index(k) + 1);
}

struct FareVector {
  std::array<double, kFareDims> values{};

  double& operator[](FareAxis a) { return values[axis_index(a)]; }
  double operator[](FareAxis a) const { return values[axis_index(a)]; }
  double base(OperatorKind k) const { return values[2 * kind_index(k)]; }
  double markup(OperatorKind k) const { return values[2 * kind_index(k) + 1]; }
  double discount() const { return values[4]; }

  static FareVector make(double transit_base, double transit_markup,
                         double mod_base, double mod_markup, double discount) {
    return FareVector{
        {transit_base, transit_markup, mod_base, mod_markup, discount}};
  }
  bool operator==(const FareVector&) const = default;
};

inline double axis_lower(const FareBounds& b, FareAxis a) {
  switch (a) {
    case FareAxis::TransitBase:
    case FareAxis::ModBase: return b.base_min;
    case FareAxis::TransitMarkup:
    case FareAxis::ModMarkup: return b.markup_min;
    case FareAxis::Discount: return b.discount_min;
  }
  return 0.0;
}

inline double axis_upper(const FareBounds& b, FareAxis a) {
  switch (a) {
    case FareAxis::TransitBase:
    case FareAxis::ModBase: return b.base_max;
    case FareAxis::TransitMarkup:
    case FareAxis::ModMarkup: return b.markup_max;
    case FareAxis::Discount: return b.discount_max;
  }
  return 0.0;
}

inline bool within_bounds(const FareBounds& b, const FareVector& y,
                          double tol = 0.0) {
  for (FareAxis a : kFareAxes) {
    if (y[a] < axis_lower(b, a) - tol || y[a] > axis_upper(b, a) + tol) {
      return false;
    }
  }
  return true;
}

inline FareVector clamp_to_bounds(const FareBounds& b, FareVector y) {
  for (FareAxis a : kFareAxes) {
    y[a] = std::clamp(y[a], axis_lower(b, a), axis_upper(b, a));
  }
  return y;
}

inline FareVector lower_corner(const FareBounds& b) {
  FareVector y;
  for (FareAxis a : kFareAxes) y[a] = axis_lower(b, a);
  return y;
}

template <typename Rng>
FareVector uniform_fares(const FareBounds& b, Rng& rng) {
  FareVector y;
  for (FareAxis a : kFareAxes) {
    std::uniform_real_distribution<double> d(0.0, 1.0);
    const double u = d(rng);
    y[a] = axis_lower(b, a) + u * (axis_upper(b, a) - axis_lower(b, a));
  }
  return y;
}

// Maps a point of the unit cube onto the fare box, axis by axis.
inline FareVector from_unit_cube(const FareBounds& b,
                                 const std::vector<double>& u) {
  FareVector y;
  for (FareAxis a : kFareAxes) {
    const double lo = axis_lower(b, a);
    y[a] = lo + u[axis_index(a)] * (axis_upper(b, a) - lo);
  }
  return y;
}

inline std::vector<double> to_unit_cube(const FareBounds& b,
                                        const FareVector& y) {
  std::vector<double> u(kFareDims, 0.0);
  for (FareAxis a : kFareAxes) {
    const double lo = axis_lower(b, a);
    const double span = axis_upper(b, a) - lo;
    u[axis_index(a)] = span > 0.0 ? (y[a] - lo) / span : 0.0;
  }
  return u;
}

struct Route {
  int id = 0;
  std::vector<int> operators;
  std::map<int, double> distance;
  std::optional<int> category;
  bool operator==(const Route&) const = default;
};

struct DiscountCategory {
  int id = 0;
  std::vector<int> routes;
  std::string label;
  bool operator==(const DiscountCategory&) const = default;
};

struct PassengerType {
  int id = 0;
  double count = 0.0;
  std::vector<int> routes;
  std::vector<double> utility;
  double outside_utility = 0.0;
  double price_sensitivity = 0.0;
  double drive_distance = 0.0;
  std::optional<int> town;
  bool operator==(const PassengerType&) const = default;
};

struct ObjectiveWeights {
  double pax = 0.0;
  double rev = 1.0;
  double vmt = 0.0;
  bool operator==(const ObjectiveWeights&) const = default;
};

struct Town {
  int id = 0;
  std::string name;
  std::optional<double> income_ratio;
  bool operator==(const Town&) const = default;
};

struct Instance {
  std::string name;
  std::vector<Operator> operators;
  std::vector<Route> routes;
  std::vector<DiscountCategory> categories;
  std::vector<PassengerType> passenger_types;
  FareBounds bounds;
  ObjectiveWeights weights;
  std::vector<Town> towns;
  bool operator==(const Instance&) const = default;
};

struct Violation {
  std::string entity;
  std::string rule;
  std::string detail;
};

inline std::vector<Violation> validate(const Instance& inst) {
  std::vector<Violation> out;
  auto add = [&](std::string entity, std::string rule, std::string detail) {
    out.push_back({std::move(entity), std::move(rule), std::move(detail)});
  };

  std::map<int, OperatorKind> op_kind;
  int transit = 0, mod = 0;
  for (const Operator& op : inst.operators) {
    if (!op_kind.emplace(op.id, op.kind).second) {
      add("operator " + std::to_string(op.id), "duplicate id", "");
    }
    (op.kind == OperatorKind::Transit ? transit : mod)++;
  }
  if (inst.operators.size() != 2 || transit != 1 || mod != 1) {
    add("instance", "operator count",
        "need exactly one transit and one mod operator");
  }

  std::map<int, const Route*> routes;
  for (const Route& r : inst.routes) {
    const std::string name = "route " + std::to_string(r.id);
    if (!routes.emplace(r.id, &r).second) add(name, "duplicate id", "");
    if (r.operators.empty()) add(name, "route operators", "no operator");
    std::set<int> ops(r.operators.begin(), r.operators.end());
    if (ops.size() != r.operators.size()) {
      add(name, "route operators", "repeated operator");
    }
    for (int k : ops) {
      if (!op_kind.count(k)) {
        add(name, "route operators", "unknown operator " + std::to_string(k));
      }
    }
    std::set<int> keys;
    for (const auto& [k, d] : r.distance) {
      keys.insert(k);
      if (!(d >= 0.0) || !std::isfinite(d)) {
        add(name, "route distance sign", "operator " + std::to_string(k));
      }
    }
    if (keys != ops) {
      add(name, "route distance keys", "keys differ from operators served");
    }
  }

  std::map<int, int> route_category;
  std::set<int> category_ids;
  for (const DiscountCategory& c : inst.categories) {
    const std::string name = "category " + std::to_string(c.id);
    if (!category_ids.insert(c.id).second) add(name, "duplicate id", "");
    for (int r : c.routes) {
      if (!routes.count(r)) {
        add(name, "category route reference",
            "unknown route " + std::to_string(r));
        continue;
      }
      if (!route_category.emplace(r, c.id).second) {
        add("route " + std::to_string(r), "category partition",
            "route listed in more than one category");
      }
    }
  }
  for (const Route& r : inst.routes) {
    auto it = route_category.find(r.id);
    const bool listed = it != route_category.end();
    if (listed != r.category.has_value() ||
        (listed && *r.category != it->second)) {
      add("route " + std::to_string(r.id), "route category",
          "category field disagrees with category membership");
    }
  }

  std::set<int> type_ids;
  for (const PassengerType& t : inst.passenger_types) {
    const std::string name = "passenger_type " + std::to_string(t.id);
    if (!type_ids.insert(t.id).second) add(name, "duplicate id", "");
    if (!(t.count > 0.0) || !std::isfinite(t.count)) {
      add(name, "passenger count", "N must be positive");
    }
    if (!(t.price_sensitivity <= 0.0)) {
      add(name, "price_sensitivity sign", "alpha must be <= 0");
    }
    if (!(t.drive_distance >= 0.0) || !std::isfinite(t.drive_distance)) {
      add(name, "drive distance sign", "Delta0 must be >= 0");
    }
    if (!std::isfinite(t.outside_utility)) {
      add(name, "utility finite", "u0 must be finite");
    }
    if (t.routes.empty()) add(name, "route set nonempty", "");
    if (t.utility.size() != t.routes.size()) {
      add(name, "utility arity", "one utility per route required");
    }
    for (double u : t.utility) {
      if (!std::isfinite(u)) add(name, "utility finite", "u must be finite");
    }
    std::set<int> seen;
    for (int r : t.routes) {
      if (!routes.count(r)) {
        add(name, "route reference", "unknown route " + std::to_string(r));
      }
      if (!seen.insert(r).second) {
        add(name, "route reference", "repeated route " + std::to_string(r));
      }
    }
  }

  const FareBounds& b = inst.bounds;
  if (!(0.0 <= b.base_min && b.base_min <= b.base_max)) {
    add("bounds", "bounds order", "0 <= base_min <= base_max");
  }
  if (!(0.0 <= b.markup_min && b.markup_min <= b.markup_max)) {
    add("bounds", "bounds order", "0 <= markup_min <= markup_max");
  }
  if (!(0.0 <= b.discount_min && b.discount_min <= b.discount_max &&
        b.discount_max <= 1.0)) {
    add("bounds", "bounds order",
        "0 <= discount_min <= discount_max <= 1");
  }
  const ObjectiveWeights& w = inst.weights;
  if (!(w.pax >= 0.0 && w.rev >= 0.0 && w.vmt >= 0.0)) {
    add("weights", "weights sign", "all weights must be >= 0");
  }
  if (w.pax == 0.0 && w.rev == 0.0 && w.vmt == 0.0) {
    add("weights", "weights nonzero", "at least one weight must be > 0");
  }
  return out;
}

inline std::string describe(const std::vector<Violation>& violations) {
  std::string s;
  for (const Violation& v : violations) {
    if (!s.empty()) s += "; ";
    s += v.entity + ": " + v.rule;
    if (!v.detail.empty()) s += " (" + v.detail + ")";
  }
  return s;
}

// Dense, index-based view of a validated instance. Route, category and type
// indices refer to positions in the instance vectors.
class Model {
 public:
  struct RouteData {
    int id = 0;
    // Coefficients of (beta0_TR, betaDelta_TR, beta0_MOD, betaDelta_MOD).
    std::array<double, 4> price_coef{};
    std::array<bool, 2> served{};
    std::array<double, 2> distance{};
    int category = -1;
  };
  struct TypeData {
    int id = 0;
    double count = 0.0;
    std::vector<int> routes;
    std::vector<double> utility;
    double outside_utility = 0.0;
    double alpha = 0.0;
    double drive_distance = 0.0;
    int town = -1;
    std::vector<int> categories;
  };
  struct CategoryData {
    int id = 0;
    std::vector<int> routes;
    std::vector<int> types;
  };
  struct Component {
    std::vector<int> categories;
    std::vector<int> types;
    bool constant = false;
  };

  explicit Model(Instance instance) : inst_(std::move(instance)) {
    const auto violations = validate(inst_);
    if (!violations.empty()) throw ValidationError(describe(violations));
    compile();
  }

  const Instance& instance() const { return inst_; }
  const FareBounds& bounds() const { return inst_.bounds; }
  const ObjectiveWeights& weights() const { return inst_.weights; }
  const std::vector<RouteData>& routes() const { return routes_; }
  const std::vector<TypeData>& types() const { return types_; }
  const std::vector<CategoryData>& categories() const { return categories_; }
  const std::vector<Component>& components() const { return components_; }
  int route_index(int id) const { return route_index_.at(id); }
  int category_index(int id) const { return category_index_.at(id); }
  int type_index(int id) const { return type_index_.at(id); }
  int operator_id(OperatorKind k) const { return operator_id_[kind_index(k)]; }

 private:
  void compile() {
    for (const Operator& op : inst_.operators) {
      operator_id_[kind_index(op.kind)] = op.id;
    }
    std::map<int, OperatorKind> kind_of;
    for (const Operator& op : inst_.operators) kind_of[op.id] = op.kind;

    for (std::size_t c = 0; c < inst_.categories.size(); ++c) {
      category_index_[inst_.categories[c].id] = static_cast<int>(c);
    }
    routes_.resize(inst_.routes.size());
    for (std::size_t r = 0; r < inst_.routes.size(); ++r) {
      const Route& src = inst_.routes[r];
      RouteData& d = routes_[r];
      d.id = src.id;
      route_index_[src.id] = static_cast<int>(r);
      for (const auto& [op, miles] : src.distance) {
        const int k = kind_index(kind_of.at(op));
        d.served[k] = true;
        d.distance[k] = miles;
        d.price_coef[2 * k] = 1.0;
        d.price_coef[2 * k + 1] = miles;
      }
      if (src.category) d.category = category_index_.at(*src.category);
    }
    categories_.resize(inst_.categories.size());
    for (std::size_t c = 0; c < inst_.categories.size(); ++c) {
      categories_[c].id = inst_.categories[c].id;
      for (int rid : inst_.categories[c].routes) {
        categories_[c].routes.push_back(route_index_.at(rid));
      }
      std::sort(categories_[c].routes.begin(), categories_[c].routes.end());
    }
    types_.resize(inst_.passenger_types.size());
    for (std::size_t i = 0; i < inst_.passenger_types.size(); ++i) {
      const PassengerType& src = inst_.passenger_types[i];
      TypeData& t = types_[i];
      t.id = src.id;
      type_index_[src.id] = static_cast<int>(i);
      t.count = src.count;
      t.utility = src.utility;
      t.outside_utility = src.outside_utility;
      t.alpha = src.price_sensitivity;
      t.drive_distance = src.drive_distance;
      t.town = src.town.value_or(-1);
      std::set<int> cats;
      for (int rid : src.routes) {
        const int r = route_index_.at(rid);
        t.routes.push_back(r);
        if (routes_[r].category >= 0) cats.insert(routes_[r].category);
      }
      t.categories.assign(cats.begin(), cats.end());
      for (int c : cats) categories_[c].types.push_back(static_cast<int>(i));
    }
    build_components();
  }

  // Connected components of the bipartite graph joining each type to the
  // categories it touches. Types without eligible routes form one constant
  // component, listed last.
  void build_components() {
    const int nc = static_cast<int>(categories_.size());
    std::vector<int> parent(nc);
    for (int c = 0; c < nc; ++c) parent[c] = c;
    auto find = [&](int c) {
      while (parent[c] != c) c = parent[c] = parent[parent[c]];
      return c;
    };
    for (const TypeData& t : types_) {
      for (std::size_t j = 1; j < t.categories.size(); ++j) {
        const int a = find(t.categories[0]);
        const int b = find(t.categories[j]);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
    std::map<int, int> slot;
    for (int c = 0; c < nc; ++c) {
      const int root = find(c);
      auto [it, fresh] = slot.emplace(root, static_cast<int>(components_.size()));
      if (fresh) components_.emplace_back();
      components_[it->second].categories.push_back(c);
    }
    Component constant;
    constant.constant = true;
    for (std::size_t i = 0; i < types_.size(); ++i) {
      const TypeData& t = types_[i];
      if (t.categories.empty()) {
        constant.types.push_back(static_cast<int>(i));
      } else {
        components_[slot.at(find(t.categories[0]))].types.push_back(
            static_cast<int>(i));
      }
    }
    if (!constant.types.empty() || components_.empty()) {
      components_.push_back(std::move(constant));
    }
  }

  Instance inst_;
  std::vector<RouteData> routes_;
  std::vector<TypeData> types_;
  std::vector<CategoryData> categories_;
  std::vector<Component> components_;
  std::unordered_map<int, int> route_index_;
  std::unordered_map<int, int> category_index_;
  std::unordered_map<int, int> type_index_;
  std::array<int, 2> operator_id_{};
};

}  // namespace alliance
