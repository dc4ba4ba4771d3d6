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
#include <cstdio>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "alliance/choice.hpp"
#include "alliance/instance_json.hpp"
#include "alliance/second_stage.hpp"

namespace alliance {

struct LinearTerm {
  int var = 0;
  double coef = 0.0;
};

struct LpVariable {
  std::string name;
  bool binary = false;
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
};

enum class Sense { LessEqual, GreaterEqual, Equal };

struct LpConstraint {
  std::string name;
  std::vector<LinearTerm> terms;
  Sense sense = Sense::Equal;
  double rhs = 0.0;
};

struct LinearProgram {
  std::string comment;
  bool maximize = true;
  std::vector<LpVariable> variables;
  std::vector<LinearTerm> objective;
  double objective_constant = 0.0;
  std::vector<LpConstraint> constraints;

  int add_variable(std::string name, bool binary, double lower, double upper) {
    variables.push_back({std::move(name), binary, lower, upper});
    return static_cast<int>(variables.size()) - 1;
  }
  int find(const std::string& name) const {
    for (std::size_t v = 0; v < variables.size(); ++v) {
      if (variables[v].name == name) return static_cast<int>(v);
    }
    return -1;
  }
};

// Variable layout of the second-stage program, kept alongside the program so
// a solution can be mapped onto it.
struct SecondStageLayout {
  std::vector<int> x;                   // per category
  std::vector<int> s0;                  // per type
  std::vector<std::vector<int>> s;      // [type][route position]
  std::vector<std::vector<int>> w;      // [type][route position]
  std::vector<int> p;                   // per route
};

inline std::string lp_name(const char* prefix, int a) {
  return prefix + std::to_string(a);
}

inline LinearProgram build_second_stage_milp(const Model& m, const FareVector& y,
                                             const ObjectiveWeights& mu,
                                             SecondStageLayout* layout_out = nullptr) {
  const double inf = std::numeric_limits<double>::infinity();
  const Instance& inst = m.instance();
  LinearProgram lp;
  lp.comment = "second stage of " + (inst.name.empty() ? std::string("instance") : inst.name);
  SecondStageLayout L;

  for (const auto& c : m.categories()) {
    L.x.push_back(lp.add_variable(lp_name("x_a", c.id), true, 0.0, 1.0));
  }
  const auto& types = m.types();
  L.s0.resize(types.size());
  L.s.resize(types.size());
  L.w.resize(types.size());
  for (std::size_t i = 0; i < types.size(); ++i) {
    const auto& t = types[i];
    const std::string ti = "_i" + std::to_string(t.id);
    for (int r : t.routes) {
      L.s[i].push_back(lp.add_variable("s" + ti + "_r" + std::to_string(m.routes()[r].id),
                                       false, 0.0, inf));
    }
    L.s0[i] = lp.add_variable("s" + ti + "_0", false, 0.0, inf);
    for (int r : t.routes) {
      L.w[i].push_back(lp.add_variable("w" + ti + "_r" + std::to_string(m.routes()[r].id),
                                       false, -inf, inf));
    }
  }
  for (const auto& r : m.routes()) {
    L.p.push_back(lp.add_variable(lp_name("p_r", r.id), false, -inf, inf));
  }

  // Objective: PAX is affine in p, REV is the sum of w, VMT is linear in s0.
  std::vector<double> price_coef(m.routes().size(), 0.0);
  for (std::size_t i = 0; i < types.size(); ++i) {
    const auto& t = types[i];
    double constant = t.outside_utility;
    for (std::size_t j = 0; j < t.routes.size(); ++j) {
      constant += t.utility[j];
      price_coef[t.routes[j]] += mu.pax * t.count * t.alpha;
    }
    lp.objective_constant += mu.pax * t.count * constant;
  }
  for (std::size_t i = 0; i < types.size(); ++i) {
    const auto& t = types[i];
    for (std::size_t j = 0; j < t.routes.size(); ++j) {
      if (mu.rev != 0.0) lp.objective.push_back({L.w[i][j], mu.rev * t.count});
    }
    if (mu.vmt != 0.0 && t.drive_distance != 0.0) {
      lp.objective.push_back({L.s0[i], -mu.vmt * t.count * t.drive_distance});
    }
  }
  for (std::size_t r = 0; r < price_coef.size(); ++r) {
    if (price_coef[r] != 0.0) lp.objective.push_back({L.p[r], price_coef[r]});
  }

  auto add = [&](std::string name, std::vector<LinearTerm> terms, Sense sense,
                 double rhs) {
    lp.constraints.push_back({std::move(name), std::move(terms), sense, rhs});
  };
  const double lambda = y.discount();
  for (std::size_t i = 0; i < types.size(); ++i) {
    const auto& t = types[i];
    std::vector<LinearTerm> terms{{L.s0[i], 1.0}};
    for (int v : L.s[i]) terms.push_back({v, 1.0});
    add("norm_i" + std::to_string(t.id), std::move(terms), Sense::Equal, 1.0);
  }
  for (std::size_t i = 0; i < types.size(); ++i) {
    const auto& t = types[i];
    for (std::size_t j = 0; j < t.routes.size(); ++j) {
      const auto& r = m.routes()[t.routes[j]];
      const std::string tag = "_i" + std::to_string(t.id) + "_r" + std::to_string(r.id);
      const double sigma = base_price(r, y);
      const double g0 = gamma(m, static_cast<int>(i), static_cast<int>(j), y, false);
      const int s0 = L.s0[i], s = L.s[i][j], w = L.w[i][j];
      if (r.category < 0) {
        add("prop" + tag, {{s0, 1.0}, {s, -g0}}, Sense::Equal, 0.0);
        add("wdef" + tag, {{w, 1.0}, {s, -sigma}}, Sense::Equal, 0.0);
        continue;
      }
      const double gl = gamma(m, static_cast<int>(i), static_cast<int>(j), y, true);
      const double ms = g0;
      const double mw = lambda * sigma;
      const int x = L.x[r.category];
      const std::string ctag = "_a" + std::to_string(m.categories()[r.category].id) + tag;
      add("share1" + ctag, {{s0, 1.0}, {s, -g0}}, Sense::LessEqual, 0.0);
      add("share2" + ctag, {{s0, 1.0}, {s, -g0}, {x, ms}}, Sense::GreaterEqual, 0.0);
      add("share3" + ctag, {{s0, 1.0}, {s, -gl}, {x, ms}}, Sense::LessEqual, ms);
      add("share4" + ctag, {{s0, 1.0}, {s, -gl}}, Sense::GreaterEqual, 0.0);
      add("rev1" + ctag, {{w, 1.0}, {s, -sigma}}, Sense::LessEqual, 0.0);
      add("rev2" + ctag, {{w, 1.0}, {s, -sigma}, {x, mw}}, Sense::GreaterEqual, 0.0);
      add("rev3" + ctag, {{w, 1.0}, {s, -(1.0 - lambda) * sigma}, {x, mw}},
          Sense::LessEqual, mw);
      add("rev4" + ctag, {{w, 1.0}, {s, -(1.0 - lambda) * sigma}}, Sense::GreaterEqual, 0.0);
    }
  }
  for (std::size_t r = 0; r < m.routes().size(); ++r) {
    const auto& rd = m.routes()[r];
    const double sigma = base_price(rd, y);
    if (rd.category < 0) {
      add(lp_name("price_r", rd.id), {{L.p[r], 1.0}}, Sense::Equal, sigma);
    } else {
      add(lp_name("price_r", rd.id), {{L.p[r], 1.0}, {L.x[rd.category], lambda * sigma}},
          Sense::Equal, sigma);
    }
  }
  if (layout_out) *layout_out = std::move(L);
  return lp;
}

inline LinearProgram build_second_stage_milp(const Model& m, const FareVector& y) {
  return build_second_stage_milp(m, y, m.weights());
}

inline std::string lp_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string write_lp(const LinearProgram& lp) {
  std::string out;
  if (!lp.comment.empty()) out += "\\ " + lp.comment + "\n";
  out += lp.maximize ? "Maximize\n" : "Minimize\n";
  auto append_terms = [&](const std::vector<LinearTerm>& terms, std::string line) {
    int on_line = 0;
    for (const LinearTerm& t : terms) {
      if (on_line == 6) {
        out += line + "\n";
        line = "  ";
        on_line = 0;
      }
      line += t.coef < 0.0 ? " - " : " + ";
      line += lp_number(std::fabs(t.coef)) + " " + lp.variables[t.var].name;
      ++on_line;
    }
    return line;
  };
  std::string obj = append_terms(lp.objective, " obj:");
  if (lp.objective_constant != 0.0 || lp.objective.empty()) {
    obj += lp.objective_constant < 0.0 ? " - " : " + ";
    obj += lp_number(std::fabs(lp.objective_constant));
  }
  out += obj + "\n";
  out += "Subject To\n";
  for (const LpConstraint& c : lp.constraints) {
    std::string line = append_terms(c.terms, " " + c.name + ":");
    line += c.sense == Sense::LessEqual ? " <= " : c.sense == Sense::GreaterEqual ? " >= " : " = ";
    line += lp_number(c.rhs);
    out += line + "\n";
  }
  out += "Bounds\n";
  for (const LpVariable& v : lp.variables) {
    if (v.binary) continue;
    const bool free_lo = std::isinf(v.lower) && v.lower < 0.0;
    const bool free_hi = std::isinf(v.upper);
    if (free_lo && free_hi) {
      out += " " + v.name + " free\n";
    } else if (!free_lo && v.lower == 0.0 && free_hi) {
      continue;
    } else {
      out += " " + (free_lo ? std::string("-inf") : lp_number(v.lower)) + " <= " + v.name +
             " <= " + (free_hi ? std::string("+inf") : lp_number(v.upper)) + "\n";
    }
  }
  bool any_binary = false;
  for (const LpVariable& v : lp.variables) any_binary |= v.binary;
  if (any_binary) {
    out += "Binaries\n";
    for (const LpVariable& v : lp.variables) {
      if (v.binary) out += " " + v.name + "\n";
    }
  }
  out += "End\n";
  return out;
}

inline void export_milp(const Model& m, const FareVector& y, const std::string& path) {
  write_text_file(path, write_lp(build_second_stage_milp(m, y)));
}

inline std::vector<double> lp_point(const SecondStageLayout& L,
                                    const SecondStageSolution& sol,
                                    std::size_t variable_count) {
  std::vector<double> v(variable_count, 0.0);
  for (std::size_t a = 0; a < L.x.size(); ++a) v[L.x[a]] = sol.activations[a];
  for (std::size_t i = 0; i < L.s0.size(); ++i) {
    v[L.s0[i]] = sol.shares.outside_share[i];
    for (std::size_t j = 0; j < L.s[i].size(); ++j) {
      v[L.s[i][j]] = sol.shares.share[i][j];
      v[L.w[i][j]] = sol.linearized_revenue[i][j];
    }
  }
  for (std::size_t r = 0; r < L.p.size(); ++r) v[L.p[r]] = sol.prices.price[r];
  return v;
}

inline double lp_objective(const LinearProgram& lp, const std::vector<double>& v) {
  double z = lp.objective_constant;
  for (const LinearTerm& t : lp.objective) z += t.coef * v[t.var];
  return z;
}

inline double lp_max_violation(const LinearProgram& lp, const std::vector<double>& v) {
  double worst = 0.0;
  for (const LpVariable& var : lp.variables) {
    const std::size_t k = &var - lp.variables.data();
    worst = std::max({worst, var.lower - v[k], v[k] - var.upper});
    if (var.binary) worst = std::max(worst, std::min(std::fabs(v[k]), std::fabs(v[k] - 1.0)));
  }
  for (const LpConstraint& c : lp.constraints) {
    double lhs = 0.0;
    for (const LinearTerm& t : c.terms) lhs += t.coef * v[t.var];
    const double d = lhs - c.rhs;
    if (c.sense == Sense::LessEqual) worst = std::max(worst, d);
    if (c.sense == Sense::GreaterEqual) worst = std::max(worst, -d);
    if (c.sense == Sense::Equal) worst = std::max(worst, std::fabs(d));
  }
  return worst;
}

}  // namespace alliance
