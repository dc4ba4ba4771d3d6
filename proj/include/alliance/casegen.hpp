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
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "alliance/graph.hpp"
#include "alliance/model.hpp"

namespace alliance {

struct ChoiceCoefficients {
  double mod_asc = -0.75;
  double transit_asc = -1.125;
  double hybrid_asc = -0.9375;
  double drive_asc = 0.0;
  double price = -0.05;
  double time = -0.0075;
};

enum class Profile { TimeSensitive, Intermediate, PriceSensitive };
enum class RouteMode { TransitOnly, ModOnly, Hybrid };

inline const char* to_string(RouteMode m) {
  switch (m) {
    case RouteMode::TransitOnly: return "transit";
    case RouteMode::ModOnly: return "mod";
    case RouteMode::Hybrid: return "hybrid";
  }
  return "?";
}

struct SyntheticConfig {
  std::string name = "synthetic";
  std::uint64_t seed = 1;
  int town_count = 14;
  int tracts_per_town = 4;
  int core_tracts = 6;
  int transit_line_count = 4;
  double ring_min_radius = 8.0;
  double ring_max_radius = 30.0;
  double town_radius = 1.5;
  double core_radius = 1.5;
  double hub_spacing = 2.0;
  double station_catchment = 3.0;
  double demand_scale = 40.0;
  double demand_sigma = 1.0;
  double transit_mph = 30.0;
  double mod_mph = 25.0;
  double drive_mph = 30.0;
  double walk_mph = 3.0;
  double transit_wait_min = 8.0;
  double mod_wait_min = 5.0;
  double transfer_min = 5.0;
  double alight_min = 0.5;
  double walk_access_max = 3.0;
  double walk_egress_max = 1.0;
  int mod_access_stations = 2;
  double road_detour = 1.3;
  double gas_per_mile = 0.20;
  double parking_cost = 10.0;
  int core_destinations_per_tract = 2;
  int local_destinations_per_tract = 1;
  std::array<double, 3> profile_mix = {0.25, 0.5, 0.25};
  std::vector<double> income_ratios;
  double mod_edge_coverage = 1.0;
  int k_paths = 8;
  FareBounds bounds;
  ObjectiveWeights weights;
  ChoiceCoefficients coefficients;

  void check() const {
    if (town_count < 2) throw std::invalid_argument("town_count must be >= 2");
    if (tracts_per_town < 1 || core_tracts < 1 || transit_line_count < 1) {
      throw std::invalid_argument("tract and line counts must be positive");
    }
    for (double v : {transit_mph, mod_mph, drive_mph, walk_mph}) {
      if (!(v > 0.0)) throw std::invalid_argument("speeds must be positive");
    }
    if (!income_ratios.empty() &&
        static_cast<int>(income_ratios.size()) != town_count) {
      throw std::invalid_argument("income_ratios needs one entry per town");
    }
    for (double r : income_ratios) {
      if (!(r > 0.0)) throw std::invalid_argument("income ratios must be positive");
    }
    if (k_paths < 1) throw std::invalid_argument("k_paths must be >= 1");
  }
};

enum class NodeRole { Tract, Street, Exit, Platform };

struct NodeInfo {
  NodeRole role = NodeRole::Tract;
  int town = -1;  // -1 for the core
  int station = -1;
  int line = -1;
  double x = 0.0;
  double y = 0.0;
};

struct Station {
  double x = 0.0;
  double y = 0.0;
  int town = -1;
  int street = -1;
  int exit = -1;
};

struct CaseNetwork {
  RoutingGraph graph;
  std::vector<NodeInfo> nodes;
  std::vector<Station> stations;
  std::vector<std::vector<int>> town_tracts;
  std::vector<int> core_tracts;
  std::vector<std::array<double, 2>> town_centers;
};

struct OdDemand {
  int origin = 0;
  int destination = 0;
  int origin_town = 0;
  int destination_town = -1;  // -1 for the core
  double count = 0.0;
};

struct CandidateRoute {
  RouteMode mode = RouteMode::ModOnly;
  Path path;
  double minutes = 0.0;
  double transit_miles = 0.0;
  double mod_miles = 0.0;
};

struct ChoiceSet {
  OdDemand od;
  std::vector<CandidateRoute> routes;
  double drive_miles = 0.0;
  double drive_minutes = 0.0;
};

struct TravelerType {
  int choice_set = 0;
  Profile profile = Profile::Intermediate;
  double count = 0.0;
  int town = 0;
  double time_coef = 0.0;
  double alpha = 0.0;
  std::vector<double> utility;
  double outside_utility = 0.0;
};

inline double euclid(double ax, double ay, double bx, double by) {
  return std::hypot(ax - bx, ay - by);
}

inline std::optional<RouteMode> classify(const RoutingGraph& g, const Path& p) {
  bool mod = false, transit = false;
  for (int e : p.edges) {
    mod |= g.edge(e).kind == EdgeKind::Mod;
    transit |= g.edge(e).kind == EdgeKind::Transit;
  }
  if (mod && transit) return RouteMode::Hybrid;
  if (mod) return RouteMode::ModOnly;
  if (transit) return RouteMode::TransitOnly;
  return std::nullopt;
}

inline CandidateRoute describe_route(const RoutingGraph& g, const Path& p, RouteMode mode) {
  CandidateRoute r;
  r.mode = mode;
  r.path = p;
  r.minutes = p.cost;
  for (int e : p.edges) {
    const GraphEdge& ed = g.edge(e);
    if (ed.kind == EdgeKind::Transit) r.transit_miles += ed.distance;
    if (ed.kind == EdgeKind::Mod) r.mod_miles += ed.distance;
  }
  return r;
}

// Identifies a route by where it boards the first vehicle and where it
// transfers.
inline std::vector<int> route_signature(const CaseNetwork& net, const Path& p,
                                        RouteMode mode) {
  std::vector<int> sig{static_cast<int>(mode)};
  const RoutingGraph& g = net.graph;
  if (!p.edges.empty()) sig.push_back(g.edge(p.edges.front()).to);
  for (int e : p.edges) {
    const GraphEdge& ed = g.edge(e);
    if (ed.kind == EdgeKind::Transfer) sig.push_back(net.nodes[ed.to].station);
    if (ed.kind == EdgeKind::Mod && net.nodes[ed.from].role == NodeRole::Exit) {
      sig.push_back(-1 - net.nodes[ed.from].station);
    }
  }
  return sig;
}

// Builds towns on a ring around the core, radial transit lines through the
// town stations into a central hub, and the MOD/walk connectors. Platform
// nodes exist in two layers and transfers only go from layer 0 to layer 1,
// so no path transfers twice.
template <typename Rng>
CaseNetwork build_network(const SyntheticConfig& cfg, Rng& rng) {
  CaseNetwork net;
  RoutingGraph& g = net.graph;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double two_pi = 2.0 * std::numbers::pi;
  const int T = cfg.town_count;
  const int L = cfg.transit_line_count;

  auto add_node = [&](NodeInfo info, std::string label) {
    net.nodes.push_back(info);
    return g.add_node(std::move(label));
  };
  auto scatter = [&](double cx, double cy, double radius) {
    const double a = two_pi * unit(rng);
    const double r = radius * std::sqrt(unit(rng));
    return std::array<double, 2>{cx + r * std::cos(a), cy + r * std::sin(a)};
  };

  const double line_offset = two_pi * unit(rng) / L;
  std::vector<double> line_angle(L);
  for (int l = 0; l < L; ++l) line_angle[l] = line_offset + two_pi * l / L;

  std::vector<double> town_angle(T), town_radius(T);
  std::vector<int> town_line(T);
  for (int t = 0; t < T; ++t) {
    town_angle[t] = two_pi * (t + 0.3 * (unit(rng) - 0.5)) / T;
    town_radius[t] = cfg.ring_min_radius +
                     unit(rng) * (cfg.ring_max_radius - cfg.ring_min_radius);
    net.town_centers.push_back({town_radius[t] * std::cos(town_angle[t]),
                                town_radius[t] * std::sin(town_angle[t])});
    double best = 1e300;
    for (int l = 0; l < L; ++l) {
      double d = std::fabs(std::remainder(town_angle[t] - line_angle[l], two_pi));
      if (d < best) {
        best = d;
        town_line[t] = l;
      }
    }
  }

  // Tracts.
  net.town_tracts.resize(T);
  for (int t = 0; t < T; ++t) {
    for (int q = 0; q < cfg.tracts_per_town; ++q) {
      const auto p = scatter(net.town_centers[t][0], net.town_centers[t][1], cfg.town_radius);
      net.town_tracts[t].push_back(add_node({NodeRole::Tract, t, -1, -1, p[0], p[1]},
                                            "tract_t" + std::to_string(t) + "_" + std::to_string(q)));
    }
  }
  for (int q = 0; q < cfg.core_tracts; ++q) {
    const auto p = scatter(0.0, 0.0, cfg.core_radius);
    net.core_tracts.push_back(add_node({NodeRole::Tract, -1, -1, -1, p[0], p[1]},
                                       "tract_core_" + std::to_string(q)));
  }

  // Stations: central hub, one core station per line, and a station for each
  // town close enough to its line.
  auto add_station = [&](double x, double y, int town) {
    const int s = static_cast<int>(net.stations.size());
    Station st{x, y, town, -1, -1};
    st.street = add_node({NodeRole::Street, town, s, -1, x, y}, "street_s" + std::to_string(s));
    st.exit = add_node({NodeRole::Exit, town, s, -1, x, y}, "exit_s" + std::to_string(s));
    net.stations.push_back(st);
    return s;
  };
  const int hub = add_station(0.0, 0.0, -1);
  std::vector<std::vector<std::pair<double, int>>> line_stops(L);
  for (int l = 0; l < L; ++l) {
    const double cx = cfg.hub_spacing * std::cos(line_angle[l]);
    const double cy = cfg.hub_spacing * std::sin(line_angle[l]);
    line_stops[l].push_back({0.0, hub});
    line_stops[l].push_back({cfg.hub_spacing, add_station(cx, cy, -1)});
  }
  for (int t = 0; t < T; ++t) {
    const int l = town_line[t];
    const double dtheta = town_angle[t] - line_angle[l];
    const double along = town_radius[t] * std::cos(dtheta);
    const double off = std::fabs(town_radius[t] * std::sin(dtheta));
    if (off > cfg.station_catchment || along <= cfg.hub_spacing) continue;
    const int s = add_station(along * std::cos(line_angle[l]), along * std::sin(line_angle[l]), t);
    line_stops[l].push_back({along, s});
  }

  // Platforms and line edges.
  std::map<std::array<int, 3>, int> platform;  // (line, station, layer)
  for (int l = 0; l < L; ++l) {
    auto& stops = line_stops[l];
    std::sort(stops.begin(), stops.end());
    for (int layer = 0; layer < 2; ++layer) {
      for (const auto& [pos, s] : stops) {
        const Station& st = net.stations[s];
        platform[{l, s, layer}] = add_node({NodeRole::Platform, st.town, s, l, st.x, st.y},
                                           "plat_l" + std::to_string(l) + "_s" + std::to_string(s) +
                                               "_" + std::to_string(layer));
      }
      for (std::size_t j = 0; j + 1 < stops.size(); ++j) {
        const Station& a = net.stations[stops[j].second];
        const Station& b = net.stations[stops[j + 1].second];
        const double d = euclid(a.x, a.y, b.x, b.y);
        const double minutes = d / cfg.transit_mph * 60.0;
        const int pa = platform[{l, stops[j].second, layer}];
        const int pb = platform[{l, stops[j + 1].second, layer}];
        g.add_edge(pa, pb, minutes, EdgeKind::Transit, d);
        g.add_edge(pb, pa, minutes, EdgeKind::Transit, d);
      }
    }
    for (const auto& [pos, s] : stops) {
      const Station& st = net.stations[s];
      g.add_edge(st.street, platform[{l, s, 0}], cfg.transit_wait_min, EdgeKind::Wait);
      for (int layer = 0; layer < 2; ++layer) {
        g.add_edge(platform[{l, s, layer}], st.exit, cfg.alight_min, EdgeKind::Walk);
      }
    }
  }
  for (int l = 0; l < L; ++l) {
    for (int l2 = 0; l2 < L; ++l2) {
      if (l == l2) continue;
      for (const auto& [pos, s] : line_stops[l]) {
        auto it = platform.find({l2, s, 1});
        if (it == platform.end()) continue;
        g.add_edge(platform[{l, s, 0}], it->second, cfg.transfer_min, EdgeKind::Transfer);
      }
    }
  }

  auto mod_minutes = [&](double d) {
    return cfg.mod_wait_min + d * cfg.road_detour / cfg.mod_mph * 60.0;
  };
  auto walk_minutes = [&](double d) { return d / cfg.walk_mph * 60.0; };

  // Access from town tracts: walking to nearby stations and MOD to the
  // nearest stations.
  for (int t = 0; t < T; ++t) {
    for (int v : net.town_tracts[t]) {
      const NodeInfo& n = net.nodes[v];
      std::vector<std::pair<double, int>> by_dist;
      for (std::size_t s = 0; s < net.stations.size(); ++s) {
        by_dist.push_back({euclid(n.x, n.y, net.stations[s].x, net.stations[s].y),
                           static_cast<int>(s)});
      }
      std::sort(by_dist.begin(), by_dist.end());
      for (const auto& [d, s] : by_dist) {
        if (d <= cfg.walk_access_max) {
          g.add_edge(v, net.stations[s].street, std::max(walk_minutes(d), 0.1), EdgeKind::Walk);
        }
      }
      for (int q = 0; q < cfg.mod_access_stations && q < static_cast<int>(by_dist.size()); ++q) {
        const auto [d, s] = by_dist[q];
        g.add_edge(v, net.stations[s].street, mod_minutes(d), EdgeKind::Mod, d * cfg.road_detour);
      }
    }
  }
  // Egress: walk to core tracts and nearby town tracts, MOD last mile within
  // the station's town.
  for (std::size_t s = 0; s < net.stations.size(); ++s) {
    const Station& st = net.stations[s];
    for (int v = 0; v < static_cast<int>(net.nodes.size()); ++v) {
      const NodeInfo& n = net.nodes[v];
      if (n.role != NodeRole::Tract) continue;
      const double d = euclid(n.x, n.y, st.x, st.y);
      if (d <= cfg.walk_egress_max) {
        g.add_edge(st.exit, v, std::max(walk_minutes(d), 0.1), EdgeKind::Walk);
      } else if (st.town >= 0 && n.town == st.town) {
        g.add_edge(st.exit, v, mod_minutes(d), EdgeKind::Mod, d * cfg.road_detour);
      }
    }
  }
  for (int v : net.core_tracts) {
    const NodeInfo& n = net.nodes[v];
    int best = 0;
    double bd = 1e300;
    for (std::size_t s = 0; s < net.stations.size(); ++s) {
      const double d = euclid(n.x, n.y, net.stations[s].x, net.stations[s].y);
      if (d < bd) {
        bd = d;
        best = static_cast<int>(s);
      }
    }
    if (bd > cfg.walk_egress_max) {
      g.add_edge(net.stations[best].exit, v, std::max(walk_minutes(bd), 0.1), EdgeKind::Walk);
    }
  }

  // Direct MOD between tracts: to every core tract and to tracts of the same
  // or an adjacent town. Coverage thins the local edges with its own stream.
  std::mt19937_64 coverage_rng(cfg.seed ^ 0x5bd1e995ULL);
  std::uniform_real_distribution<double> keep(0.0, 1.0);
  for (int t = 0; t < T; ++t) {
    for (int v : net.town_tracts[t]) {
      const NodeInfo& a = net.nodes[v];
      for (int w : net.core_tracts) {
        const NodeInfo& b = net.nodes[w];
        const double d = euclid(a.x, a.y, b.x, b.y);
        g.add_edge(v, w, mod_minutes(d), EdgeKind::Mod, d * cfg.road_detour);
      }
      for (int t2 : {t, (t + 1) % T, (t + T - 1) % T}) {
        if (t2 != t && T == 2 && t2 == (t + T - 1) % T) continue;
        for (int w : net.town_tracts[t2]) {
          if (w == v) continue;
          const bool kept = keep(coverage_rng) < cfg.mod_edge_coverage;
          if (!kept) continue;
          const NodeInfo& b = net.nodes[w];
          const double d = euclid(a.x, a.y, b.x, b.y);
          g.add_edge(v, w, mod_minutes(d), EdgeKind::Mod, d * cfg.road_detour);
        }
      }
    }
  }
  return net;
}

// Fastest route per mode for each OD pair. Routes are found with Yen's
// algorithm over the full network; a mode missing from the k best paths is
// searched on a mode-filtered network.
inline std::vector<ChoiceSet> build_choice_sets(const CaseNetwork& net,
                                                const std::vector<OdDemand>& ods,
                                                const SyntheticConfig& cfg,
                                                std::vector<std::string>* warnings = nullptr) {
  const RoutingGraph& g = net.graph;
  auto is_tract = [&](int v) { return net.nodes[v].role == NodeRole::Tract; };
  const EdgeFilter transit_only = [](const GraphEdge& e) { return e.kind != EdgeKind::Mod; };
  const EdgeFilter mod_only = [](const GraphEdge& e) { return e.kind == EdgeKind::Mod; };
  const EdgeFilter no_direct_mod = [&](const GraphEdge& e) {
    return !(e.kind == EdgeKind::Mod && is_tract(e.from) && is_tract(e.to));
  };

  std::vector<ChoiceSet> out;
  for (const OdDemand& od : ods) {
    ChoiceSet cs;
    cs.od = od;
    const NodeInfo& a = net.nodes[od.origin];
    const NodeInfo& b = net.nodes[od.destination];
    cs.drive_miles = euclid(a.x, a.y, b.x, b.y) * cfg.road_detour;
    cs.drive_minutes = cs.drive_miles / cfg.drive_mph * 60.0;

    std::map<RouteMode, CandidateRoute> best;
    std::set<std::vector<int>> seen;
    auto offer = [&](const std::vector<Path>& paths) {
      for (const Path& p : paths) {
        const auto mode = classify(g, p);
        if (!mode) continue;
        if (!seen.insert(route_signature(net, p, *mode)).second) continue;
        if (!best.count(*mode)) best[*mode] = describe_route(g, p, *mode);
      }
    };
    try {
      offer(yen_k_shortest(g, od.origin, od.destination, cfg.k_paths));
    } catch (const NoPath&) {
    }
    if (!best.count(RouteMode::TransitOnly)) {
      if (auto p = shortest_path(g, od.origin, od.destination, transit_only)) offer({*p});
    }
    if (!best.count(RouteMode::ModOnly)) {
      if (auto p = shortest_path(g, od.origin, od.destination, mod_only)) offer({*p});
    }
    if (!best.count(RouteMode::Hybrid)) {
      try {
        offer(yen_k_shortest(g, od.origin, od.destination, cfg.k_paths, no_direct_mod));
      } catch (const NoPath&) {
      }
    }
    for (RouteMode m : {RouteMode::TransitOnly, RouteMode::ModOnly, RouteMode::Hybrid}) {
      if (best.count(m)) cs.routes.push_back(best[m]);
    }
    if (cs.routes.empty()) {
      if (warnings) {
        warnings->push_back("OD " + g.label(od.origin) + " -> " + g.label(od.destination) +
                            " has no in-system route; dropped");
      }
      continue;
    }
    out.push_back(std::move(cs));
  }
  return out;
}

inline double mode_asc(const ChoiceCoefficients& c, RouteMode m) {
  switch (m) {
    case RouteMode::TransitOnly: return c.transit_asc;
    case RouteMode::ModOnly: return c.mod_asc;
    case RouteMode::Hybrid: return c.hybrid_asc;
  }
  return 0.0;
}

inline void profile_coefficients(const ChoiceCoefficients& c, Profile p, double& time,
                                 double& price) {
  time = c.time;
  price = c.price;
  if (p == Profile::TimeSensitive) {
    time *= 2.0;
    price *= 0.5;
  } else if (p == Profile::PriceSensitive) {
    time *= 0.5;
    price *= 2.0;
  }
}

// Fills route utilities, the outside-option utility and alpha from each
// type's time and price coefficients.
inline void compute_utilities(std::vector<TravelerType>& types,
                              const std::vector<ChoiceSet>& sets,
                              const ChoiceCoefficients& c, const SyntheticConfig& cfg) {
  for (TravelerType& t : types) {
    const ChoiceSet& cs = sets[t.choice_set];
    t.utility.clear();
    for (const CandidateRoute& r : cs.routes) {
      t.utility.push_back(mode_asc(c, r.mode) + t.time_coef * r.minutes);
    }
    const double cost = cfg.gas_per_mile * cs.drive_miles + cfg.parking_cost;
    t.outside_utility = c.drive_asc + t.time_coef * cs.drive_minutes + t.alpha * cost;
  }
}

inline void assign_utilities(std::vector<TravelerType>& types,
                             const std::vector<ChoiceSet>& sets,
                             const SyntheticConfig& cfg) {
  for (TravelerType& t : types) {
    profile_coefficients(cfg.coefficients, t.profile, t.time_coef, t.alpha);
  }
  compute_utilities(types, sets, cfg.coefficients, cfg);
}

// Scales each type's price coefficient by 1 / (its town's income ratio),
// after normalizing the ratios to a demand-weighted mean of one. Returns the
// normalized ratios.
inline std::vector<double> apply_income_awareness(std::vector<TravelerType>& types,
                                                  const std::vector<ChoiceSet>& sets,
                                                  const std::vector<double>& ratios,
                                                  const SyntheticConfig& cfg) {
  double num = 0.0, den = 0.0;
  for (const TravelerType& t : types) {
    num += t.count * ratios.at(t.town);
    den += t.count;
  }
  const double mean = den > 0.0 ? num / den : 1.0;
  std::vector<double> norm(ratios.size());
  for (std::size_t k = 0; k < ratios.size(); ++k) norm[k] = ratios[k] / mean;
  for (TravelerType& t : types) {
    double time = 0.0, price = 0.0;
    profile_coefficients(cfg.coefficients, t.profile, time, price);
    t.time_coef = time;
    t.alpha = price / norm[t.town];
  }
  compute_utilities(types, sets, cfg.coefficients, cfg);
  return norm;
}

struct GeneratedCase {
  Instance instance;
  std::vector<std::string> warnings;
};

inline GeneratedCase generate(const SyntheticConfig& cfg) {
  cfg.check();
  GeneratedCase out;
  std::mt19937_64 rng(cfg.seed);
  const CaseNetwork net = build_network(cfg, rng);
  const int T = cfg.town_count;

  // Demand: every town tract commutes to a few core tracts and to a tract of
  // its own or a neighboring town.
  std::lognormal_distribution<double> size(0.0, cfg.demand_sigma);
  std::vector<OdDemand> ods;
  for (int t = 0; t < T; ++t) {
    std::vector<int> local;
    for (int t2 : {t, (t + 1) % T, (t + T - 1) % T}) {
      for (int w : net.town_tracts[t2]) {
        if (std::find(local.begin(), local.end(), w) == local.end()) local.push_back(w);
      }
    }
    for (int v : net.town_tracts[t]) {
      std::vector<int> core = net.core_tracts;
      std::shuffle(core.begin(), core.end(), rng);
      const int nc = std::min<int>(cfg.core_destinations_per_tract, static_cast<int>(core.size()));
      for (int q = 0; q < nc; ++q) {
        ods.push_back({v, core[q], t, -1, cfg.demand_scale * size(rng)});
      }
      std::vector<int> cand;
      for (int w : local) {
        if (w != v) cand.push_back(w);
      }
      std::shuffle(cand.begin(), cand.end(), rng);
      const int nl = std::min<int>(cfg.local_destinations_per_tract, static_cast<int>(cand.size()));
      for (int q = 0; q < nl; ++q) {
        ods.push_back({v, cand[q], t, net.nodes[cand[q]].town, cfg.demand_scale * size(rng)});
      }
    }
  }
  const std::vector<ChoiceSet> sets = build_choice_sets(net, ods, cfg, &out.warnings);

  const bool income_aware = !cfg.income_ratios.empty();
  std::vector<TravelerType> types;
  for (std::size_t c = 0; c < sets.size(); ++c) {
    if (income_aware) {
      TravelerType t;
      t.choice_set = static_cast<int>(c);
      t.profile = Profile::Intermediate;
      t.count = sets[c].od.count;
      t.town = sets[c].od.origin_town;
      types.push_back(t);
      continue;
    }
    for (Profile p : {Profile::TimeSensitive, Profile::Intermediate, Profile::PriceSensitive}) {
      const double share = cfg.profile_mix[static_cast<int>(p)];
      if (!(share > 0.0)) continue;
      TravelerType t;
      t.choice_set = static_cast<int>(c);
      t.profile = p;
      t.count = sets[c].od.count * share;
      t.town = sets[c].od.origin_town;
      types.push_back(t);
    }
  }
  assign_utilities(types, sets, cfg);
  std::vector<double> ratios;
  if (income_aware) ratios = apply_income_awareness(types, sets, cfg.income_ratios, cfg);

  Instance& inst = out.instance;
  inst.name = cfg.name;
  inst.operators = {{0, OperatorKind::Transit}, {1, OperatorKind::Mod}};
  inst.bounds = cfg.bounds;
  inst.weights = cfg.weights;
  for (int t = 0; t < T; ++t) {
    Town town;
    town.id = t;
    town.name = "town" + std::to_string(t);
    if (income_aware) town.income_ratio = ratios[t];
    inst.towns.push_back(town);
  }

  // Routes are shared by all types of one OD; categories are town pairs.
  std::map<std::pair<int, int>, int> category_of;
  for (const ChoiceSet& cs : sets) {
    for (const CandidateRoute& r : cs.routes) {
      if (r.mode == RouteMode::TransitOnly) continue;
      category_of.emplace(std::make_pair(cs.od.origin_town, cs.od.destination_town), 0);
    }
  }
  int next_category = 0;
  for (auto& [pair, id] : category_of) {
    id = next_category++;
    DiscountCategory c;
    c.id = id;
    c.label = "town" + std::to_string(pair.first) + "->" +
              (pair.second < 0 ? std::string("core") : "town" + std::to_string(pair.second));
    inst.categories.push_back(c);
  }
  std::vector<std::vector<int>> route_ids(sets.size());
  for (std::size_t c = 0; c < sets.size(); ++c) {
    const ChoiceSet& cs = sets[c];
    for (const CandidateRoute& r : cs.routes) {
      Route route;
      route.id = static_cast<int>(inst.routes.size());
      if (r.mode != RouteMode::ModOnly) {
        route.operators.push_back(0);
        route.distance[0] = r.transit_miles;
      }
      if (r.mode != RouteMode::TransitOnly) {
        route.operators.push_back(1);
        route.distance[1] = r.mod_miles;
        const int cat = category_of.at({cs.od.origin_town, cs.od.destination_town});
        route.category = cat;
        inst.categories[cat].routes.push_back(route.id);
      }
      route_ids[c].push_back(route.id);
      inst.routes.push_back(std::move(route));
    }
  }
  for (const TravelerType& t : types) {
    PassengerType p;
    p.id = static_cast<int>(inst.passenger_types.size());
    p.count = t.count;
    p.routes = route_ids[t.choice_set];
    p.utility = t.utility;
    p.outside_utility = t.outside_utility;
    p.price_sensitivity = t.alpha;
    p.drive_distance = sets[t.choice_set].drive_miles;
    p.town = t.town;
    inst.passenger_types.push_back(std::move(p));
  }
  return out;
}

}  // namespace alliance
