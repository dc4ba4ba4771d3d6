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

#include <string>
#include <vector>

#include "alliance/casegen.hpp"
#include "alliance/instance_json.hpp"

namespace alliance {

namespace detail {

template <typename T>
void optional_field(const json& obj, const char* key, T& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw SchemaError(std::string("field '") + key + "' in config has the wrong type");
  }
}

}  // namespace detail

// Every field is optional and defaults to the SyntheticConfig value.
inline SyntheticConfig synthetic_config_from_json(const json& j,
                                                  std::vector<std::string>* warnings = nullptr) {
  if (!j.is_object()) throw SchemaError("config: expected an object");
  detail::Reader rd(warnings);
  rd.check_known(j, "config",
                 {"name", "seed", "town_count", "tracts_per_town", "core_tracts",
                  "transit_line_count", "ring_min_radius", "ring_max_radius", "town_radius",
                  "core_radius", "hub_spacing", "station_catchment", "demand_scale",
                  "demand_sigma", "speeds", "waits", "walk_access_max", "walk_egress_max",
                  "mod_access_stations", "road_detour", "gas_per_mile", "parking_cost",
                  "core_destinations_per_tract", "local_destinations_per_tract", "profile_mix",
                  "income_ratios", "mod_edge_coverage", "k_paths", "bounds", "weights"});
  SyntheticConfig c;
  using detail::optional_field;
  optional_field(j, "name", c.name);
  optional_field(j, "seed", c.seed);
  optional_field(j, "town_count", c.town_count);
  optional_field(j, "tracts_per_town", c.tracts_per_town);
  optional_field(j, "core_tracts", c.core_tracts);
  optional_field(j, "transit_line_count", c.transit_line_count);
  optional_field(j, "ring_min_radius", c.ring_min_radius);
  optional_field(j, "ring_max_radius", c.ring_max_radius);
  optional_field(j, "town_radius", c.town_radius);
  optional_field(j, "core_radius", c.core_radius);
  optional_field(j, "hub_spacing", c.hub_spacing);
  optional_field(j, "station_catchment", c.station_catchment);
  optional_field(j, "demand_scale", c.demand_scale);
  optional_field(j, "demand_sigma", c.demand_sigma);
  if (auto it = j.find("speeds"); it != j.end()) {
    rd.check_known(*it, "config.speeds", {"transit", "mod", "drive", "walk"});
    optional_field(*it, "transit", c.transit_mph);
    optional_field(*it, "mod", c.mod_mph);
    optional_field(*it, "drive", c.drive_mph);
    optional_field(*it, "walk", c.walk_mph);
  }
  if (auto it = j.find("waits"); it != j.end()) {
    rd.check_known(*it, "config.waits", {"transit", "mod", "transfer", "alight"});
    optional_field(*it, "transit", c.transit_wait_min);
    optional_field(*it, "mod", c.mod_wait_min);
    optional_field(*it, "transfer", c.transfer_min);
    optional_field(*it, "alight", c.alight_min);
  }
  optional_field(j, "walk_access_max", c.walk_access_max);
  optional_field(j, "walk_egress_max", c.walk_egress_max);
  optional_field(j, "mod_access_stations", c.mod_access_stations);
  optional_field(j, "road_detour", c.road_detour);
  optional_field(j, "gas_per_mile", c.gas_per_mile);
  optional_field(j, "parking_cost", c.parking_cost);
  optional_field(j, "core_destinations_per_tract", c.core_destinations_per_tract);
  optional_field(j, "local_destinations_per_tract", c.local_destinations_per_tract);
  optional_field(j, "profile_mix", c.profile_mix);
  optional_field(j, "income_ratios", c.income_ratios);
  optional_field(j, "mod_edge_coverage", c.mod_edge_coverage);
  optional_field(j, "k_paths", c.k_paths);
  if (auto it = j.find("bounds"); it != j.end()) {
    rd.check_known(*it, "config.bounds",
                   {"beta0_min", "beta0_max", "betaDelta_min", "betaDelta_max", "Lambda_min",
                    "Lambda_max"});
    optional_field(*it, "beta0_min", c.bounds.base_min);
    optional_field(*it, "beta0_max", c.bounds.base_max);
    optional_field(*it, "betaDelta_min", c.bounds.markup_min);
    optional_field(*it, "betaDelta_max", c.bounds.markup_max);
    optional_field(*it, "Lambda_min", c.bounds.discount_min);
    optional_field(*it, "Lambda_max", c.bounds.discount_max);
  }
  if (auto it = j.find("weights"); it != j.end()) {
    rd.check_known(*it, "config.weights", {"mu_pax", "mu_rev", "mu_vmt"});
    optional_field(*it, "mu_pax", c.weights.pax);
    optional_field(*it, "mu_rev", c.weights.rev);
    optional_field(*it, "mu_vmt", c.weights.vmt);
  }
  c.check();
  return c;
}

inline SyntheticConfig load_synthetic_config(const std::string& path,
                                             std::vector<std::string>* warnings = nullptr) {
  return synthetic_config_from_json(parse_json_text(read_text_file(path), path), warnings);
}

}  // namespace alliance
