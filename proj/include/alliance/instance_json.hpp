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
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "alliance/model.hpp"

namespace alliance {

using json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";

namespace detail {

class Reader {
 public:
  explicit Reader(std::vector<std::string>* warnings) : warnings_(warnings) {}

  const json& field(const json& obj, const std::string& path,
                    const std::string& key) const {
    if (!obj.is_object()) throw SchemaError(path + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) {
      throw SchemaError("missing field '" + key + "' in " + path);
    }
    return *it;
  }

  double number(const json& obj, const std::string& path,
                const std::string& key) const {
    const json& v = field(obj, path, key);
    if (!v.is_number()) {
      throw SchemaError("field '" + key + "' in " + path + " must be a number");
    }
    return v.get<double>();
  }

  int integer(const json& obj, const std::string& path,
              const std::string& key) const {
    const json& v = field(obj, path, key);
    if (!v.is_number_integer()) {
      throw SchemaError("field '" + key + "' in " + path +
                        " must be an integer");
    }
    return v.get<int>();
  }

  const json& array(const json& obj, const std::string& path,
                    const std::string& key) const {
    const json& v = field(obj, path, key);
    if (!v.is_array()) {
      throw SchemaError("field '" + key + "' in " + path + " must be an array");
    }
    return v;
  }

  void check_known(const json& obj, const std::string& path,
                   std::initializer_list<const char*> known) const {
    if (!obj.is_object()) return;
    std::set<std::string> names(known.begin(), known.end());
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (!names.count(it.key()) && warnings_) {
        warnings_->push_back("unknown field '" + it.key() + "' in " + path +
                             " ignored");
      }
    }
  }

 private:
  std::vector<std::string>* warnings_;
};

inline std::vector<int> int_list(const json& v, const std::string& what) {
  std::vector<int> out;
  for (const json& e : v) {
    if (!e.is_number_integer()) throw SchemaError(what + " must hold integers");
    out.push_back(e.get<int>());
  }
  return out;
}

}  // namespace detail

inline json to_json(const FareVector& y) {
  json j = json::object();
  for (FareAxis a : kFareAxes) j[std::string(to_string(a))] = y[a];
  return j;
}

inline FareVector fares_from_json(const json& j) {
  detail::Reader rd(nullptr);
  FareVector y;
  for (FareAxis a : kFareAxes) y[a] = rd.number(j, "fares", std::string(to_string(a)));
  return y;
}

inline json to_json(const ObjectiveWeights& w) {
  return json{{"mu_pax", w.pax}, {"mu_rev", w.rev}, {"mu_vmt", w.vmt}};
}

inline json to_json(const Instance& inst) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = inst.name;
  j["operators"] = json::array();
  for (const Operator& op : inst.operators) {
    j["operators"].push_back({{"id", op.id}, {"kind", std::string(to_string(op.kind))}});
  }
  const FareBounds& b = inst.bounds;
  j["bounds"] = {{"beta0_min", b.base_min},         {"beta0_max", b.base_max},
                 {"betaDelta_min", b.markup_min},   {"betaDelta_max", b.markup_max},
                 {"Lambda_min", b.discount_min},    {"Lambda_max", b.discount_max}};
  j["weights"] = to_json(inst.weights);
  j["routes"] = json::array();
  for (const Route& r : inst.routes) {
    json jr = {{"id", r.id}, {"operators", r.operators}};
    json d = json::object();
    for (const auto& [k, miles] : r.distance) d[std::to_string(k)] = miles;
    jr["Delta"] = d;
    if (r.category) jr["category"] = *r.category;
    j["routes"].push_back(jr);
  }
  j["categories"] = json::array();
  for (const DiscountCategory& c : inst.categories) {
    json jc = {{"id", c.id}, {"routes", c.routes}};
    if (!c.label.empty()) jc["label"] = c.label;
    j["categories"].push_back(jc);
  }
  j["passenger_types"] = json::array();
  for (const PassengerType& t : inst.passenger_types) {
    json jt = {{"id", t.id},       {"N", t.count},
               {"routes", t.routes}, {"u", t.utility},
               {"u0", t.outside_utility}, {"alpha", t.price_sensitivity},
               {"Delta0", t.drive_distance}};
    if (t.town) jt["town"] = *t.town;
    j["passenger_types"].push_back(jt);
  }
  if (!inst.towns.empty()) {
    j["towns"] = json::array();
    for (const Town& t : inst.towns) {
      json jt = {{"id", t.id}, {"name", t.name}};
      if (t.income_ratio) jt["income_ratio"] = *t.income_ratio;
      j["towns"].push_back(jt);
    }
  }
  return j;
}

// Parses an instance document. Unknown fields are reported through
// `warnings` and otherwise ignored.
inline Instance instance_from_json(const json& j,
                                   std::vector<std::string>* warnings = nullptr) {
  detail::Reader rd(warnings);
  if (!j.is_object()) throw SchemaError("instance: expected an object");
  const json& version = rd.field(j, "instance", "schema_version");
  if (!version.is_string() || version.get<std::string>() != kSchemaVersion) {
    throw SchemaError("schema_version mismatch: expected \"" +
                      std::string(kSchemaVersion) + "\", got " + version.dump());
  }
  rd.check_known(j, "instance",
                 {"schema_version", "name", "operators", "bounds", "weights",
                  "routes", "categories", "passenger_types", "towns"});
  Instance inst;
  if (j.contains("name") && j["name"].is_string()) inst.name = j["name"];

  for (const json& jo : rd.array(j, "instance", "operators")) {
    rd.check_known(jo, "operators[]", {"id", "kind"});
    Operator op;
    op.id = rd.integer(jo, "operators[]", "id");
    const json& kind = rd.field(jo, "operators[]", "kind");
    if (kind == "transit") {
      op.kind = OperatorKind::Transit;
    } else if (kind == "mod") {
      op.kind = OperatorKind::Mod;
    } else {
      throw SchemaError("operators[].kind must be \"transit\" or \"mod\"");
    }
    inst.operators.push_back(op);
  }

  const json& jb = rd.field(j, "instance", "bounds");
  rd.check_known(jb, "bounds",
                 {"beta0_min", "beta0_max", "betaDelta_min", "betaDelta_max",
                  "Lambda_min", "Lambda_max"});
  inst.bounds.base_min = rd.number(jb, "bounds", "beta0_min");
  inst.bounds.base_max = rd.number(jb, "bounds", "beta0_max");
  inst.bounds.markup_min = rd.number(jb, "bounds", "betaDelta_min");
  inst.bounds.markup_max = rd.number(jb, "bounds", "betaDelta_max");
  inst.bounds.discount_min = rd.number(jb, "bounds", "Lambda_min");
  inst.bounds.discount_max = rd.number(jb, "bounds", "Lambda_max");

  const json& jw = rd.field(j, "instance", "weights");
  rd.check_known(jw, "weights", {"mu_pax", "mu_rev", "mu_vmt"});
  inst.weights.pax = rd.number(jw, "weights", "mu_pax");
  inst.weights.rev = rd.number(jw, "weights", "mu_rev");
  inst.weights.vmt = rd.number(jw, "weights", "mu_vmt");

  for (const json& jr : rd.array(j, "instance", "routes")) {
    rd.check_known(jr, "routes[]", {"id", "operators", "Delta", "category"});
    Route r;
    r.id = rd.integer(jr, "routes[]", "id");
    const std::string path = "routes[id=" + std::to_string(r.id) + "]";
    r.operators = detail::int_list(rd.array(jr, path, "operators"),
                                   path + ".operators");
    const json& d = rd.field(jr, path, "Delta");
    if (!d.is_object()) throw SchemaError(path + ".Delta must be an object");
    for (auto it = d.begin(); it != d.end(); ++it) {
      int k = 0;
      try {
        std::size_t used = 0;
        k = std::stoi(it.key(), &used);
        if (used != it.key().size()) throw std::invalid_argument("key");
      } catch (const std::exception&) {
        throw SchemaError(path + ".Delta keys must be operator ids");
      }
      if (!it.value().is_number()) {
        throw SchemaError(path + ".Delta values must be numbers");
      }
      r.distance[k] = it.value().get<double>();
    }
    if (jr.contains("category") && !jr["category"].is_null()) {
      r.category = rd.integer(jr, path, "category");
    }
    inst.routes.push_back(std::move(r));
  }

  for (const json& jc : rd.array(j, "instance", "categories")) {
    rd.check_known(jc, "categories[]", {"id", "routes", "label"});
    DiscountCategory c;
    c.id = rd.integer(jc, "categories[]", "id");
    c.routes = detail::int_list(rd.array(jc, "categories[]", "routes"),
                                "categories[].routes");
    if (jc.contains("label") && jc["label"].is_string()) c.label = jc["label"];
    inst.categories.push_back(std::move(c));
  }

  for (const json& jt : rd.array(j, "instance", "passenger_types")) {
    rd.check_known(jt, "passenger_types[]",
                   {"id", "N", "routes", "u", "u0", "alpha", "Delta0", "town"});
    PassengerType t;
    t.id = rd.integer(jt, "passenger_types[]", "id");
    const std::string path = "passenger_types[id=" + std::to_string(t.id) + "]";
    t.count = rd.number(jt, path, "N");
    t.routes = detail::int_list(rd.array(jt, path, "routes"), path + ".routes");
    for (const json& u : rd.array(jt, path, "u")) {
      if (!u.is_number()) throw SchemaError(path + ".u must hold numbers");
      t.utility.push_back(u.get<double>());
    }
    t.outside_utility = rd.number(jt, path, "u0");
    t.price_sensitivity = rd.number(jt, path, "alpha");
    t.drive_distance = rd.number(jt, path, "Delta0");
    if (jt.contains("town") && !jt["town"].is_null()) {
      t.town = rd.integer(jt, path, "town");
    }
    inst.passenger_types.push_back(std::move(t));
  }

  if (j.contains("towns")) {
    for (const json& jt : rd.array(j, "instance", "towns")) {
      rd.check_known(jt, "towns[]", {"id", "name", "income_ratio"});
      Town t;
      t.id = rd.integer(jt, "towns[]", "id");
      if (jt.contains("name") && jt["name"].is_string()) t.name = jt["name"];
      if (jt.contains("income_ratio") && !jt["income_ratio"].is_null()) {
        t.income_ratio = rd.number(jt, "towns[]", "income_ratio");
      }
      inst.towns.push_back(std::move(t));
    }
  }
  return inst;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write " + path);
  out << text;
  if (!out) throw std::ios_base::failure("write failed for " + path);
}

inline json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i + 1 < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SchemaError(source + ":" + std::to_string(line) + ":" +
                      std::to_string(col) + ": " + e.what());
  }
}

inline Instance load_instance(const std::string& path,
                              std::vector<std::string>* warnings = nullptr) {
  const std::string text = read_text_file(path);
  return instance_from_json(parse_json_text(text, path), warnings);
}

inline void save_instance(const Instance& inst, const std::string& path) {
  write_text_file(path, to_json(inst).dump(1) + "\n");
}

// FNV-1a over the canonical compact serialization.
inline std::uint64_t instance_hash(const Instance& inst) {
  const std::string s = to_json(inst).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string instance_hash_hex(const Instance& inst) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(instance_hash(inst)));
  return buf;
}

}  // namespace alliance
