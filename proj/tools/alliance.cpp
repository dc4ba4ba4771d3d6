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
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "alliance.hpp"

namespace {

using namespace alliance;

enum ExitCode { kOk = 0, kFailure = 1, kValidation = 2, kNoResult = 3, kIo = 4 };

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

void emit_error(const char* kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << "\n";
}

void emit_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

std::uint64_t default_seed() {
  if (const char* s = std::getenv("ALLIANCE_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s, &end, 10);
    if (end && *end == '\0' && end != s) return v;
    throw UsageError(std::string("ALLIANCE_SEED is not an unsigned integer: ") + s);
  }
  return 0;
}

Instance read_instance(const std::string& path) {
  std::vector<std::string> warnings;
  Instance inst = load_instance(path, &warnings);
  emit_warnings(warnings);
  return inst;
}

FareVector parse_fares(const std::string& text) {
  if (text.find(',') != std::string::npos) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      char* end = nullptr;
      const double d = std::strtod(item.c_str(), &end);
      if (end == item.c_str() || *end != '\0') throw UsageError("bad fare value '" + item + "'");
      v.push_back(d);
    }
    if (v.size() != kFareDims) {
      throw UsageError("--fares needs five values: beta0_transit,betaDelta_transit,"
                       "beta0_mod,betaDelta_mod,Lambda");
    }
    return FareVector::make(v[0], v[1], v[2], v[3], v[4]);
  }
  return fares_from_json(parse_json_text(read_text_file(text), text));
}

ObjectiveWeights parse_weights(const std::string& text) {
  const auto grid = parse_weight_grid(text);
  if (grid.size() != 1) throw UsageError("expected a single weight vector pax:rev:vmt");
  return grid[0];
}

struct BudgetFlags {
  double seconds = 60.0;
  double evaluations = 0.0;
  Budget budget() const {
    return evaluations > 0.0 ? Budget::evaluations(evaluations) : Budget::seconds(seconds);
  }
};

void add_budget_flags(CLI::App* cmd, BudgetFlags& b) {
  cmd->add_option("--time-limit", b.seconds, "Budget in seconds")->capture_default_str();
  cmd->add_option("--eval-budget", b.evaluations,
                  "Budget in second-stage evaluations (overrides --time-limit)");
}

void check_fares(const Model& m, const FareVector& y) {
  if (!within_bounds(m.bounds(), y)) throw UsageError("fares lie outside the instance bounds");
}

json shares_json(const Model& m, const ShareTable& s) {
  json out = json::array();
  for (std::size_t i = 0; i < m.types().size(); ++i) {
    json routes = json::array();
    for (std::size_t j = 0; j < m.types()[i].routes.size(); ++j) {
      routes.push_back({{"route", m.routes()[m.types()[i].routes[j]].id},
                        {"share", s.share[i][j]}});
    }
    out.push_back({{"type", m.types()[i].id},
                   {"outside", s.outside_share[i]},
                   {"routes", routes}});
  }
  return out;
}

std::string trajectory_csv(const std::vector<TrajectoryLog>& logs) {
  std::string out = "trajectory,pass,direction,welfare";
  for (FareAxis a : kFareAxes) out += "," + std::string(to_string(a));
  out += "\n";
  char buf[128];
  for (std::size_t t = 0; t < logs.size(); ++t) {
    for (const AcceptedPoint& p : logs[t].accepted) {
      std::snprintf(buf, sizeof buf, "%zu,%d,%s,%.12g", t, p.pass, p.direction.c_str(), p.welfare);
      out += buf;
      for (double v : p.fares.values) {
        std::snprintf(buf, sizeof buf, ",%.12g", v);
        out += buf;
      }
      out += "\n";
    }
  }
  return out;
}

std::string history_csv(const std::vector<BoHistoryEntry>& h, const FareBounds& b) {
  std::string out = "iteration";
  for (FareAxis a : kFareAxes) out += "," + std::string(to_string(a));
  out += ",welfare,best\n";
  char buf[128];
  for (const BoHistoryEntry& e : h) {
    out += std::to_string(e.iteration);
    for (double v : from_unit_cube(b, e.point).values) {
      std::snprintf(buf, sizeof buf, ",%.12g", v);
      out += buf;
    }
    std::snprintf(buf, sizeof buf, ",%.12g,%.12g\n", e.value, e.best);
    out += buf;
  }
  return out;
}

std::vector<Algorithm> parse_algorithms(const std::string& text) {
  std::vector<Algorithm> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto a = parse_algorithm(item);
    if (!a) throw UsageError("unknown algorithm '" + item + "'");
    out.push_back(*a);
  }
  if (out.empty()) throw UsageError("no algorithms given");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fare design for a transit and mobility-on-demand alliance"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads, "Worker threads")->capture_default_str();

  std::string instance_path, out_path, fares_text, activations_text = "auto", weights_text;
  std::uint64_t seed = 0;
  bool seed_given = false;
  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option_function<std::uint64_t>(
        "--seed", [&](const std::uint64_t& s) { seed = s; seed_given = true; },
        "Random seed (default: ALLIANCE_SEED or 0)");
  };
  auto add_instance = [&](CLI::App* cmd) {
    cmd->add_option("--instance,-i", instance_path, "Instance JSON")->required();
  };

  // gen
  std::string config_path;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic instance");
  gen->add_option("--config", config_path, "Generator config JSON");
  gen->add_option("--out,-o", out_path, "Output instance JSON")->required();
  add_seed(gen);

  // validate
  auto* val = app.add_subcommand("validate", "Check an instance");
  add_instance(val);

  // eval
  auto* ev_cmd = app.add_subcommand("eval", "Evaluate fares");
  add_instance(ev_cmd);
  ev_cmd->add_option("--fares", fares_text, "Five comma-separated values or a JSON file")
      ->required();
  ev_cmd->add_option("--activations", activations_text, "auto or one 0/1 digit per category")
      ->capture_default_str();
  ev_cmd->add_option("--weights", weights_text, "pax:rev:vmt (default: instance weights)");
  ev_cmd->add_option("--out,-o", out_path, "Output JSON");

  // solve
  std::string algo_text = "sos2cd-mdr", ws_proc = "uniform", traj_csv, hist_csv;
  BudgetFlags budget;
  BudgetFlags ws_budget{0.0, 0.0};
  int anchors = 11;
  double epsilon = 1e-4;
  auto* solve_cmd = app.add_subcommand("solve", "Optimize the fares");
  add_instance(solve_cmd);
  solve_cmd->add_option("--algo", algo_text, "sos2cd|sos2cd-r|sos2cd-md|sos2cd-mdr|bfcd|bo")
      ->capture_default_str();
  add_budget_flags(solve_cmd, budget);
  solve_cmd->add_option("--ws-time", ws_budget.seconds, "Warm-start budget in seconds");
  solve_cmd->add_option("--ws-evals", ws_budget.evaluations, "Warm-start budget in evaluations");
  solve_cmd->add_option("--ws-proc", ws_proc, "uniform|bo")->capture_default_str();
  solve_cmd->add_option("--anchors", anchors, "Anchors per line")->capture_default_str();
  solve_cmd->add_option("--epsilon", epsilon, "Stopping tolerance")->capture_default_str();
  solve_cmd->add_option("--weights", weights_text, "pax:rev:vmt (default: instance weights)");
  solve_cmd->add_option("--out,-o", out_path, "Report JSON");
  solve_cmd->add_option("--trajectory-csv", traj_csv, "Accepted points per trajectory");
  solve_cmd->add_option("--history-csv", hist_csv, "BO history");
  add_seed(solve_cmd);

  // bench
  auto* bench = app.add_subcommand("bench", "Benchmarks");
  bench->require_subcommand(1);
  int trials = 10;
  std::string algos_text = "sos2cd,sos2cd-r,sos2cd-md,sos2cd-mdr,bfcd,bo", csv_path;
  auto* suite = bench->add_subcommand("suite", "All algorithms on shared seeds");
  add_instance(suite);
  suite->add_option("--trials", trials, "Trials")->capture_default_str();
  suite->add_option("--algos", algos_text, "Comma-separated algorithms")->capture_default_str();
  add_budget_flags(suite, budget);
  suite->add_option("--ws-time", ws_budget.seconds, "Warm-start budget in seconds");
  suite->add_option("--ws-evals", ws_budget.evaluations, "Warm-start budget in evaluations");
  suite->add_option("--csv", csv_path, "Per-run CSV");
  suite->add_option("--out,-o", out_path, "Summary JSON");
  add_seed(suite);
  int lines = 100;
  auto* gap = bench->add_subcommand("sos2-gap", "SOS2 line search against a dense scan");
  add_instance(gap);
  gap->add_option("--lines", lines, "Random lines")->capture_default_str();
  gap->add_option("--csv", csv_path, "Per-line CSV");
  gap->add_option("--out,-o", out_path, "Summary JSON");
  add_seed(gap);

  // game
  std::string transit_weights = "0:1:0", mod_weights = "0:1:0";
  int max_rounds = 50;
  double verify_step = 0.05;
  auto* game = app.add_subcommand("game", "Non-cooperative equilibrium by iterated best response");
  add_instance(game);
  game->add_option("--weights-tr,--transit-weights", transit_weights, "pax:rev:vmt")->capture_default_str();
  game->add_option("--weights-mod,--mod-weights", mod_weights, "pax:rev:vmt")->capture_default_str();
  game->add_option("--max-rounds", max_rounds, "Round cap")->capture_default_str();
  game->add_option("--epsilon", epsilon, "Convergence tolerance")->capture_default_str();
  game->add_option("--verify-step", verify_step, "Grid step of the equilibrium check (0 skips)")
      ->capture_default_str();
  game->add_option("--out,-o", out_path, "Output JSON");
  std::string transcript_csv;
  game->add_option("--transcript-csv", transcript_csv, "Round-by-round transcript");
  add_seed(game);

  // allocate
  double f_tr = 0.0, f_mod = 0.0, f_allied = 0.0;
  auto* alloc = app.add_subcommand("allocate", "Split the allied revenue");
  auto* o_tr = alloc->add_option("--f-nc-transit", f_tr, "Non-cooperative transit revenue");
  auto* o_mod = alloc->add_option("--f-nc-mod", f_mod, "Non-cooperative MOD revenue");
  auto* o_al = alloc->add_option("--f-allied", f_allied, "Allied revenue");
  alloc->add_option("--instance,-i", instance_path, "Derive the revenues from this instance");
  std::vector<std::string> result_files;
  alloc->add_option("--from-results", result_files,
                    "Game output JSON and allied solve report JSON")
      ->expected(2);
  add_budget_flags(alloc, budget);
  alloc->add_option("--out,-o", out_path, "Output JSON");
  add_seed(alloc);

  // regime-sweep
  std::string grid_text = "1:0:0;1:0.25:0;1:0.5:0;1:0.75:0;1:1:0;0:1:0;0:0:1";
  auto* sweep = app.add_subcommand("regime-sweep", "Optimize a list of objective weights");
  add_instance(sweep);
  sweep->add_option("--grid", grid_text, "pax:rev:vmt;pax:rev:vmt;...")->capture_default_str();
  sweep->add_option("--algo", algo_text, "Optimizer")->capture_default_str();
  add_budget_flags(sweep, budget);
  sweep->add_option("--out,-o", out_path, "CSV output");
  add_seed(sweep);

  // export-lp
  auto* lp = app.add_subcommand("export-lp", "Write the second-stage MILP in LP format");
  add_instance(lp);
  lp->add_option("--fares", fares_text, "Five comma-separated values or a JSON file")->required();
  lp->add_option("--out,-o", out_path, "LP file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("usage", e.what());
    return kValidation;
  }

  try {
    if (!seed_given) seed = default_seed();
    if (threads < 1) throw UsageError("--threads must be >= 1");

    auto solve_config = [&](Algorithm a) {
      SolveConfig c;
      c.algorithm = a;
      c.budget = budget.budget();
      c.warm_start_budget = ws_budget.budget();
      if (ws_proc == "uniform") {
        c.warm_start = WarmStartProcedure::Uniform;
      } else if (ws_proc == "bo") {
        c.warm_start = WarmStartProcedure::Bayesian;
      } else {
        throw UsageError("--ws-proc must be uniform or bo");
      }
      if (c.warm_start_budget.amount > 0.0 && c.warm_start_budget.unit != c.budget.unit) {
        throw UsageError("warm-start and main budgets must use the same unit");
      }
      c.anchors = anchors;
      c.epsilon = epsilon;
      c.threads = threads;
      c.seed = seed;
      return c;
    };
    auto algorithm = [&](const std::string& s) {
      auto a = parse_algorithm(s);
      if (!a) throw UsageError("unknown algorithm '" + s + "'");
      return *a;
    };

    if (*gen) {
      std::vector<std::string> warnings;
      SyntheticConfig cfg = config_path.empty() ? SyntheticConfig{}
                                                : load_synthetic_config(config_path, &warnings);
      if (seed_given) cfg.seed = seed;
      GeneratedCase c = generate(cfg);
      warnings.insert(warnings.end(), c.warnings.begin(), c.warnings.end());
      emit_warnings(warnings);
      const auto violations = validate(c.instance);
      if (!violations.empty()) throw ValidationError(describe(violations));
      save_instance(c.instance, out_path);
      std::cout << json{{"instance", out_path},
                        {"hash", instance_hash_hex(c.instance)},
                        {"passenger_types", c.instance.passenger_types.size()},
                        {"routes", c.instance.routes.size()},
                        {"categories", c.instance.categories.size()}}
                       .dump()
                << "\n";
      return kOk;
    }

    if (*alloc) {
      AllocationResult r;
      json source;
      if (!result_files.empty()) {
        const json nc = parse_json_text(read_text_file(result_files[0]), result_files[0]);
        const json al = parse_json_text(read_text_file(result_files[1]), result_files[1]);
        try {
          r = allocate(nc.at("revenue").at("transit").get<double>(),
                       nc.at("revenue").at("mod").get<double>(),
                       al.at("revenue").at("transit").get<double>() +
                           al.at("revenue").at("mod").get<double>());
        } catch (const json::exception& e) {
          throw SchemaError(std::string("result files need revenue.transit and revenue.mod: ") +
                            e.what());
        }
        source = {{"noncooperative", result_files[0]}, {"allied", result_files[1]}};
      } else if (instance_path.empty()) {
        if (!*o_tr || !*o_mod || !*o_al) {
          throw UsageError("allocate needs --instance or all of --f-nc-transit, --f-nc-mod, "
                           "--f-allied");
        }
        r = allocate(f_tr, f_mod, f_allied);
        source = "given";
      } else {
        const Model m(read_instance(instance_path));
        const ObjectiveWeights rev{0.0, 1.0, 0.0};
        GameConfig gc;
        gc.seed = seed;
        const IbrResult ne = iterated_best_response(m, OperatorWeights{rev, rev}, gc);
        const ActivationVector none(m.categories().size(), 0);
        SolveConfig sc = solve_config(Algorithm::Sos2CdMdr);
        const RunReport allied = run_and_report(m, rev, sc);
        r = allocate(operator_revenue(m, ne.fares, none, OperatorKind::Transit),
                     operator_revenue(m, ne.fares, none, OperatorKind::Mod),
                     allied.welfare.rev_term);
        source = {{"noncooperative_fares", to_json(ne.fares)},
                  {"noncooperative_converged", ne.converged},
                  {"allied_fares", to_json(allied.fares)}};
      }
      write_output(out_path, json{{"f_nc_transit", r.f_nc_transit},
                                  {"f_nc_mod", r.f_nc_mod},
                                  {"f_allied", r.f_allied},
                                  {"delta", r.delta},
                                  {"phi_transit", r.phi_transit},
                                  {"phi_mod", r.phi_mod},
                                  {"source", source}}
                                     .dump(1) +
                                 "\n");
      return kOk;
    }

    const Instance inst = read_instance(instance_path);
    if (*val) {
      const auto violations = validate(inst);
      if (!violations.empty()) {
        json out = json::array();
        for (const Violation& v : violations) {
          out.push_back({{"entity", v.entity}, {"rule", v.rule}, {"detail", v.detail}});
        }
        std::cout << json{{"valid", false}, {"violations", out}}.dump(1) << "\n";
        return kValidation;
      }
      std::cout << json{{"valid", true}, {"hash", instance_hash_hex(inst)}}.dump() << "\n";
      return kOk;
    }
    const Model m(inst);
    const ObjectiveWeights weights = weights_text.empty() ? m.weights() : parse_weights(weights_text);

    if (*ev_cmd) {
      const FareVector y = parse_fares(fares_text);
      check_fares(m, y);
      SecondStageSolution sol;
      if (activations_text == "auto") {
        sol = solve_exact(m, y, weights);
      } else {
        if (activations_text.size() != m.categories().size()) {
          throw UsageError("--activations needs " + std::to_string(m.categories().size()) +
                           " digits");
        }
        ActivationVector x;
        for (char c : activations_text) {
          if (c != '0' && c != '1') throw UsageError("--activations digits must be 0 or 1");
          x.push_back(c == '1');
        }
        sol = evaluate_activation(m, y, x, weights);
      }
      json acts = json::array();
      for (std::size_t a = 0; a < sol.activations.size(); ++a) {
        acts.push_back({{"category", m.categories()[a].id}, {"active", sol.activations[a] != 0}});
      }
      json prices = json::array();
      for (std::size_t r = 0; r < sol.prices.price.size(); ++r) {
        prices.push_back({{"route", m.routes()[r].id}, {"price", sol.prices.price[r]}});
      }
      json out = {{"fares", to_json(y)},
                  {"weights", to_json(weights)},
                  {"welfare", to_json(sol.welfare)},
                  {"activations", acts},
                  {"prices", prices},
                  {"shares", shares_json(m, sol.shares)},
                  {"revenue",
                   {{"transit", operator_revenue(m, y, sol.activations, OperatorKind::Transit)},
                    {"mod", operator_revenue(m, y, sol.activations, OperatorKind::Mod)}}}};
      write_output(out_path, out.dump(1) + "\n");
      return kOk;
    }

    if (*solve_cmd) {
      const SolveConfig cfg = solve_config(algorithm(algo_text));
      SolveOutcome outcome;
      const RunReport r = run_and_report(m, weights, cfg, &outcome);
      if (!traj_csv.empty()) write_text_file(traj_csv, trajectory_csv(outcome.logs));
      if (!hist_csv.empty()) write_text_file(hist_csv, history_csv(outcome.history, m.bounds()));
      write_output(out_path, to_json(r).dump(1) + "\n");
      return kOk;
    }

    if (*suite) {
      SolveConfig base = solve_config(Algorithm::Bo);
      const BenchSuite b = bench_suite(m, weights, trials, base, parse_algorithms(algos_text));
      if (!csv_path.empty()) write_text_file(csv_path, bench_csv(b));
      json summary = json::array();
      for (const BenchSummary& s : b.summary) {
        summary.push_back({{"algorithm", std::string(to_string(s.algorithm))},
                           {"mean_welfare", s.mean_welfare},
                           {"best_welfare", s.best_welfare},
                           {"worst_welfare", s.worst_welfare},
                           {"mean_surplus_vs_bo_pct", s.mean_surplus_vs_bo_pct}});
      }
      write_output(out_path, json{{"instance_hash", instance_hash_hex(inst)},
                                  {"trials", trials},
                                  {"config", to_json(base)},
                                  {"summary", summary}}
                                     .dump(1) +
                                 "\n");
      return kOk;
    }

    if (*gap) {
      GapConfig gc;
      gc.seed = seed;
      const auto samples = sos2_gap_experiment(m, weights, lines, gc);
      double mean = 0.0, worst = -1e300, best = 1e300;
      std::string csv = "line,direction,anchors,sos2_welfare,line_max,gap\n";
      char buf[256];
      for (std::size_t n = 0; n < samples.size(); ++n) {
        const GapSample& g = samples[n];
        mean += g.gap;
        worst = std::max(worst, g.gap);
        best = std::min(best, g.gap);
        std::snprintf(buf, sizeof buf, "%zu,%s,%d,%.12g,%.12g,%.9g\n", n, g.direction.c_str(),
                      g.anchors, g.sos2_welfare, g.line_max, g.gap);
        csv += buf;
      }
      if (!samples.empty()) mean /= static_cast<double>(samples.size());
      if (!csv_path.empty()) write_text_file(csv_path, csv);
      write_output(out_path, json{{"lines", lines},
                                  {"seed", seed},
                                  {"mean_gap", mean},
                                  {"max_gap", worst},
                                  {"min_gap", best}}
                                     .dump(1) +
                                 "\n");
      return kOk;
    }

    if (*game) {
      GameConfig gc;
      gc.seed = seed;
      gc.max_rounds = max_rounds;
      gc.epsilon = epsilon;
      OperatorWeights ow{parse_weights(transit_weights), parse_weights(mod_weights)};
      const IbrResult r = iterated_best_response(m, ow, gc);
      json transcript = json::array();
      for (const IbrStep& s : r.transcript) {
        transcript.push_back({{"round", s.round},
                              {"operator", std::string(to_string(s.op))},
                              {"objective_before", s.objective_before},
                              {"objective_after", s.objective_after},
                              {"moved", s.moved},
                              {"fares", to_json(s.after)}});
      }
      const ActivationVector none(m.categories().size(), 0);
      json out = {{"fares", to_json(r.fares)},
                  {"objective", {{"transit", r.objective[0]}, {"mod", r.objective[1]}}},
                  {"revenue",
                   {{"transit", operator_revenue(m, r.fares, none, OperatorKind::Transit)},
                    {"mod", operator_revenue(m, r.fares, none, OperatorKind::Mod)}}},
                  {"rounds", r.rounds},
                  {"converged", r.converged},
                  {"seed", seed},
                  {"transcript", transcript}};
      if (!transcript_csv.empty()) {
        std::string csv = "round,operator,objective_before,objective_after,moved";
        for (FareAxis a : kFareAxes) csv += "," + std::string(to_string(a));
        csv += "\n";
        char buf[160];
        for (const IbrStep& s : r.transcript) {
          std::snprintf(buf, sizeof buf, "%d,%s,%.12g,%.12g,%d", s.round,
                        std::string(to_string(s.op)).c_str(), s.objective_before,
                        s.objective_after, s.moved ? 1 : 0);
          csv += buf;
          for (double v : s.after.values) {
            std::snprintf(buf, sizeof buf, ",%.12g", v);
            csv += buf;
          }
          csv += "\n";
        }
        write_text_file(transcript_csv, csv);
      }
      if (verify_step > 0.0) {
        const NeCheck ne = verify_ne(m, r.fares, ow, verify_step, epsilon);
        out["equilibrium_check"] = {{"ok", ne.ok},
                                    {"worst_deviation", ne.worst_deviation},
                                    {"operator", std::string(to_string(ne.op))}};
      }
      write_output(out_path, out.dump(1) + "\n");
      return kOk;
    }

    if (*sweep) {
      const SolveConfig cfg = solve_config(algorithm(algo_text));
      const auto rows = regime_sweep(m, parse_weight_grid(grid_text), cfg);
      write_output(out_path, sweep_csv(rows));
      return kOk;
    }

    if (*lp) {
      const FareVector y = parse_fares(fares_text);
      check_fares(m, y);
      LinearProgram prog = build_second_stage_milp(m, y, weights);
      write_text_file(out_path, write_lp(prog));
      return kOk;
    }
  } catch (const UsageError& e) {
    emit_error("usage", e.what());
    return kValidation;
  } catch (const ValidationError& e) {
    emit_error("validation", e.what());
    return kValidation;
  } catch (const SchemaError& e) {
    emit_error("schema", e.what());
    return kValidation;
  } catch (const NoResult& e) {
    emit_error("no_result", e.what());
    return kNoResult;
  } catch (const std::ios_base::failure& e) {
    emit_error("io", e.what());
    return kIo;
  } catch (const std::invalid_argument& e) {
    emit_error("invalid_argument", e.what());
    return kValidation;
  } catch (const std::exception& e) {
    emit_error("failure", e.what());
    return kFailure;
  }
  return kOk;
}
