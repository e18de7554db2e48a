// Copyright 2026 The coutil Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Exit codes: 0 success, 2 usage error, 3 input
// parse/validation error, 4 enumeration size guard, 1 anything else.

#ifndef COUTIL_CLI_HPP_
#define COUTIL_CLI_HPP_

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coutil/anon_query.hpp"
#include "coutil/coordination.hpp"
#include "coutil/game.hpp"
#include "coutil/io.hpp"
#include "coutil/protocol.hpp"
#include "coutil/simulation.hpp"

namespace coutil::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kInput = 3,
  kGuard = 4,
};

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Options {
  std::string format = "json";
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> horizon;
  std::optional<std::string> policy;
  std::vector<std::string> policies;
  std::string positivity = "ex_post";
  bool events = false;
  std::vector<std::string> paths;
};

namespace detail {

inline Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path.string() + "'");
  out << text;
}

// Prints to stdout, or to the --out file when given.
inline void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out.empty()) {
    out << text;
  } else {
    write_file(o.out, text);
  }
}

inline void require_format(const Options& o,
                           std::initializer_list<const char*> allowed) {
  for (const char* f : allowed) {
    if (o.format == f) return;
  }
  throw UsageError("format '" + o.format + "' is not supported here");
}

inline Json profile_list(const NormalFormGame& g,
                         const std::vector<Profile>& ps) {
  Json j = Json::array();
  for (const auto& p : ps) j.push_back(g.labels(p));
  return j;
}

inline Json game_analysis(const NormalFormGame& g) {
  Json dominant = Json::object();
  for (std::size_t i = 0; i < g.agent_count(); ++i) {
    Json weak = Json::array(), strict = Json::array();
    for (auto a : dominant_strategies(g, i, Dominance::kWeak)) {
      weak.push_back(g.actions(i)[a]);
    }
    for (auto a : dominant_strategies(g, i, Dominance::kStrict)) {
      strict.push_back(g.actions(i)[a]);
    }
    dominant[g.agents()[i]] = {{"weak", weak}, {"strict", strict}};
  }
  return {{"agents", g.agents()},
          {"actions", g.actions()},
          {"pure_nash_equilibria", profile_list(g, pure_nash_equilibria(g))},
          {"dominant_strategies", dominant}};
}

inline Scenario load_scenario(const Options& o) {
  Scenario s = scenario_from_json(read_json(o.paths.at(0)));
  if (o.seed) s.seed = *o.seed;
  if (o.horizon) s.horizon = *o.horizon;
  if (o.policy) {
    s.policy = parse_policy(*o.policy);
    s.policies.clear();
  }
  validate(s);
  return s;
}

inline Json verdict_json(const Protocol1Instance& inst,
                         const Protocol1Verdict& v) {
  return {{"initiator", to_json(inst.initiator)},
          {"responder", to_json(inst.responder)},
          {"query", inst.query},
          {"timeout", inst.timeout},
          {"initiator_action", to_string(v.initiator_action)},
          {"responder_action", to_string(v.responder_action)},
          {"direct_utility", v.initiator_utilities[0]},
          {"expected_forward_utility", v.initiator_utilities[1]},
          {"equilibrium", v.equilibrium},
          {"initiator_maximal", v.initiator_maximal},
          {"responder_maximal", v.responder_maximal},
          {"coutility", to_string(v.level)},
          {"hypotheses",
           {{"responder_entropy_positive", v.responder_entropy_positive},
            {"responder_entropy_after_positive",
             v.responder_entropy_after_positive},
            {"forward_expectation_positive",
             v.forward_expectation_positive}}}};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

inline int analyze_game(const Options& o, std::ostream& out) {
  detail::require_format(o, {"json"});
  const NormalFormGame g = game_from_json(detail::read_json(o.paths.at(0)));
  detail::emit(o, out, detail::game_analysis(g).dump(2) + "\n");
  return kOk;
}

inline int check_protocol(const Options& o, std::ostream& out) {
  detail::require_format(o, {"json"});
  const BayesianGame g = bayesian_game_from_json(detail::read_json(o.paths.at(0)));
  const ProtocolTable p = protocol_from_json(detail::read_json(o.paths.at(1)), g);
  const auto report = classify_protocol(p, g, parse_positivity(o.positivity));
  detail::emit(o, out, to_json(report, p, g).dump(2) + "\n");
  return kOk;
}

// With --out DIR writes metrics.csv, summary.json and (with --events)
// events.jsonl into DIR. Prints the summary, or the metrics CSV with
// --format csv.
inline int simulate(const Options& o, std::ostream& out) {
  detail::require_format(o, {"json", "csv"});
  const Scenario s = detail::load_scenario(o);
  const SimulationResult r = run_simulation(s);
  const std::string summary = summary_json(r.metrics, s).dump(2) + "\n";
  const std::string csv = metrics_csv(r.metrics);
  if (!o.out.empty()) {
    const std::filesystem::path dir(o.out);
    std::filesystem::create_directories(dir);
    detail::write_file(dir / "metrics.csv", csv);
    detail::write_file(dir / "summary.json", summary);
    if (o.events) detail::write_file(dir / "events.jsonl", events_jsonl(r.events));
  }
  out << (o.format == "csv" ? csv : summary);
  return kOk;
}

inline int compare(const Options& o, std::ostream& out) {
  detail::require_format(o, {"json", "csv"});
  const Scenario s = detail::load_scenario(o);
  std::vector<Policy> policies;
  for (const auto& name : o.policies) policies.push_back(parse_policy(name));
  if (policies.empty()) {
    policies = {Policy::kProtocol1, Policy::kAlwaysDirect};
  }
  const auto rows = compare_policies(s, policies);
  std::string text;
  if (o.format == "csv") {
    text = "policy,mean_final_entropy,answered_fraction,mean_delay\n";
    auto opt = [](const std::optional<double>& x) {
      return x ? format_double(*x) : std::string("NA");
    };
    for (const auto& r : rows) {
      text += std::string(to_string(r.policy)) + "," +
              format_double(r.mean_final_entropy) + "," +
              opt(r.answered_fraction) + "," + opt(r.mean_delay) + "\n";
    }
  } else {
    Json arr = Json::array();
    for (const auto& r : rows) {
      arr.push_back(
          {{"policy", to_string(r.policy)},
           {"mean_final_entropy", r.mean_final_entropy},
           {"answered_fraction",
            r.answered_fraction ? Json(*r.answered_fraction) : Json(nullptr)},
           {"mean_delay", r.mean_delay ? Json(*r.mean_delay) : Json(nullptr)}});
    }
    text = Json{{"seed", s.seed},
                {"rng_algorithm", kRngAlgorithm},
                {"rows", arr}}
               .dump(2) +
           "\n";
  }
  detail::emit(o, out, text);
  return kOk;
}

inline Json demo_tcp() {
  const NormalFormGame g = make_tcp_game();
  const BayesianGame bg = BayesianGame::publicly_known(g);
  const auto honest = ProtocolTable::constant(g.profile_of({"Honest", "Honest"}));
  const auto dishonest =
      ProtocolTable::constant(g.profile_of({"Dishonest", "Dishonest"}));
  return {{"game", to_json(g)},
          {"analysis", detail::game_analysis(g)},
          {"honest_protocol", to_json(classify_protocol(honest, bg), honest, bg)},
          {"dishonest_protocol",
           to_json(classify_protocol(dishonest, bg), dishonest, bg)}};
}

inline Json demo_bos() {
  const NormalFormGame g = make_bos(3, 2, 3, 2, 1);
  const BosReport truthful = truthful_bos_report(g);
  const BosReport lying = husband_lies_about_opera(truthful);
  auto run = [&](const BosReport& r) {
    const BosOutcome o = bos_protocol(r);
    Json eqs = Json::array();
    for (const auto& e : o.reported_equilibria) {
      eqs.push_back({to_string(e.first), to_string(e.second)});
    }
    Json j = {{"reported_equilibria", eqs},
              {"husband_br_to_opera", to_string(r.husband_br_to_opera)},
              {"husband_br_to_football", to_string(r.husband_br_to_football)}};
    if (o.selected) {
      const Profile p = to_profile(*o.selected);
      j["selected"] = g.labels(p);
      j["selected_is_nash"] = is_pure_nash(g, p);
      auto u = g.payoff(p);
      j["utilities"] = std::vector<double>(u.begin(), u.end());
    } else {
      j["selected"] = nullptr;
    }
    return j;
  };
  const BayesianGame bg = BayesianGame::publicly_known(g);
  const ProtocolTable table = bos_protocol_table(
      {{"truthful", truthful}},
      {{"truthful", truthful}, {"lies_about_opera", lying}});
  return {{"game", to_json(g)},
          {"truthful", run(truthful)},
          {"husband_lies", run(lying)},
          {"protocol", to_json(table, bg)},
          {"classification", to_json(classify_protocol(table, bg), table, bg)}};
}

inline Json demo_vickrey() {
  const std::vector<double> valuations = {5, 3, 2};
  const AuctionOutcome a = vickrey_auction(valuations, valuations);
  auto check = [](std::vector<double> grid, std::size_t n, Pricing pricing) {
    const auto cx = vickrey_truthfulness_check(grid, grid, n, pricing);
    Json j = {{"grid", grid},
              {"bidders", n},
              {"pricing", pricing == Pricing::kSecondPrice ? "second_price"
                                                            : "first_price"},
              {"truthful_dominant", !cx.has_value()}};
    if (cx) {
      j["counterexample"] = {{"agent", cx->agent},
                             {"valuation", cx->valuation},
                             {"bids", cx->bids},
                             {"alternative_bid", cx->alternative_bid},
                             {"truthful_utility", cx->truthful_utility},
                             {"alternative_utility", cx->alternative_utility}};
    }
    return j;
  };
  std::vector<double> grid5, grid10;
  for (int v = 0; v <= 5; ++v) grid5.push_back(v);
  for (int v = 0; v <= 10; ++v) grid10.push_back(v);
  const std::vector<double> values = {1, 2};
  const BayesianGame game = make_vickrey_game(values, values, 2);
  const ProtocolTable table = vickrey_protocol_table(values, values, game);
  return {{"valuations", valuations},
          {"bids", valuations},
          {"winner", a.winner},
          {"price", a.price},
          {"utilities", a.utilities},
          {"truthfulness",
           {check(grid5, 2, Pricing::kSecondPrice),
            check(grid10, 2, Pricing::kSecondPrice),
            check(grid10, 3, Pricing::kSecondPrice),
            check(grid5, 2, Pricing::kFirstPrice)}},
          {"protocol_classification",
           to_json(classify_protocol(table, game, Positivity::kExpected),
                   table, game)}};
}

inline Json demo_protocol1() {
  const std::vector<Protocol1Instance> instances = {
      // Forward, responder gains by accepting.
      make_instance({{"a", 2}, {"b", 1}}, 1.0, 5.0, {{"a", 1}, {"b", 2}}, "a"),
      // Direct beats the forward expectation while the responder would
      // have gained from the query.
      make_instance({{"a", 1}}, 0.0, 5.0, {{"c", 1}}, "b"),
      // Empty responder profile: rejecting is her best option.
      make_instance({{"a", 3}}, 2.0, 5.0, {}, "a"),
  };
  Json arr = Json::array();
  for (const auto& inst : instances) {
    Json j = detail::verdict_json(inst, verify_protocol1(inst));
    const BayesianGame g = make_query_game(inst);
    const ProtocolTable p = protocol1_table(inst);
    j["classification"] = to_json(classify_protocol(p, g), p, g);
    arr.push_back(j);
  }
  return {{"instances", arr}};
}

inline int demo(const std::string& which, const Options& o, std::ostream& out) {
  detail::require_format(o, {"json"});
  Json j;
  if (which == "demo-tcp") {
    j = demo_tcp();
  } else if (which == "demo-bos") {
    j = demo_bos();
  } else if (which == "demo-vickrey") {
    j = demo_vickrey();
  } else {
    j = demo_protocol1();
  }
  detail::emit(o, out, j.dump(2) + "\n");
  return kOk;
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Game-theoretic protocol analysis and P2P query simulation",
               "coutil"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Output format (json|csv)");
    sub->add_option("--out", o.out, "Output file (directory for simulate)");
  };
  auto add_sim = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Override the scenario seed");
    sub->add_option("--horizon", o.horizon, "Override the number of events");
    sub->add_option("--policy", o.policy, "Apply one policy to every agent");
  };

  auto* analyze = app.add_subcommand("analyze-game",
                                     "Equilibria and dominant strategies");
  analyze->add_option("game", o.paths, "Game file")->required()->expected(1);
  add_common(analyze);

  auto* check = app.add_subcommand("check-protocol",
                                   "Classify a protocol over a game");
  check->add_option("files", o.paths, "Game file, then protocol file")
      ->required()
      ->expected(2);
  check->add_option("--positivity", o.positivity,
                    "Utility positivity: ex_post|expected")
      ->check(CLI::IsMember({"ex_post", "expected"}));
  add_common(check);

  auto* sim = app.add_subcommand("simulate", "Run a scenario");
  sim->add_option("scenario", o.paths, "Scenario file")->required()->expected(1);
  sim->add_flag("--events", o.events, "Also write events.jsonl under --out");
  add_common(sim);
  add_sim(sim);

  auto* cmp = app.add_subcommand("compare", "Compare policies on a scenario");
  cmp->add_option("scenario", o.paths, "Scenario file")->required()->expected(1);
  cmp->add_option("--policies", o.policies, "Policies to compare")
      ->delimiter(',');
  add_common(cmp);
  add_sim(cmp);

  std::vector<CLI::App*> demos;
  for (const char* name :
       {"demo-tcp", "demo-bos", "demo-vickrey", "demo-protocol1"}) {
    auto* d = app.add_subcommand(name, "Self-contained worked example");
    add_common(d);
    demos.push_back(d);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (analyze->parsed()) return analyze_game(o, out);
    if (check->parsed()) return check_protocol(o, out);
    if (sim->parsed()) return simulate(o, out);
    if (cmp->parsed()) return compare(o, out);
    for (auto* d : demos) {
      if (d->parsed()) return demo(d->get_name(), o, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const GuardError& e) {
    err << "size guard: " << e.what() << "\n";
    return kGuard;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}

}  // namespace coutil::cli

#endif  // COUTIL_CLI_HPP_
