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

// JSON and CSV encodings of games, protocols, reports, agent states,
// scenarios and simulation output.
//
// Game file:
//   {"agents": [..], "actions": [[..], ..],
//    "payoffs": [{"profile": [..], "utilities": [..]}, ..]}
// optionally with private types:
//   "types": [[..], ..], "prior": [{"types": [..], "p": x}, ..]
//   (uniform when absent) and a "types" label list in every payoff record.
//
// Protocol file:
//   {"inputs": [[..], ..], "aux": [..] (default ["none"]),
//    "inputs_are_types": bool (default false),
//    "table": [{"inputs": [..], "aux": "..", "output": [..]}, ..]}

#ifndef COUTIL_IO_HPP_
#define COUTIL_IO_HPP_

#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "coutil/anon_query.hpp"
#include "coutil/core.hpp"
#include "coutil/game.hpp"
#include "coutil/protocol.hpp"
#include "coutil/simulation.hpp"
#include "json.hpp"

namespace coutil {

using Json = nlohmann::json;

// Shortest-round-trip for JSON, 17 significant digits for CSV.
inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline const Json& field(const Json& j, const char* key,
                         const std::string& ctx) {
  if (!j.is_object()) throw InvalidArgument(ctx + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) {
    throw InvalidArgument(ctx + ": missing field '" + key + "'");
  }
  return *it;
}

template <typename T>
T get_as(const Json& j, const std::string& ctx) {
  try {
    return j.get<T>();
  } catch (const Json::exception&) {
    throw InvalidArgument(ctx + ": wrong type (" + std::string(j.type_name()) +
                          ")");
  }
}

inline std::vector<std::vector<std::string>> label_sets(
    const Json& j, const std::string& ctx) {
  auto sets = get_as<std::vector<std::vector<std::string>>>(j, ctx);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (sets[i].empty()) {
      throw InvalidArgument(ctx + "[" + std::to_string(i) + "]: empty list");
    }
  }
  return sets;
}

inline Profile resolve(const std::vector<std::vector<std::string>>& sets,
                       const Json& j, const std::string& ctx) {
  const auto labels = get_as<std::vector<std::string>>(j, ctx);
  if (labels.size() != sets.size()) {
    throw InvalidArgument(ctx + ": expected " + std::to_string(sets.size()) +
                          " labels");
  }
  Profile p(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& set = sets[i];
    auto it = std::find(set.begin(), set.end(), labels[i]);
    if (it == set.end()) {
      throw InvalidArgument(ctx + ": unknown label '" + labels[i] + "'");
    }
    p[i] = static_cast<std::size_t>(it - set.begin());
  }
  return p;
}

inline Json optional_number(const std::optional<double>& x) {
  return x ? Json(*x) : Json(nullptr);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Games
// ---------------------------------------------------------------------------

inline BayesianGame bayesian_game_from_json(const Json& j) {
  using detail::field;
  const auto agents =
      detail::get_as<std::vector<std::string>>(field(j, "agents", "game"),
                                               "game.agents");
  const auto actions = detail::label_sets(field(j, "actions", "game"),
                                          "game.actions");
  if (actions.size() != agents.size()) {
    throw InvalidArgument("game.actions: expected one list per agent");
  }
  const bool typed = j.contains("types");
  std::vector<std::vector<std::string>> types =
      typed ? detail::label_sets(j.at("types"), "game.types")
            : std::vector<std::vector<std::string>>(agents.size(), {"public"});
  if (types.size() != agents.size()) {
    throw InvalidArgument("game.types: expected one list per agent");
  }
  const ProfileSpace strategies(radices_of(actions));
  const ProfileSpace type_space(radices_of(types));

  std::vector<double> prior(type_space.size(), 0.0);
  if (j.contains("prior")) {
    const Json& pj = j.at("prior");
    if (!pj.is_array()) throw InvalidArgument("game.prior: expected a list");
    std::vector<bool> seen(type_space.size(), false);
    for (std::size_t k = 0; k < pj.size(); ++k) {
      const std::string ctx = "game.prior[" + std::to_string(k) + "]";
      const Profile t =
          detail::resolve(types, field(pj[k], "types", ctx), ctx + ".types");
      const std::size_t idx = type_space.index(t);
      if (seen[idx]) throw InvalidArgument(ctx + ": duplicate type profile");
      seen[idx] = true;
      prior[idx] = detail::get_as<double>(field(pj[k], "p", ctx), ctx + ".p");
    }
  } else {
    prior.assign(type_space.size(),
                 1.0 / static_cast<double>(type_space.size()));
  }

  const Json& pay = field(j, "payoffs", "game");
  if (!pay.is_array()) throw InvalidArgument("game.payoffs: expected a list");
  std::vector<std::vector<std::vector<double>>> tables(
      type_space.size(), std::vector<std::vector<double>>(strategies.size()));
  std::vector<std::vector<bool>> seen(
      type_space.size(), std::vector<bool>(strategies.size(), false));
  for (std::size_t k = 0; k < pay.size(); ++k) {
    const std::string ctx = "game.payoffs[" + std::to_string(k) + "]";
    const Profile s = detail::resolve(actions, field(pay[k], "profile", ctx),
                                      ctx + ".profile");
    const Profile t = typed ? detail::resolve(types, field(pay[k], "types", ctx),
                                              ctx + ".types")
                            : Profile(agents.size(), 0);
    auto u = detail::get_as<std::vector<double>>(
        field(pay[k], "utilities", ctx), ctx + ".utilities");
    if (u.size() != agents.size()) {
      throw InvalidArgument(ctx + ".utilities: expected " +
                            std::to_string(agents.size()) + " values");
    }
    const std::size_t ti = type_space.index(t), si = strategies.index(s);
    if (seen[ti][si]) throw InvalidArgument(ctx + ": duplicate profile");
    seen[ti][si] = true;
    tables[ti][si] = std::move(u);
  }
  for (std::size_t ti = 0; ti < seen.size(); ++ti) {
    for (std::size_t si = 0; si < seen[ti].size(); ++si) {
      if (!seen[ti][si]) {
        std::string what = "game.payoffs: no entry for profile [";
        const auto labels = labels_of(actions, strategies.profile(si));
        for (std::size_t a = 0; a < labels.size(); ++a) {
          what += (a ? "," : "") + labels[a];
        }
        throw InvalidArgument(what + "]");
      }
    }
  }
  std::vector<NormalFormGame> games;
  for (auto& table : tables) {
    games.emplace_back(agents, actions, std::move(table));
  }
  return BayesianGame(std::move(types), std::move(prior), std::move(games));
}

inline NormalFormGame game_from_json(const Json& j) {
  if (j.contains("types")) {
    throw InvalidArgument("game: expected a game without private types");
  }
  return bayesian_game_from_json(j).realizations().front();
}

inline Json to_json(const NormalFormGame& g) {
  Json pay = Json::array();
  g.space().for_each([&](const Profile& p) {
    auto u = g.payoff(p);
    pay.push_back({{"profile", g.labels(p)},
                   {"utilities", std::vector<double>(u.begin(), u.end())}});
  });
  return {{"agents", g.agents()}, {"actions", g.actions()}, {"payoffs", pay}};
}

inline Json to_json(const BayesianGame& g) {
  if (g.has_public_utilities()) return to_json(g.realizations().front());
  Json pay = Json::array();
  Json prior = Json::array();
  g.type_space().for_each([&](const Profile& t) {
    const auto tl = labels_of(g.type_sets(), t);
    prior.push_back({{"types", tl}, {"p", g.prior(t)}});
    const NormalFormGame& r = g.realized(t);
    r.space().for_each([&](const Profile& s) {
      auto u = r.payoff(s);
      pay.push_back({{"profile", r.labels(s)},
                     {"types", tl},
                     {"utilities", std::vector<double>(u.begin(), u.end())}});
    });
  });
  return {{"agents", g.agents()}, {"actions", g.strategies()},
          {"types", g.type_sets()}, {"prior", prior}, {"payoffs", pay}};
}

// ---------------------------------------------------------------------------
// Protocols and reports
// ---------------------------------------------------------------------------

inline ProtocolTable protocol_from_json(const Json& j,
                                        const BayesianGame& game) {
  using detail::field;
  const auto inputs =
      detail::label_sets(field(j, "inputs", "protocol"), "protocol.inputs");
  std::vector<std::string> aux = {"none"};
  if (j.contains("aux")) {
    aux = detail::get_as<std::vector<std::string>>(j.at("aux"),
                                                   "protocol.aux");
    if (aux.empty()) throw InvalidArgument("protocol.aux: empty list");
  }
  const bool as_types =
      j.contains("inputs_are_types") &&
      detail::get_as<bool>(j.at("inputs_are_types"),
                           "protocol.inputs_are_types");
  if (inputs.size() != game.agent_count()) {
    throw DomainMismatch("protocol.inputs: protocol has " +
                         std::to_string(inputs.size()) + " agents, game has " +
                         std::to_string(game.agent_count()));
  }
  const ProfileSpace space(radices_of(inputs));
  std::vector<std::optional<Profile>> outputs(space.size() * aux.size());
  const Json& table = field(j, "table", "protocol");
  if (!table.is_array()) {
    throw InvalidArgument("protocol.table: expected a list");
  }
  for (std::size_t k = 0; k < table.size(); ++k) {
    const std::string ctx = "protocol.table[" + std::to_string(k) + "]";
    const Profile c = detail::resolve(inputs, field(table[k], "inputs", ctx),
                                      ctx + ".inputs");
    std::size_t x = 0;
    if (table[k].contains("aux")) {
      const auto label =
          detail::get_as<std::string>(table[k].at("aux"), ctx + ".aux");
      auto it = std::find(aux.begin(), aux.end(), label);
      if (it == aux.end()) {
        throw InvalidArgument(ctx + ".aux: unknown label '" + label + "'");
      }
      x = static_cast<std::size_t>(it - aux.begin());
    } else if (aux.size() != 1) {
      throw InvalidArgument(ctx + ": missing field 'aux'");
    }
    Profile s;
    try {
      s = detail::resolve(game.strategies(), field(table[k], "output", ctx),
                          ctx + ".output");
    } catch (const InvalidArgument& e) {
      throw DomainMismatch(e.what());
    }
    auto& slot = outputs[space.index(c) * aux.size() + x];
    if (slot) throw InvalidArgument(ctx + ": duplicate entry");
    slot = std::move(s);
  }
  std::vector<Profile> flat;
  for (std::size_t k = 0; k < outputs.size(); ++k) {
    if (!outputs[k]) {
      throw InvalidArgument("protocol.table: entry " + std::to_string(k) +
                            " (inputs x aux, lexicographic) is missing");
    }
    flat.push_back(std::move(*outputs[k]));
  }
  ProtocolTable p(inputs, aux, std::move(flat), as_types);
  validate_domains(p, game);
  return p;
}

inline Json to_json(const ProtocolTable& p, const BayesianGame& game) {
  Json table = Json::array();
  p.input_space().for_each([&](const Profile& c) {
    for (std::size_t x = 0; x < p.aux().size(); ++x) {
      table.push_back({{"inputs", labels_of(p.inputs(), c)},
                       {"aux", p.aux()[x]},
                       {"output", labels_of(game.strategies(), p.output(c, x))}});
    }
  });
  return {{"inputs", p.inputs()},
          {"aux", p.aux()},
          {"inputs_are_types", p.inputs_are_types()},
          {"table", table}};
}

inline const char* to_string(Positivity p) {
  return p == Positivity::kExPost ? "ex_post" : "expected";
}

inline Positivity parse_positivity(const std::string& s) {
  if (s == "ex_post") return Positivity::kExPost;
  if (s == "expected") return Positivity::kExpected;
  throw InvalidArgument("unknown positivity mode '" + s + "'");
}

inline Json to_json(const ClassificationReport& r, const ProtocolTable& p,
                    const BayesianGame& g) {
  const auto& agents = g.agents();
  auto inputs = [&](const Profile& c) { return labels_of(p.inputs(), c); };
  auto types = [&](const Profile& t) { return labels_of(g.type_sets(), t); };
  auto strat = [&](const Profile& s) { return labels_of(g.strategies(), s); };

  Json se = {{"holds", r.self_enforcing.holds},
             {"positivity", to_string(r.positivity)}};
  if (const auto& w = r.self_enforcing.witness) {
    static const char* kinds[] = {"not_equilibrium", "non_positive_utility",
                                  "non_positive_expected_utility"};
    Json wj = {{"kind", kinds[static_cast<int>(w->kind)]},
               {"aux", p.aux()[w->aux]},
               {"agent", agents[w->agent]},
               {"utility", w->utility}};
    if (!w->inputs.empty()) wj["inputs"] = inputs(w->inputs);
    if (!w->output.empty()) wj["output"] = strat(w->output);
    if (w->types) wj["types"] = types(*w->types);
    if (w->deviation) {
      wj["deviation"] = g.strategies()[w->agent][*w->deviation];
      wj["deviation_utility"] = w->deviation_utility;
    }
    se["witness"] = wj;
  }

  Json co = {{"applicable", r.coordination.applicable},
             {"holds", r.coordination.holds}};
  if (const auto& w = r.coordination.witness) {
    co["witness"] = {{"types", types(w->types)},
                     {"inputs", inputs(w->inputs)},
                     {"misreport", inputs(w->misreport)},
                     {"aux", p.aux()[w->aux]},
                     {"agent", agents[w->agent]},
                     {"utility", w->utility},
                     {"misreport_utility", w->misreport_utility}};
  }

  Json am = {{"holds", r.amenable.holds}};
  if (const auto& w = r.amenable.witness) {
    am["witness"] = {
        {"changed_agent", agents[w->changed_agent]},
        {"affected_agent", agents[w->affected_agent]},
        {"strategies", strat(w->strategies)},
        {"types", types(w->types)},
        {"alternative_type", g.type_sets()[w->changed_agent][w->alternative_type]},
        {"utility", w->utility},
        {"alternative_utility", w->alternative_utility}};
  }

  Json cu = {{"level", to_string(r.coutility.level)},
             {"maximality",
              "protocol output weakly beats every joint strategy profile"}};
  if (r.coutility_skipped) {
    cu["skipped"] = *r.coutility_skipped;
  } else {
    Json flags = Json::object();
    for (std::size_t i = 0; i < r.coutility.maximal.size(); ++i) {
      flags[agents[i]] = static_cast<bool>(r.coutility.maximal[i]);
      if (const auto& w = r.coutility.witnesses[i]) {
        cu["witnesses"][agents[i]] = {{"inputs", inputs(w->inputs)},
                                      {"types", types(w->types)},
                                      {"output", strat(w->output)},
                                      {"utility", w->utility},
                                      {"best_profile", strat(w->best_profile)},
                                      {"best_utility", w->best_utility}};
      }
    }
    cu["maximal"] = flags;
  }
  return {{"self_enforcing", se},
          {"coordination", co},
          {"amenable", am},
          {"coutility", cu}};
}

// ---------------------------------------------------------------------------
// Agent states
// ---------------------------------------------------------------------------

inline Json to_json(const AgentState& s) {
  Json profile = Json::object();
  for (const auto& [k, c] : s.profile.counts()) profile[k] = c;
  Json pending = Json::array();
  for (const auto& p : s.pending) {
    pending.push_back({{"category", p.query},
                       {"time_left", p.time_left},
                       {"interested", p.interested}});
  }
  return {{"alpha", s.alpha}, {"profile", profile}, {"pending", pending}};
}

inline AgentState agent_state_from_json(const Json& j) {
  using detail::field;
  AgentState s;
  s.alpha = detail::get_as<double>(field(j, "alpha", "state"), "state.alpha");
  const Json& prof = field(j, "profile", "state");
  if (!prof.is_object()) {
    throw InvalidArgument("state.profile: expected an object");
  }
  for (const auto& [k, v] : prof.items()) {
    const auto c = detail::get_as<long long>(v, "state.profile." + k);
    if (c < 0) throw InvalidArgument("state.profile." + k + ": negative count");
    s.profile.add(k, static_cast<std::uint64_t>(c));
  }
  if (j.contains("pending")) {
    const Json& pj = j.at("pending");
    for (std::size_t k = 0; k < pj.size(); ++k) {
      const std::string ctx = "state.pending[" + std::to_string(k) + "]";
      s.pending.push_back(
          {detail::get_as<std::string>(field(pj[k], "category", ctx), ctx),
           detail::get_as<double>(field(pj[k], "time_left", ctx), ctx),
           detail::get_as<int>(field(pj[k], "interested", ctx), ctx)});
    }
  }
  validate(s);
  return s;
}

// ---------------------------------------------------------------------------
// Scenarios
// ---------------------------------------------------------------------------

// Keys: agent_count, query_universe_size, horizon, timeout,
// initial_time_left?, alpha (number | [per-agent] | {"uniform": [lo, hi]}),
// workload ({"kind": "uniform"} | {"kind": "power_law", "exponent": s}),
// policy?, policies?, seed.
inline Scenario scenario_from_json(const Json& j) {
  using detail::field;
  using detail::get_as;
  Scenario s;
  auto count = [&](const char* key) {
    const Json& v = field(j, key, "scenario");
    const auto x = get_as<long long>(v, std::string("scenario.") + key);
    if (x < 0) {
      throw InvalidArgument(std::string("scenario.") + key +
                            ": must be non-negative");
    }
    return static_cast<std::size_t>(x);
  };
  s.agent_count = count("agent_count");
  s.query_universe_size = count("query_universe_size");
  s.horizon = count("horizon");
  s.timeout = get_as<double>(field(j, "timeout", "scenario"),
                             "scenario.timeout");
  if (j.contains("initial_time_left")) {
    s.initial_time_left =
        get_as<double>(j.at("initial_time_left"), "scenario.initial_time_left");
  }
  if (j.contains("alpha")) {
    const Json& a = j.at("alpha");
    if (a.is_number()) {
      s.alpha = a.get<double>();
    } else if (a.is_array()) {
      s.alpha = get_as<std::vector<double>>(a, "scenario.alpha");
    } else if (a.is_object() && a.contains("uniform")) {
      const auto lh = get_as<std::vector<double>>(a.at("uniform"),
                                                  "scenario.alpha.uniform");
      if (lh.size() != 2) {
        throw InvalidArgument("scenario.alpha.uniform: expected [low, high]");
      }
      s.alpha = AlphaUniform{lh[0], lh[1]};
    } else {
      throw InvalidArgument("scenario.alpha: unsupported form");
    }
  }
  if (j.contains("workload")) {
    const Json& w = j.at("workload");
    const auto kind = get_as<std::string>(field(w, "kind", "scenario.workload"),
                                          "scenario.workload.kind");
    if (kind == "uniform") {
      s.workload.kind = Workload::Kind::kUniform;
    } else if (kind == "power_law") {
      s.workload.kind = Workload::Kind::kPowerLaw;
      s.workload.exponent =
          get_as<double>(field(w, "exponent", "scenario.workload"),
                         "scenario.workload.exponent");
    } else {
      throw InvalidArgument("scenario.workload.kind: unknown kind '" + kind +
                            "'");
    }
  }
  if (j.contains("policy")) {
    s.policy = parse_policy(get_as<std::string>(j.at("policy"),
                                                "scenario.policy"));
  }
  if (j.contains("policies")) {
    for (const auto& name :
         get_as<std::vector<std::string>>(j.at("policies"),
                                           "scenario.policies")) {
      s.policies.push_back(parse_policy(name));
    }
  }
  s.seed = get_as<std::uint64_t>(field(j, "seed", "scenario"),
                                 "scenario.seed");
  validate(s);
  return s;
}

inline Json to_json(const Scenario& s) {
  Json j = {{"agent_count", s.agent_count},
            {"query_universe_size", s.query_universe_size},
            {"horizon", s.horizon},
            {"timeout", s.timeout},
            {"policy", to_string(s.policy)},
            {"seed", s.seed}};
  if (s.initial_time_left) j["initial_time_left"] = *s.initial_time_left;
  if (const auto* c = std::get_if<double>(&s.alpha)) {
    j["alpha"] = *c;
  } else if (const auto* u = std::get_if<AlphaUniform>(&s.alpha)) {
    j["alpha"] = {{"uniform", {u->low, u->high}}};
  } else {
    j["alpha"] = std::get<std::vector<double>>(s.alpha);
  }
  if (s.workload.kind == Workload::Kind::kPowerLaw) {
    j["workload"] = {{"kind", "power_law"}, {"exponent", s.workload.exponent}};
  } else {
    j["workload"] = {{"kind", "uniform"}};
  }
  if (!s.policies.empty()) {
    std::vector<std::string> names;
    for (Policy p : s.policies) names.push_back(to_string(p));
    j["policies"] = names;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Simulation output
// ---------------------------------------------------------------------------

inline Json to_json(const EventRecord& e) {
  auto opt_index = [](const std::optional<std::size_t>& x) {
    return x ? Json(*x) : Json(nullptr);
  };
  return {{"step", e.step},
          {"initiator", e.initiator},
          {"responder", opt_index(e.responder)},
          {"arrival", e.arrival},
          {"category", e.category},
          {"initiator_action", to_string(e.initiator_action)},
          {"responder_action", to_string(e.responder_action)},
          {"initiator_utility", e.initiator_utility},
          {"responder_utility", detail::optional_number(e.responder_utility)},
          {"initiator_entropy", e.initiator_entropy},
          {"responder_entropy", detail::optional_number(e.responder_entropy)}};
}

inline EventRecord event_from_json(const Json& j) {
  using detail::field;
  using detail::get_as;
  const std::string ctx = "event";
  EventRecord e;
  e.step = get_as<std::size_t>(field(j, "step", ctx), "event.step");
  e.initiator = get_as<std::size_t>(field(j, "initiator", ctx), "event.initiator");
  if (const Json& r = field(j, "responder", ctx); !r.is_null()) {
    e.responder = get_as<std::size_t>(r, "event.responder");
  }
  e.arrival = get_as<std::string>(field(j, "arrival", ctx), "event.arrival");
  e.category = get_as<std::string>(field(j, "category", ctx), "event.category");
  const auto ia = get_as<std::string>(field(j, "initiator_action", ctx),
                                      "event.initiator_action");
  if (ia == "SubmitDirect") {
    e.initiator_action = InitiatorAction::kSubmitDirect;
  } else if (ia == "Forward") {
    e.initiator_action = InitiatorAction::kForward;
  } else {
    throw InvalidArgument("event.initiator_action: unknown action '" + ia + "'");
  }
  const auto ra = get_as<std::string>(field(j, "responder_action", ctx),
                                      "event.responder_action");
  if (ra == "Accept") {
    e.responder_action = ResponderAction::kAccept;
  } else if (ra == "Reject") {
    e.responder_action = ResponderAction::kReject;
  } else if (ra == "NotAsked") {
    e.responder_action = ResponderAction::kNotAsked;
  } else {
    throw InvalidArgument("event.responder_action: unknown action '" + ra + "'");
  }
  e.initiator_utility = get_as<double>(field(j, "initiator_utility", ctx),
                                       "event.initiator_utility");
  if (const Json& u = field(j, "responder_utility", ctx); !u.is_null()) {
    e.responder_utility = get_as<double>(u, "event.responder_utility");
  }
  e.initiator_entropy = get_as<double>(field(j, "initiator_entropy", ctx),
                                       "event.initiator_entropy");
  if (const Json& h = field(j, "responder_entropy", ctx); !h.is_null()) {
    e.responder_entropy = get_as<double>(h, "event.responder_entropy");
  }
  return e;
}

inline std::string events_jsonl(const std::vector<EventRecord>& events) {
  std::string out;
  for (const auto& e : events) {
    out += to_json(e).dump();
    out += '\n';
  }
  return out;
}

inline std::string metrics_csv(const Metrics& m) {
  std::ostringstream os;
  os << "step,agent,entropy,answered_cumulative\n";
  for (const auto& p : m.trajectory) {
    os << p.step << ',' << p.agent << ',' << format_double(p.entropy) << ','
       << p.answered_cumulative << '\n';
  }
  return os.str();
}

inline std::string policy_label(const Scenario& s) {
  if (s.policies.empty()) return to_string(s.policy);
  for (Policy p : s.policies) {
    if (p != s.policies.front()) return "mixed";
  }
  return to_string(s.policies.front());
}

inline Json summary_json(const Metrics& m, const Scenario& s) {
  Json per_policy = Json::object();
  for (const auto& [name, agg] : m.per_policy) {
    per_policy[name] = {
        {"agents", agg.agents},
        {"mean_final_entropy", agg.mean_final_entropy},
        {"answered_fraction", detail::optional_number(agg.answered_fraction)}};
  }
  return {{"policy", policy_label(s)},
          {"mean_final_entropy", m.mean_final_entropy},
          {"answered_fraction", detail::optional_number(m.answered_fraction)},
          {"mean_delay", detail::optional_number(m.mean_delay)},
          {"final_entropies", m.final_entropies},
          {"queries", m.queries},
          {"answered", m.answered},
          {"per_policy", per_policy},
          {"seed", s.seed},
          {"rng_algorithm", kRngAlgorithm},
          {"workload_note",
           "arrival process and category distribution are simulator "
           "conventions"},
          {"scenario", to_json(s)}};
}

}  // namespace coutil

#endif  // COUTIL_IO_HPP_
