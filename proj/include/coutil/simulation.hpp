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

// Discrete-event simulation of n peers repeatedly playing the two-party
// anonymous query game with uniformly random partners.
//
// Draw order (single mt19937_64 stream seeded with Scenario::seed):
//   setup:  per-agent alpha (uniform alpha only), agents in index order;
//           per-agent category permutation (power-law workload only),
//           Fisher-Yates from the last position down.
//   event:  initiator; category rank; responder (only when forwarding).
//
// Each event appends a fresh query to the initiator's FIFO of pending
// queries and processes the oldest one. A rejected query stays at the head
// and is re-decided the next time its owner is selected.

#ifndef COUTIL_SIMULATION_HPP_
#define COUTIL_SIMULATION_HPP_

#include <cmath>
#include <cstdint>
#include <deque>
#include <future>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "coutil/anon_query.hpp"
#include "coutil/core.hpp"

namespace coutil {

inline constexpr const char* kRngAlgorithm = "mt19937_64";

// Portable draws on top of std::mt19937_64, whose output sequence is fixed
// by the standard (unlike the std distributions).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, n) by rejection.
  std::size_t uniform_index(std::size_t n) {
    if (n == 0) throw InvalidArgument("uniform_index over an empty range");
    const std::uint64_t bound = n;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

enum class Policy {
  kProtocol1,
  kAlwaysDirect,
  kAlwaysForward,
  kAlwaysAcceptResponder,
  kAlwaysRejectResponder,
};

inline const char* to_string(Policy p) {
  switch (p) {
    case Policy::kProtocol1:
      return "Protocol1";
    case Policy::kAlwaysDirect:
      return "AlwaysDirect";
    case Policy::kAlwaysForward:
      return "AlwaysForward";
    case Policy::kAlwaysAcceptResponder:
      return "AlwaysAcceptResponder";
    case Policy::kAlwaysRejectResponder:
      return "AlwaysRejectResponder";
  }
  return "?";
}

inline Policy parse_policy(const std::string& s) {
  for (Policy p : {Policy::kProtocol1, Policy::kAlwaysDirect,
                   Policy::kAlwaysForward, Policy::kAlwaysAcceptResponder,
                   Policy::kAlwaysRejectResponder}) {
    if (s == to_string(p)) return p;
  }
  throw InvalidArgument("unknown policy '" + s + "'");
}

// A policy fixes one role and plays Protocol 1 in the other.
inline InitiatorAction initiator_choice(Policy p, const AgentState& s,
                                        const Query& q, double timeout) {
  switch (p) {
    case Policy::kAlwaysDirect:
      return InitiatorAction::kSubmitDirect;
    case Policy::kAlwaysForward:
      return InitiatorAction::kForward;
    default:
      return initiator_decision(s, q, timeout);
  }
}

inline ResponderAction responder_choice(Policy p, const AgentState& s,
                                        const Query& q) {
  switch (p) {
    case Policy::kAlwaysAcceptResponder:
      return ResponderAction::kAccept;
    case Policy::kAlwaysRejectResponder:
      return ResponderAction::kReject;
    default:
      return responder_decision(s, q);
  }
}

struct AlphaUniform {
  double low = 0.0;
  double high = 0.0;
};
// Constant, uniform draw per agent, or an explicit per-agent list.
using AlphaSpec = std::variant<double, AlphaUniform, std::vector<double>>;

struct Workload {
  enum class Kind { kUniform, kPowerLaw };
  Kind kind = Kind::kUniform;
  double exponent = 1.0;  // power-law only: weight of rank r is r^-exponent
};

struct Scenario {
  std::size_t agent_count = 2;
  std::size_t query_universe_size = 1;
  std::size_t horizon = 0;
  double timeout = 1.0;
  // Time budget of a fresh query; defaults to 10 * timeout.
  std::optional<double> initial_time_left;
  AlphaSpec alpha = 0.1;
  Workload workload;
  Policy policy = Policy::kProtocol1;
  // Per-agent overrides of `policy`; empty or one entry per agent.
  std::vector<Policy> policies;
  std::uint64_t seed = 0;

  double fresh_time_left() const {
    return initial_time_left ? *initial_time_left : 10.0 * timeout;
  }
  Policy policy_of(std::size_t agent) const {
    return policies.empty() ? policy : policies.at(agent);
  }
};

inline void validate(const Scenario& s) {
  if (s.agent_count < 2) {
    throw InvalidArgument("agent_count must be at least 2");
  }
  if (s.query_universe_size < 1) {
    throw InvalidArgument("query_universe_size must be at least 1");
  }
  if (!(s.timeout > 0.0) || !std::isfinite(s.timeout)) {
    throw InvalidArgument("timeout must be positive");
  }
  if (s.initial_time_left && !std::isfinite(*s.initial_time_left)) {
    throw InvalidArgument("initial_time_left must be finite");
  }
  if (s.workload.kind == Workload::Kind::kPowerLaw &&
      !(s.workload.exponent > 0.0)) {
    throw InvalidArgument("workload.exponent must be positive");
  }
  if (!s.policies.empty() && s.policies.size() != s.agent_count) {
    throw InvalidArgument("policies must list one policy per agent");
  }
  if (const auto* u = std::get_if<AlphaUniform>(&s.alpha)) {
    if (!(u->low >= 0.0) || !(u->high >= u->low)) {
      throw InvalidArgument("alpha.uniform needs 0 <= low <= high");
    }
  } else if (const auto* list = std::get_if<std::vector<double>>(&s.alpha)) {
    if (list->size() != s.agent_count) {
      throw InvalidArgument("alpha must list one value per agent");
    }
    for (double a : *list) {
      if (!(a >= 0.0)) throw InvalidArgument("alpha must be non-negative");
    }
  } else if (!(std::get<double>(s.alpha) >= 0.0)) {
    throw InvalidArgument("alpha must be non-negative");
  }
}

inline std::string category_label(std::size_t k) {
  return "c" + std::to_string(k);
}

struct EventRecord {
  std::size_t step = 0;
  std::size_t initiator = 0;
  std::optional<std::size_t> responder;
  std::string arrival;   // category of the query that arrived this step
  std::string category;  // category of the query processed this step
  InitiatorAction initiator_action = InitiatorAction::kSubmitDirect;
  ResponderAction responder_action = ResponderAction::kNotAsked;
  double initiator_utility = 0.0;
  std::optional<double> responder_utility;
  double initiator_entropy = 0.0;
  std::optional<double> responder_entropy;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

struct TrajectoryPoint {
  std::size_t step = 0;
  std::size_t agent = 0;
  double entropy = 0.0;
  std::size_t answered_cumulative = 0;  // own queries answered so far
};

struct PolicyAggregate {
  std::size_t agents = 0;
  double mean_final_entropy = 0.0;
  std::optional<double> answered_fraction;
};

struct Metrics {
  std::vector<TrajectoryPoint> trajectory;
  std::vector<double> final_entropies;
  std::size_t queries = 0;
  std::size_t answered = 0;
  double mean_final_entropy = 0.0;
  // Absent when no query was issued.
  std::optional<double> answered_fraction;
  // Mean number of events between a query's arrival and its answer;
  // absent when nothing was answered.
  std::optional<double> mean_delay;
  std::map<std::string, PolicyAggregate> per_policy;
};

struct SimulationResult {
  Metrics metrics;
  std::vector<EventRecord> events;
  std::vector<AgentState> final_states;
};

namespace detail {

struct Setup {
  std::vector<AgentState> agents;
  std::vector<std::vector<std::size_t>> permutations;  // rank -> category
  std::vector<double> cumulative;                      // power-law CDF
};

inline Setup setup(const Scenario& s, Rng& rng) {
  Setup out;
  out.agents.resize(s.agent_count);
  for (std::size_t i = 0; i < s.agent_count; ++i) {
    if (const auto* c = std::get_if<double>(&s.alpha)) {
      out.agents[i].alpha = *c;
    } else if (const auto* list = std::get_if<std::vector<double>>(&s.alpha)) {
      out.agents[i].alpha = (*list)[i];
    } else {
      const auto& u = std::get<AlphaUniform>(s.alpha);
      out.agents[i].alpha = u.low + (u.high - u.low) * rng.uniform01();
    }
  }
  const std::size_t k = s.query_universe_size;
  out.permutations.assign(s.agent_count, std::vector<std::size_t>(k));
  for (auto& perm : out.permutations) {
    for (std::size_t c = 0; c < k; ++c) perm[c] = c;
    if (s.workload.kind == Workload::Kind::kPowerLaw) {
      for (std::size_t c = k; c-- > 1;) {
        std::swap(perm[c], perm[rng.uniform_index(c + 1)]);
      }
    }
  }
  if (s.workload.kind == Workload::Kind::kPowerLaw) {
    double total = 0.0;
    for (std::size_t r = 1; r <= k; ++r) {
      total += std::pow(static_cast<double>(r), -s.workload.exponent);
      out.cumulative.push_back(total);
    }
    for (double& c : out.cumulative) c /= total;
  }
  return out;
}

inline std::size_t draw_rank(const Scenario& s, const Setup& setup, Rng& rng) {
  if (s.workload.kind == Workload::Kind::kUniform) {
    return rng.uniform_index(s.query_universe_size);
  }
  const double u = rng.uniform01();
  for (std::size_t r = 0; r + 1 < setup.cumulative.size(); ++r) {
    if (u < setup.cumulative[r]) return r;
  }
  return setup.cumulative.size() - 1;
}

}  // namespace detail

// Agent states before the first event (alphas set, nothing pending).
inline std::vector<AgentState> initial_states(const Scenario& s) {
  validate(s);
  Rng rng(s.seed);
  return detail::setup(s, rng).agents;
}

inline SimulationResult run_simulation(const Scenario& s) {
  validate(s);
  Rng rng(s.seed);
  detail::Setup setup = detail::setup(s, rng);
  std::vector<AgentState>& agents = setup.agents;
  const std::size_t n = s.agent_count;

  SimulationResult result;
  Metrics& m = result.metrics;
  std::vector<std::deque<std::size_t>> arrived_at(n);
  std::vector<std::size_t> answered(n, 0), issued(n, 0);
  double delay_sum = 0.0;

  for (std::size_t step = 0; step < s.horizon; ++step) {
    const std::size_t i = rng.uniform_index(n);
    const std::size_t rank = detail::draw_rank(s, setup, rng);
    EventRecord ev;
    ev.step = step;
    ev.initiator = i;
    ev.arrival = category_label(setup.permutations[i][rank]);
    agents[i].pending.push_back({ev.arrival, s.fresh_time_left(), 1});
    arrived_at[i].push_back(step);
    ++issued[i];

    ev.category = agents[i].pending.front().query;
    ev.initiator_action =
        initiator_choice(s.policy_of(i), agents[i], ev.category, s.timeout);
    InteractionOutcome out;
    if (ev.initiator_action == InitiatorAction::kForward) {
      const std::size_t r = rng.uniform_index(n - 1);
      const std::size_t j = r >= i ? r + 1 : r;
      ev.responder = j;
      ev.responder_action =
          responder_choice(s.policy_of(j), agents[j], ev.category);
      out = apply_transition(agents[i], agents[j], ev.category,
                             ev.initiator_action, ev.responder_action,
                             s.timeout);
      agents[j] = std::move(*out.responder);
    } else {
      out = apply_transition(agents[i], std::nullopt, ev.category,
                             ev.initiator_action, ResponderAction::kNotAsked,
                             s.timeout);
    }
    agents[i] = std::move(out.initiator);
    if (out.answered()) {
      agents[i].pending.erase(agents[i].pending.begin());
      delay_sum += static_cast<double>(step - arrived_at[i].front());
      arrived_at[i].pop_front();
      ++answered[i];
    }
    ev.initiator_utility = out.initiator_utility;
    ev.responder_utility = out.responder_utility;
    ev.initiator_entropy = entropy(agents[i].profile);
    m.trajectory.push_back({step, i, ev.initiator_entropy, answered[i]});
    if (ev.responder) {
      ev.responder_entropy = entropy(agents[*ev.responder].profile);
      m.trajectory.push_back(
          {step, *ev.responder, *ev.responder_entropy, answered[*ev.responder]});
    }
    result.events.push_back(std::move(ev));
  }

  m.queries = s.horizon;
  for (std::size_t i = 0; i < n; ++i) {
    m.final_entropies.push_back(entropy(agents[i].profile));
    m.mean_final_entropy += m.final_entropies.back() / static_cast<double>(n);
    m.answered += answered[i];
  }
  if (m.queries > 0) {
    m.answered_fraction =
        static_cast<double>(m.answered) / static_cast<double>(m.queries);
  }
  if (m.answered > 0) m.mean_delay = delay_sum / static_cast<double>(m.answered);

  std::map<std::string, std::pair<std::size_t, std::size_t>> counts;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string name = to_string(s.policy_of(i));
    auto& agg = m.per_policy[name];
    ++agg.agents;
    agg.mean_final_entropy += m.final_entropies[i];
    counts[name].first += answered[i];
    counts[name].second += issued[i];
  }
  for (auto& [name, agg] : m.per_policy) {
    agg.mean_final_entropy /= static_cast<double>(agg.agents);
    if (counts[name].second > 0) {
      agg.answered_fraction = static_cast<double>(counts[name].first) /
                              static_cast<double>(counts[name].second);
    }
  }
  result.final_states = std::move(agents);
  return result;
}

struct AuditVerdict {
  bool ok = true;
  std::optional<std::size_t> failing_step;
  std::string reason;
};

// Replays the log from the scenario's initial states, re-deriving each
// logged decision from the deciding agent's own state only. Partner
// identities and categories are taken from the log.
inline AuditVerdict independence_audit(const std::vector<EventRecord>& log,
                                       const Scenario& s) {
  std::vector<AgentState> agents = initial_states(s);
  const std::size_t n = s.agent_count;
  auto fail = [](std::size_t step, std::string why) {
    return AuditVerdict{false, step, std::move(why)};
  };
  auto known_category = [&](const std::string& c) {
    for (std::size_t k = 0; k < s.query_universe_size; ++k) {
      if (c == category_label(k)) return true;
    }
    return false;
  };
  for (std::size_t k = 0; k < log.size(); ++k) {
    const EventRecord& ev = log[k];
    if (ev.step != k || ev.initiator >= n ||
        (ev.responder && (*ev.responder >= n)) || !known_category(ev.arrival)) {
      throw DomainMismatch("event " + std::to_string(k) +
                           " does not belong to this scenario");
    }
    AgentState& me = agents[ev.initiator];
    me.pending.push_back({ev.arrival, s.fresh_time_left(), 1});
    if (me.pending.front().query != ev.category) {
      return fail(k, "processed query differs from the initiator's oldest");
    }
    const auto ia =
        initiator_choice(s.policy_of(ev.initiator), me, ev.category, s.timeout);
    if (ia != ev.initiator_action) {
      return fail(k, "initiator decision does not reproduce");
    }
    const bool forwarded = ia == InitiatorAction::kForward;
    if (forwarded != ev.responder.has_value()) {
      return fail(k, "responder presence inconsistent with the decision");
    }
    if (forwarded && *ev.responder == ev.initiator) {
      return fail(k, "initiator partnered with herself");
    }
    InteractionOutcome out;
    if (forwarded) {
      AgentState& other = agents[*ev.responder];
      const auto ra =
          responder_choice(s.policy_of(*ev.responder), other, ev.category);
      if (ra != ev.responder_action) {
        return fail(k, "responder decision does not reproduce");
      }
      out = apply_transition(me, other, ev.category, ia, ra, s.timeout);
      other = std::move(*out.responder);
    } else {
      if (ev.responder_action != ResponderAction::kNotAsked) {
        return fail(k, "responder action logged without a forward");
      }
      out = apply_transition(me, std::nullopt, ev.category, ia,
                             ResponderAction::kNotAsked, s.timeout);
    }
    me = std::move(out.initiator);
    if (out.answered()) me.pending.erase(me.pending.begin());
    if (out.initiator_utility != ev.initiator_utility ||
        out.responder_utility != ev.responder_utility) {
      return fail(k, "realized utilities do not reproduce");
    }
  }
  return {};
}

struct ComparisonRow {
  Policy policy = Policy::kProtocol1;
  double mean_final_entropy = 0.0;
  std::optional<double> answered_fraction;
  std::optional<double> mean_delay;
};

// Runs `base` once per policy (applied to every agent) on the same seed
// and workload. Runs are independent and execute concurrently.
inline std::vector<ComparisonRow> compare_policies(
    const Scenario& base, const std::vector<Policy>& policies) {
  validate(base);
  std::vector<std::future<ComparisonRow>> runs;
  for (Policy p : policies) {
    Scenario variant = base;
    variant.policy = p;
    variant.policies.clear();
    runs.push_back(std::async(std::launch::async, [variant, p] {
      const Metrics m = run_simulation(variant).metrics;
      return ComparisonRow{p, m.mean_final_entropy, m.answered_fraction,
                           m.mean_delay};
    }));
  }
  std::vector<ComparisonRow> rows;
  for (auto& f : runs) rows.push_back(f.get());
  return rows;
}

}  // namespace coutil

#endif  // COUTIL_SIMULATION_HPP_
