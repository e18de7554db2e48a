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

// Two-party anonymous query submission.
//
// An initiator holding a query q either submits it to the database herself
// or forwards it to a responder, who submits it on her behalf (accept) or
// declines (reject). Each agent values privacy as the Shannon entropy of
// the categories she has submitted so far, and the initiator additionally
// values a fast answer:
//
//   u(t, f, Y) = alpha * t * f + H(Y)
//
// with t the time left for q, f = 1 while the initiator still waits for
// the answer, and H in bits. Entropy base matters: alpha is expressed in
// bits per second, so switching to nats rescales the privacy term only.
//
// The initiator believes a forwarded query is accepted with probability
// 1/2. Decisions read only the deciding agent's own state.

#ifndef COUTIL_ANON_QUERY_HPP_
#define COUTIL_ANON_QUERY_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coutil/core.hpp"
#include "coutil/game.hpp"
#include "coutil/protocol.hpp"

namespace coutil {

using Query = std::string;  // category label

// Multiset of submitted query categories.
class QueryProfile {
 public:
  QueryProfile() = default;
  QueryProfile(std::initializer_list<std::pair<const std::string, std::uint64_t>>
                   counts) {
    for (const auto& [k, c] : counts) {
      if (c > 0) counts_[k] = c;
    }
  }

  void add(const Query& q, std::uint64_t times = 1) {
    if (times > 0) counts_[q] += times;
  }
  QueryProfile with(const Query& q) const {
    QueryProfile p = *this;
    p.add(q);
    return p;
  }
  std::uint64_t count(const Query& q) const {
    auto it = counts_.find(q);
    return it == counts_.end() ? 0 : it->second;
  }
  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (const auto& [_, c] : counts_) t += c;
    return t;
  }
  bool empty() const { return counts_.empty(); }
  // Categories with a positive count, sorted.
  const std::map<std::string, std::uint64_t>& counts() const {
    return counts_;
  }

  friend bool operator==(const QueryProfile&, const QueryProfile&) = default;

 private:
  std::map<std::string, std::uint64_t> counts_;
};

// Shannon entropy of the category histogram, in bits. H(empty) = 0.
inline double entropy(const QueryProfile& profile) {
  const auto& counts = profile.counts();
  if (counts.size() <= 1) return 0.0;
  // H = log2(N) - (1/N) sum c log2 c
  double n = 0.0;
  double weighted = 0.0;
  for (const auto& [_, c] : counts) {
    const double x = static_cast<double>(c);
    n += x;
    weighted += x * std::log2(x);
  }
  return std::max(0.0, std::log2(n) - weighted / n);
}

inline double utility(double time_left, int interested,
                      const QueryProfile& profile, double alpha) {
  return alpha * time_left * static_cast<double>(interested) +
         entropy(profile);
}

struct PendingQuery {
  Query query;
  double time_left = 0.0;  // may go negative once overdue
  int interested = 1;      // 1 while the answer is still awaited

  friend bool operator==(const PendingQuery&, const PendingQuery&) = default;
};

struct AgentState {
  double alpha = 0.0;
  QueryProfile profile;
  std::vector<PendingQuery> pending;

  friend bool operator==(const AgentState&, const AgentState&) = default;
};

inline void validate(const AgentState& s) {
  if (!(s.alpha >= 0.0) || !std::isfinite(s.alpha)) {
    throw InvalidArgument("alpha must be a finite non-negative number");
  }
  for (const auto& p : s.pending) {
    if (p.interested != 0 && p.interested != 1) {
      throw InvalidArgument("interested flag must be 0 or 1");
    }
  }
}

enum class InitiatorAction { kSubmitDirect, kForward };
enum class ResponderAction { kAccept, kReject, kNotAsked };

inline const char* to_string(InitiatorAction a) {
  return a == InitiatorAction::kSubmitDirect ? "SubmitDirect" : "Forward";
}
inline const char* to_string(ResponderAction a) {
  switch (a) {
    case ResponderAction::kAccept:
      return "Accept";
    case ResponderAction::kReject:
      return "Reject";
    case ResponderAction::kNotAsked:
      break;
  }
  return "NotAsked";
}

namespace detail {

inline std::size_t awaited_entry(const AgentState& s, const Query& q) {
  for (std::size_t k = 0; k < s.pending.size(); ++k) {
    if (s.pending[k].query == q && s.pending[k].interested == 1) return k;
  }
  throw InvalidArgument("query '" + q + "' is not awaiting an answer");
}

}  // namespace detail

// Utility of the initiator if she forwards q: the mean of the accepted
// branch (answer arrives, privacy untouched) and the rejected branch (still
// waiting, one timeout less).
inline double expected_forward_utility(const AgentState& state, const Query& q,
                                       double timeout) {
  const PendingQuery& p = state.pending[detail::awaited_entry(state, q)];
  const double later = p.time_left - timeout;
  return 0.5 * (utility(later, 1, state.profile, state.alpha) +
                utility(later, 0, state.profile, state.alpha));
}

inline double direct_submission_utility(const AgentState& state,
                                        const Query& q) {
  const PendingQuery& p = state.pending[detail::awaited_entry(state, q)];
  return utility(p.time_left, 0, state.profile.with(q), state.alpha);
}

// Submit directly only when that is strictly better than forwarding.
inline InitiatorAction initiator_decision(const AgentState& state,
                                          const Query& q, double timeout) {
  const double direct = direct_submission_utility(state, q);
  const double forward = expected_forward_utility(state, q, timeout);
  return definitely_greater(direct, forward) ? InitiatorAction::kSubmitDirect
                                             : InitiatorAction::kForward;
}

// Accept only when q strictly raises the responder's entropy.
inline ResponderAction responder_decision(const AgentState& state,
                                          const Query& q) {
  return definitely_greater(entropy(state.profile.with(q)),
                            entropy(state.profile))
             ? ResponderAction::kAccept
             : ResponderAction::kReject;
}

struct InteractionOutcome {
  InitiatorAction initiator_action = InitiatorAction::kSubmitDirect;
  ResponderAction responder_action = ResponderAction::kNotAsked;
  AgentState initiator;
  std::optional<AgentState> responder;
  double initiator_utility = 0.0;
  std::optional<double> responder_utility;

  // True when the initiator received her answer in this interaction.
  bool answered() const {
    return initiator_action == InitiatorAction::kSubmitDirect ||
           responder_action == ResponderAction::kAccept;
  }
};

// State updates:
//   direct:  f_i := 0, Y_i := Y_i + q
//   reject:  t_i := t_i - timeout, f_i stays 1
//   accept:  t_i := t_i - timeout, f_i := 0, Y_j := Y_j + q
// Utilities are recomputed from the updated states; the responder is never
// interested in q, so hers is H(Y_j).
inline InteractionOutcome apply_transition(
    const AgentState& initiator, const std::optional<AgentState>& responder,
    const Query& q, InitiatorAction initiator_action,
    ResponderAction responder_action, double timeout) {
  const bool forwarded = initiator_action == InitiatorAction::kForward;
  if (forwarded == (responder_action == ResponderAction::kNotAsked)) {
    throw InvalidArgument(
        "responder acts if and only if the initiator forwards");
  }
  if (forwarded && !responder) {
    throw InvalidArgument("a forwarded query needs a responder");
  }
  InteractionOutcome out;
  out.initiator_action = initiator_action;
  out.responder_action = responder_action;
  out.initiator = initiator;
  out.responder = responder;
  PendingQuery& p = out.initiator.pending[detail::awaited_entry(initiator, q)];
  switch (responder_action) {
    case ResponderAction::kNotAsked:
      p.interested = 0;
      out.initiator.profile.add(q);
      break;
    case ResponderAction::kReject:
      p.time_left -= timeout;
      break;
    case ResponderAction::kAccept:
      p.time_left -= timeout;
      p.interested = 0;
      out.responder->profile.add(q);
      break;
  }
  out.initiator_utility = utility(p.time_left, p.interested,
                                  out.initiator.profile, out.initiator.alpha);
  if (out.responder) {
    out.responder_utility =
        utility(0.0, 0, out.responder->profile, out.responder->alpha);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Verification of a single two-party instance
// ---------------------------------------------------------------------------

struct Protocol1Instance {
  AgentState initiator;
  AgentState responder;
  Query query;
  double timeout = 1.0;
};

// An instance where the initiator awaits `q` with `time_left` seconds left.
inline Protocol1Instance make_instance(QueryProfile initiator_profile,
                                       double alpha, double time_left,
                                       QueryProfile responder_profile,
                                       const Query& q, double timeout = 1.0) {
  Protocol1Instance inst;
  inst.initiator.alpha = alpha;
  inst.initiator.profile = std::move(initiator_profile);
  inst.initiator.pending.push_back({q, time_left, 1});
  inst.responder.profile = std::move(responder_profile);
  inst.query = q;
  inst.timeout = timeout;
  return inst;
}

struct Protocol1Verdict {
  InitiatorAction initiator_action = InitiatorAction::kForward;
  // What the responder does if asked.
  ResponderAction responder_action = ResponderAction::kReject;
  // Initiator utility per own action (forward in expectation), indexed by
  // InitiatorAction.
  std::array<double, 2> initiator_utilities{};
  // Responder utility per (initiator action, responder action in
  // {Accept, Reject}).
  std::array<std::array<double, 2>, 2> responder_utilities{};
  bool equilibrium = false;
  bool initiator_maximal = false;
  bool responder_maximal = false;
  CoUtility level = CoUtility::kNone;
  // Hypotheses under which co-utility is argued for the instance.
  bool responder_entropy_positive = false;        // H(Y_j) > 0
  bool responder_entropy_after_positive = false;  // H(Y_j + q) > 0
  bool forward_expectation_positive = false;      // E[u_i | forward] > 0
};

// Enumerates the four action combinations. The initiator is scored by her
// own belief (forwarding is worth the 1/2-1/2 mix of its two outcomes), the
// responder by her realized utility. Maximality is over all combinations.
inline Protocol1Verdict verify_protocol1(const Protocol1Instance& inst) {
  validate(inst.initiator);
  validate(inst.responder);
  const auto& q = inst.query;
  const double timeout = inst.timeout;
  constexpr std::size_t kDirect = 0, kForward = 1;
  constexpr std::size_t kAccept = 0, kReject = 1;

  const auto direct =
      apply_transition(inst.initiator, inst.responder, q,
                       InitiatorAction::kSubmitDirect,
                       ResponderAction::kNotAsked, timeout);
  const auto accepted =
      apply_transition(inst.initiator, inst.responder, q,
                       InitiatorAction::kForward, ResponderAction::kAccept,
                       timeout);
  const auto rejected =
      apply_transition(inst.initiator, inst.responder, q,
                       InitiatorAction::kForward, ResponderAction::kReject,
                       timeout);

  Protocol1Verdict v;
  v.initiator_action = initiator_decision(inst.initiator, q, timeout);
  v.responder_action = responder_decision(inst.responder, q);
  v.initiator_utilities[kDirect] = direct.initiator_utility;
  v.initiator_utilities[kForward] =
      0.5 * (accepted.initiator_utility + rejected.initiator_utility);
  // Responder's action is moot after a direct submission.
  v.responder_utilities[kDirect] = {*direct.responder_utility,
                                    *direct.responder_utility};
  v.responder_utilities[kForward] = {*accepted.responder_utility,
                                     *rejected.responder_utility};

  const std::size_t ia =
      v.initiator_action == InitiatorAction::kSubmitDirect ? kDirect : kForward;
  const std::size_t ra =
      v.responder_action == ResponderAction::kAccept ? kAccept : kReject;
  const double ui = v.initiator_utilities[ia];
  const double uj = v.responder_utilities[ia][ra];

  v.equilibrium = !definitely_greater(v.initiator_utilities[1 - ia], ui) &&
                  !definitely_greater(v.responder_utilities[ia][1 - ra], uj);

  double best_i = std::max(v.initiator_utilities[0], v.initiator_utilities[1]);
  double best_j = uj;
  for (const auto& row : v.responder_utilities) {
    for (double u : row) best_j = std::max(best_j, u);
  }
  v.initiator_maximal = !definitely_greater(best_i, ui);
  v.responder_maximal = !definitely_greater(best_j, uj);
  if (v.equilibrium) {
    const int count = static_cast<int>(v.initiator_maximal) +
                      static_cast<int>(v.responder_maximal);
    v.level = count == 2   ? CoUtility::kStrict
              : count == 1 ? CoUtility::kRelaxed
                           : CoUtility::kNone;
  }

  v.responder_entropy_positive = entropy(inst.responder.profile) > 0.0;
  v.responder_entropy_after_positive =
      entropy(inst.responder.profile.with(q)) > 0.0;
  v.forward_expectation_positive = v.initiator_utilities[kForward] > 0.0;
  return v;
}

// The instance as a two-agent Bayesian game with one type per agent.
// Strategies: initiator {SubmitDirect, Forward}, responder {Accept,
// Reject}. The initiator's utility for Forward is her 1/2 belief
// expectation, independent of the responder's strategy.
inline BayesianGame make_query_game(const Protocol1Instance& inst) {
  const auto v = verify_protocol1(inst);
  return BayesianGame::tabulate(
      {"Initiator", "Responder"},
      {{"SubmitDirect", "Forward"}, {"Accept", "Reject"}},
      {{"initiator"}, {"responder"}}, {1.0},
      [&](const Profile& s, const Profile&) {
        return std::vector<double>{v.initiator_utilities[s[0]],
                                   v.responder_utilities[s[0]][s[1]]};
      });
}

// Several candidate states per role form the type sets; utilities of each
// agent read only her own type.
inline BayesianGame make_query_game(const std::vector<AgentState>& initiators,
                                    const std::vector<AgentState>& responders,
                                    const Query& q, double timeout) {
  std::vector<std::vector<std::string>> types(2);
  for (std::size_t k = 0; k < initiators.size(); ++k) {
    types[0].push_back("I" + std::to_string(k));
  }
  for (std::size_t k = 0; k < responders.size(); ++k) {
    types[1].push_back("R" + std::to_string(k));
  }
  return BayesianGame::tabulate(
      {"Initiator", "Responder"},
      {{"SubmitDirect", "Forward"}, {"Accept", "Reject"}}, std::move(types),
      {}, [&](const Profile& s, const Profile& t) {
        const auto v = verify_protocol1(
            {initiators.at(t[0]), responders.at(t[1]), q, timeout});
        return std::vector<double>{v.initiator_utilities[s[0]],
                                   v.responder_utilities[s[0]][s[1]]};
      });
}

// Protocol 1 on a single instance: a constant table proposing the
// initiator's decision and the responder's would-be decision.
inline ProtocolTable protocol1_table(const Protocol1Instance& inst) {
  const auto v = verify_protocol1(inst);
  return ProtocolTable::constant(
      {v.initiator_action == InitiatorAction::kSubmitDirect ? 0u : 1u,
       v.responder_action == ResponderAction::kAccept ? 0u : 1u});
}

}  // namespace coutil

#endif  // COUTIL_ANON_QUERY_HPP_
