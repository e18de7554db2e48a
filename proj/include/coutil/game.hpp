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

// Finite games in normal form and brute-force solution concepts over them:
// best responses, pure Nash equilibria and dominant strategies. All
// utility comparisons use kTieTolerance.

#ifndef COUTIL_GAME_HPP_
#define COUTIL_GAME_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coutil/core.hpp"

namespace coutil {

class NormalFormGame {
 public:
  NormalFormGame() = default;

  // `payoffs[k]` holds the utility vector of the k-th profile in
  // lexicographic order (see ProfileSpace).
  NormalFormGame(std::vector<std::string> agents,
                 std::vector<std::vector<std::string>> actions,
                 std::vector<std::vector<double>> payoffs)
      : agents_(std::move(agents)), actions_(std::move(actions)) {
    if (agents_.size() < 2) {
      throw InvalidArgument("a game needs at least two agents");
    }
    if (actions_.size() != agents_.size()) {
      throw InvalidArgument("expected one action set per agent");
    }
    for (std::size_t i = 0; i < actions_.size(); ++i) {
      if (actions_[i].empty()) {
        throw InvalidArgument("action set of agent '" + agents_[i] +
                              "' is empty");
      }
      auto sorted = actions_[i];
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw InvalidArgument("duplicate action label for agent '" +
                              agents_[i] + "'");
      }
    }
    space_ = ProfileSpace(radices_of(actions_));
    if (payoffs.size() != space_.size()) {
      throw InvalidArgument("payoff table has " +
                            std::to_string(payoffs.size()) +
                            " entries, expected " +
                            std::to_string(space_.size()));
    }
    const std::size_t n = agents_.size();
    payoffs_.reserve(space_.size() * n);
    for (std::size_t k = 0; k < payoffs.size(); ++k) {
      if (payoffs[k].size() != n) {
        throw InvalidArgument("payoff vector " + std::to_string(k) +
                              " has wrong length");
      }
      for (double u : payoffs[k]) {
        if (!std::isfinite(u)) throw InvalidArgument("non-finite payoff");
        payoffs_.push_back(u);
      }
    }
  }

  // Builds the payoff tensor by calling fn(profile) -> vector<double>.
  template <typename Fn>
  static NormalFormGame tabulate(std::vector<std::string> agents,
                                 std::vector<std::vector<std::string>> actions,
                                 Fn&& fn) {
    ProfileSpace space(radices_of(actions));
    std::vector<std::vector<double>> payoffs;
    payoffs.reserve(space.size());
    space.for_each([&](const Profile& p) { payoffs.push_back(fn(p)); });
    return NormalFormGame(std::move(agents), std::move(actions),
                          std::move(payoffs));
  }

  std::size_t agent_count() const { return agents_.size(); }
  const std::vector<std::string>& agents() const { return agents_; }
  const std::vector<std::vector<std::string>>& actions() const {
    return actions_;
  }
  const std::vector<std::string>& actions(std::size_t agent) const {
    return actions_.at(agent);
  }
  const ProfileSpace& space() const { return space_; }

  std::span<const double> payoff(std::span<const std::size_t> profile) const {
    const std::size_t n = agents_.size();
    return {payoffs_.data() + space_.index(profile) * n, n};
  }
  double utility(std::size_t agent, std::span<const std::size_t> profile) const {
    check_agent(agent);
    return payoff(profile)[agent];
  }

  std::optional<std::size_t> action_index(std::size_t agent,
                                          const std::string& label) const {
    const auto& set = actions_.at(agent);
    auto it = std::find(set.begin(), set.end(), label);
    if (it == set.end()) return std::nullopt;
    return static_cast<std::size_t>(it - set.begin());
  }

  Profile profile_of(const std::vector<std::string>& labels) const {
    if (labels.size() != agents_.size()) {
      throw InvalidArgument("profile has " + std::to_string(labels.size()) +
                            " labels, expected " +
                            std::to_string(agents_.size()));
    }
    Profile p(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      auto idx = action_index(i, labels[i]);
      if (!idx) {
        throw InvalidArgument("unknown action '" + labels[i] +
                              "' for agent '" + agents_[i] + "'");
      }
      p[i] = *idx;
    }
    return p;
  }
  std::vector<std::string> labels(const Profile& p) const {
    return labels_of(actions_, p);
  }

  void check_agent(std::size_t agent) const {
    if (agent >= agents_.size()) {
      throw InvalidArgument("unknown agent index " + std::to_string(agent));
    }
  }

  friend bool operator==(const NormalFormGame&,
                         const NormalFormGame&) = default;

 private:
  std::vector<std::string> agents_;
  std::vector<std::vector<std::string>> actions_;
  ProfileSpace space_;
  std::vector<double> payoffs_;
};

// A partial profile fixes every agent's action except one (std::nullopt).
using PartialProfile = std::vector<std::optional<std::size_t>>;

// All actions of `agent` maximizing her utility against `opponents`,
// sorted ascending.
inline std::vector<std::size_t> best_responses(const NormalFormGame& game,
                                               std::size_t agent,
                                               const PartialProfile& opponents) {
  game.check_agent(agent);
  if (opponents.size() != game.agent_count()) {
    throw InvalidArgument("opponent profile has wrong length");
  }
  Profile p(game.agent_count());
  for (std::size_t i = 0; i < opponents.size(); ++i) {
    if (i == agent) {
      if (opponents[i]) {
        throw InvalidArgument("opponent profile fixes the responding agent");
      }
      continue;
    }
    if (!opponents[i]) {
      throw InvalidArgument("opponent profile leaves agent " +
                            std::to_string(i) + " unset");
    }
    if (*opponents[i] >= game.actions(i).size()) {
      throw InvalidArgument("action index out of range for agent " +
                            std::to_string(i));
    }
    p[i] = *opponents[i];
  }
  const std::size_t m = game.actions(agent).size();
  std::vector<double> values(m);
  for (std::size_t a = 0; a < m; ++a) {
    p[agent] = a;
    values[a] = game.utility(agent, p);
  }
  const double best = *std::max_element(values.begin(), values.end());
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < m; ++a) {
    if (!definitely_greater(best, values[a])) out.push_back(a);
  }
  return out;
}

// Same as above, taking the opponents from a full profile and ignoring the
// entry of `agent`.
inline std::vector<std::size_t> best_responses_at(const NormalFormGame& game,
                                                  std::size_t agent,
                                                  const Profile& context) {
  game.check_agent(agent);
  PartialProfile opp(context.begin(), context.end());
  opp.at(agent) = std::nullopt;
  return best_responses(game, agent, opp);
}

struct Deviation {
  std::size_t agent = 0;
  std::size_t action = 0;
  double utility = 0.0;            // at the examined profile
  double deviation_utility = 0.0;  // after switching to `action`
};

// First strictly profitable unilateral deviation from `profile` (agents in
// index order, actions ascending), if any.
inline std::optional<Deviation> find_profitable_deviation(
    const NormalFormGame& game, const Profile& profile) {
  Profile p = profile;
  for (std::size_t i = 0; i < game.agent_count(); ++i) {
    const double here = game.utility(i, profile);
    for (std::size_t a = 0; a < game.actions(i).size(); ++a) {
      if (a == profile[i]) continue;
      p[i] = a;
      const double there = game.utility(i, p);
      if (definitely_greater(there, here)) {
        return Deviation{i, a, here, there};
      }
    }
    p[i] = profile[i];
  }
  return std::nullopt;
}

inline bool is_pure_nash(const NormalFormGame& game, const Profile& profile) {
  return !find_profitable_deviation(game, profile).has_value();
}

// Every pure-strategy Nash equilibrium, in lexicographic profile order.
inline std::vector<Profile> pure_nash_equilibria(const NormalFormGame& game) {
  std::vector<Profile> out;
  game.space().for_each([&](const Profile& p) {
    if (is_pure_nash(game, p)) out.push_back(p);
  });
  return out;
}

enum class Dominance { kStrict, kWeak };

// Actions of `agent` that dominate every alternative. Weak: >= against
// every opponent profile and > against at least one, per alternative.
inline std::vector<std::size_t> dominant_strategies(
    const NormalFormGame& game, std::size_t agent,
    Dominance mode = Dominance::kWeak) {
  game.check_agent(agent);
  std::vector<std::size_t> radices = game.space().radices();
  radices[agent] = 1;
  const ProfileSpace opponents(radices);
  const std::size_t m = game.actions(agent).size();

  auto dominates = [&](std::size_t a, std::size_t b) {
    bool somewhere = false;
    bool ok = true;
    opponents.for_each([&](const Profile& o) {
      Profile pa = o, pb = o;
      pa[agent] = a;
      pb[agent] = b;
      const double ua = game.utility(agent, pa);
      const double ub = game.utility(agent, pb);
      if (definitely_greater(ua, ub)) {
        somewhere = true;
      } else if (mode == Dominance::kStrict || definitely_greater(ub, ua)) {
        ok = false;
      }
      return ok;
    });
    return ok && (mode == Dominance::kStrict || somewhere);
  };

  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < m; ++a) {
    bool all = true;
    for (std::size_t b = 0; b < m && all; ++b) {
      if (b != a) all = dominates(a, b);
    }
    if (all) out.push_back(a);
  }
  return out;
}

// u_i' = scale_i * u_i + offset_i.
inline NormalFormGame affine_transform(const NormalFormGame& game,
                                       std::span<const double> scale,
                                       std::span<const double> offset) {
  const std::size_t n = game.agent_count();
  if (scale.size() != n || offset.size() != n) {
    throw InvalidArgument("need one scale and one offset per agent");
  }
  for (double s : scale) {
    if (!(s > 0.0)) throw InvalidArgument("affine scale must be positive");
  }
  return NormalFormGame::tabulate(
      game.agents(), game.actions(), [&](const Profile& p) {
        auto u = game.payoff(p);
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = scale[i] * u[i] + offset[i];
        return v;
      });
}

// Congestion-avoidance game between Alice and Bob (bandwidth units).
inline NormalFormGame make_tcp_game() {
  return NormalFormGame({"Alice", "Bob"},
                        {{"Honest", "Dishonest"}, {"Honest", "Dishonest"}},
                        {{2, 2}, {1, 3}, {3, 1}, {1, 1}});
}

// Battle of the Sexes; agent 0 is the wife, agent 1 the husband.
inline NormalFormGame make_bos(double a_w, double b_w, double a_h, double b_h,
                               double c) {
  if (!(a_w > b_w)) throw InvalidArgument("BoS requires a_W > b_W");
  if (!(b_w > c)) throw InvalidArgument("BoS requires b_W > c");
  if (!(a_h > b_h)) throw InvalidArgument("BoS requires a_H > b_H");
  if (!(b_h > c)) throw InvalidArgument("BoS requires b_H > c");
  return NormalFormGame({"Wife", "Husband"},
                        {{"Opera", "Football"}, {"Opera", "Football"}},
                        {{a_w, b_h}, {c, c}, {c, c}, {b_w, a_h}});
}

// Finite Bayesian game: a normal-form game per type profile plus a common
// prior over type profiles. Strategies are the action labels of the
// realizations, which all share agents and strategy sets.
class BayesianGame {
 public:
  BayesianGame() = default;

  BayesianGame(std::vector<std::vector<std::string>> type_sets,
               std::vector<double> prior,
               std::vector<NormalFormGame> realizations)
      : type_sets_(std::move(type_sets)),
        prior_(std::move(prior)),
        realizations_(std::move(realizations)) {
    type_space_ = ProfileSpace(radices_of(type_sets_));
    if (realizations_.size() != type_space_.size()) {
      throw InvalidArgument("expected one payoff table per type profile");
    }
    const auto& first = realizations_.front();
    if (type_sets_.size() != first.agent_count()) {
      throw InvalidArgument("expected one type set per agent");
    }
    for (const auto& g : realizations_) {
      if (g.agents() != first.agents() || g.actions() != first.actions()) {
        throw InvalidArgument("type realizations disagree on strategy sets");
      }
    }
    if (prior_.size() != type_space_.size()) {
      throw InvalidArgument("prior must cover every type profile");
    }
    double total = 0.0;
    for (double p : prior_) {
      if (!(p >= 0.0) || p > 1.0) {
        throw InvalidArgument("prior probabilities must lie in [0, 1]");
      }
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw InvalidArgument("prior sums to " + std::to_string(total));
    }
  }

  // Publicly known utilities: one type per agent.
  static BayesianGame publicly_known(NormalFormGame game) {
    std::vector<std::vector<std::string>> types(game.agent_count(),
                                                {"public"});
    return BayesianGame(std::move(types), {1.0}, {std::move(game)});
  }

  // fn(strategy profile, type profile) -> utility vector. Prior defaults to
  // uniform when empty.
  template <typename Fn>
  static BayesianGame tabulate(std::vector<std::string> agents,
                               std::vector<std::vector<std::string>> strategies,
                               std::vector<std::vector<std::string>> type_sets,
                               std::vector<double> prior, Fn&& fn) {
    ProfileSpace types(radices_of(type_sets));
    if (prior.empty()) {
      prior.assign(types.size(), 1.0 / static_cast<double>(types.size()));
    }
    std::vector<NormalFormGame> games;
    games.reserve(types.size());
    types.for_each([&](const Profile& t) {
      games.push_back(NormalFormGame::tabulate(
          agents, strategies, [&](const Profile& s) { return fn(s, t); }));
    });
    return BayesianGame(std::move(type_sets), std::move(prior),
                        std::move(games));
  }

  std::size_t agent_count() const { return type_sets_.size(); }
  const std::vector<std::string>& agents() const {
    return realizations_.front().agents();
  }
  const std::vector<std::vector<std::string>>& strategies() const {
    return realizations_.front().actions();
  }
  const ProfileSpace& strategy_space() const {
    return realizations_.front().space();
  }
  const std::vector<std::vector<std::string>>& type_sets() const {
    return type_sets_;
  }
  const ProfileSpace& type_space() const { return type_space_; }
  double prior(const Profile& types) const {
    return prior_[type_space_.index(types)];
  }
  const std::vector<double>& prior_table() const { return prior_; }

  const NormalFormGame& realized(const Profile& types) const {
    return realizations_[type_space_.index(types)];
  }
  const std::vector<NormalFormGame>& realizations() const {
    return realizations_;
  }
  double utility(std::size_t agent, const Profile& strategies,
                 const Profile& types) const {
    return realized(types).utility(agent, strategies);
  }

  bool has_public_utilities() const {
    return type_space_.size() == 1;
  }

 private:
  std::vector<std::vector<std::string>> type_sets_;
  ProfileSpace type_space_;
  std::vector<double> prior_;
  std::vector<NormalFormGame> realizations_;
};

}  // namespace coutil

#endif  // COUTIL_GAME_HPP_
