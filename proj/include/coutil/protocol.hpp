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

// Exhaustive classification of protocols over finite Bayesian games:
// self-enforcing, coordination, co-utility-amenable, strictly or relaxedly
// co-utile.
//
// A protocol is a table from (input profile, auxiliary input) to a strategy
// profile. When `inputs_are_types` is set, the inputs are the agents'
// reported types and a run is evaluated with truthful reports (input =
// true type profile). Otherwise inputs are opaque and every input profile
// is checked against every type profile.
//
// Runs are enumerated inputs-major, then aux, then types, all in
// lexicographic order; witnesses are the first failure in that order.

#ifndef COUTIL_PROTOCOL_HPP_
#define COUTIL_PROTOCOL_HPP_

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coutil/core.hpp"
#include "coutil/game.hpp"

namespace coutil {

class ProtocolTable {
 public:
  ProtocolTable() = default;

  // `outputs` is indexed by input_index * aux.size() + aux_index.
  ProtocolTable(std::vector<std::vector<std::string>> inputs,
                std::vector<std::string> aux, std::vector<Profile> outputs,
                bool inputs_are_types = false)
      : inputs_(std::move(inputs)),
        aux_(std::move(aux)),
        outputs_(std::move(outputs)),
        inputs_are_types_(inputs_are_types) {
    if (inputs_.empty()) throw InvalidArgument("protocol has no agents");
    if (aux_.empty()) throw InvalidArgument("auxiliary domain is empty");
    input_space_ = ProfileSpace(radices_of(inputs_));
    if (outputs_.size() != input_space_.size() * aux_.size()) {
      throw InvalidArgument("protocol table has " +
                            std::to_string(outputs_.size()) +
                            " entries, expected " +
                            std::to_string(input_space_.size() * aux_.size()));
    }
    for (const auto& o : outputs_) {
      if (o.size() != inputs_.size()) {
        throw InvalidArgument("protocol output has wrong number of agents");
      }
    }
  }

  // fn(input profile, aux index) -> strategy profile.
  template <typename Fn>
  static ProtocolTable tabulate(std::vector<std::vector<std::string>> inputs,
                                std::vector<std::string> aux, Fn&& fn,
                                bool inputs_are_types = false) {
    ProfileSpace space(radices_of(inputs));
    std::vector<Profile> outputs;
    space.for_each([&](const Profile& c) {
      for (std::size_t x = 0; x < aux.size(); ++x) outputs.push_back(fn(c, x));
    });
    return ProtocolTable(std::move(inputs), std::move(aux), std::move(outputs),
                         inputs_are_types);
  }

  // Ignores its (single, "none") inputs and always proposes `output`.
  static ProtocolTable constant(Profile output) {
    std::vector<std::vector<std::string>> inputs(output.size(), {"none"});
    return ProtocolTable(std::move(inputs), {"none"}, {std::move(output)});
  }

  std::size_t agent_count() const { return inputs_.size(); }
  const std::vector<std::vector<std::string>>& inputs() const {
    return inputs_;
  }
  const std::vector<std::string>& aux() const { return aux_; }
  const ProfileSpace& input_space() const { return input_space_; }
  bool inputs_are_types() const { return inputs_are_types_; }
  const std::vector<Profile>& outputs() const { return outputs_; }

  const Profile& output(const Profile& inputs, std::size_t aux) const {
    if (aux >= aux_.size()) throw InvalidArgument("aux index out of range");
    return outputs_[input_space_.index(inputs) * aux_.size() + aux];
  }

 private:
  std::vector<std::vector<std::string>> inputs_;
  std::vector<std::string> aux_;
  ProfileSpace input_space_;
  std::vector<Profile> outputs_;
  bool inputs_are_types_ = false;
};

// Throws DomainMismatch unless every output is a strategy profile of `game`
// (and, for type-input protocols, the inputs coincide with the type sets).
inline void validate_domains(const ProtocolTable& protocol,
                             const BayesianGame& game) {
  if (protocol.agent_count() != game.agent_count()) {
    throw DomainMismatch("protocol has " +
                         std::to_string(protocol.agent_count()) +
                         " agents, game has " +
                         std::to_string(game.agent_count()));
  }
  for (const auto& o : protocol.outputs()) {
    if (!game.strategy_space().contains(o)) {
      throw DomainMismatch("protocol output is not a strategy profile");
    }
  }
  if (protocol.inputs_are_types() && protocol.inputs() != game.type_sets()) {
    throw DomainMismatch(
        "protocol reads reported types but its input domains differ from "
        "the game's type sets");
  }
}

namespace detail {

// Calls fn(inputs, aux, types) for every run. Stops when fn returns false.
template <typename Fn>
void for_each_run(const ProtocolTable& protocol, const BayesianGame& game,
                  Fn&& fn) {
  bool go = true;
  if (protocol.inputs_are_types()) {
    game.type_space().for_each([&](const Profile& t) {
      for (std::size_t x = 0; x < protocol.aux().size() && go; ++x) {
        go = fn(t, x, t);
      }
      return go;
    });
    return;
  }
  protocol.input_space().for_each([&](const Profile& c) {
    for (std::size_t x = 0; x < protocol.aux().size() && go; ++x) {
      game.type_space().for_each([&](const Profile& t) {
        go = fn(c, x, t);
        return go;
      });
    }
    return go;
  });
}

}  // namespace detail

enum class Positivity { kExPost, kExpected };

struct SelfEnforcingWitness {
  enum class Kind { kNotEquilibrium, kNonPositiveUtility, kNonPositiveExpected };
  Kind kind = Kind::kNotEquilibrium;
  Profile inputs;
  std::size_t aux = 0;
  // Absent for kNonPositiveExpected, which averages over the prior.
  std::optional<Profile> types;
  Profile output;
  std::size_t agent = 0;
  // For kNotEquilibrium: the profitable deviation.
  std::optional<std::size_t> deviation;
  double utility = 0.0;
  double deviation_utility = 0.0;
};

struct SelfEnforcingVerdict {
  bool holds = true;
  std::optional<SelfEnforcingWitness> witness;
};

// Every output is a pure Nash equilibrium of the realized game for every
// type profile, and utilities are positive (per realization or in
// expectation over the prior).
inline SelfEnforcingVerdict check_self_enforcing(
    const ProtocolTable& protocol, const BayesianGame& game,
    Positivity positivity = Positivity::kExPost) {
  validate_domains(protocol, game);
  SelfEnforcingVerdict verdict;
  auto fail = [&](SelfEnforcingWitness w) {
    verdict.holds = false;
    verdict.witness = std::move(w);
    return false;
  };

  detail::for_each_run(protocol, game, [&](const Profile& c, std::size_t x,
                                           const Profile& t) {
    const Profile& s = protocol.output(c, x);
    const NormalFormGame& g = game.realized(t);
    if (auto dev = find_profitable_deviation(g, s)) {
      return fail({SelfEnforcingWitness::Kind::kNotEquilibrium, c, x, t, s,
                   dev->agent, dev->action, dev->utility,
                   dev->deviation_utility});
    }
    if (positivity == Positivity::kExPost) {
      for (std::size_t i = 0; i < g.agent_count(); ++i) {
        const double u = g.utility(i, s);
        if (!(u > 0.0)) {
          return fail({SelfEnforcingWitness::Kind::kNonPositiveUtility, c, x,
                        t, s, i, std::nullopt, u, 0.0});
        }
      }
    }
    return true;
  });
  if (!verdict.holds || positivity == Positivity::kExPost) return verdict;

  // Expected utility of each agent per (inputs, aux); with type inputs the
  // inputs follow the types, so only aux is fixed.
  const std::size_t n = game.agent_count();
  auto check_expected = [&](const std::optional<Profile>& fixed_inputs,
                            std::size_t x) {
    std::vector<double> expected(n, 0.0);
    game.type_space().for_each([&](const Profile& t) {
      const Profile& c = fixed_inputs ? *fixed_inputs : t;
      const Profile& s = protocol.output(c, x);
      for (std::size_t i = 0; i < n; ++i) {
        expected[i] += game.prior(t) * game.utility(i, s, t);
      }
    });
    for (std::size_t i = 0; i < n; ++i) {
      if (!(expected[i] > 0.0)) {
        Profile c = fixed_inputs ? *fixed_inputs : Profile{};
        Profile s = fixed_inputs ? protocol.output(c, x) : Profile{};
        return fail({SelfEnforcingWitness::Kind::kNonPositiveExpected,
                     std::move(c), x, std::nullopt, std::move(s), i,
                     std::nullopt, expected[i], 0.0});
      }
    }
    return true;
  };
  if (protocol.inputs_are_types()) {
    for (std::size_t x = 0; x < protocol.aux().size(); ++x) {
      if (!check_expected(std::nullopt, x)) break;
    }
  } else {
    protocol.input_space().for_each([&](const Profile& c) {
      for (std::size_t x = 0; x < protocol.aux().size(); ++x) {
        if (!check_expected(c, x)) return false;
      }
      return true;
    });
  }
  return verdict;
}

struct CoordinationWitness {
  Profile types;      // true types
  Profile inputs;     // reports in the base run
  Profile misreport;  // reports after the coalition deviates
  std::size_t aux = 0;
  std::size_t agent = 0;  // the agent whose utility changes
  double utility = 0.0;
  double misreport_utility = 0.0;
};

struct CoordinationVerdict {
  // False when the protocol is not self-enforcing.
  bool applicable = true;
  bool holds = false;
  std::optional<CoordinationWitness> witness;
};

// Some coalition of agents other than j changes its reports and j's utility
// changes. With type inputs the base reports are truthful; with opaque
// inputs every base input profile is tried.
inline CoordinationVerdict is_coordination(
    const ProtocolTable& protocol, const BayesianGame& game,
    Positivity positivity = Positivity::kExPost) {
  CoordinationVerdict verdict;
  if (!check_self_enforcing(protocol, game, positivity).holds) {
    verdict.applicable = false;
    return verdict;
  }
  const std::size_t n = game.agent_count();
  detail::for_each_run(protocol, game, [&](const Profile& c, std::size_t x,
                                           const Profile& t) {
    const Profile& s = protocol.output(c, x);
    for (std::size_t j = 0; j < n; ++j) {
      const double base = game.utility(j, s, t);
      bool found = false;
      protocol.input_space().for_each([&](const Profile& c2) {
        if (c2[j] != c[j] || c2 == c) return true;
        const double other = game.utility(j, protocol.output(c2, x), t);
        if (!approx_equal(base, other)) {
          verdict.holds = true;
          verdict.witness = CoordinationWitness{t, c, c2, x, j, base, other};
          found = true;
          return false;
        }
        return true;
      });
      if (found) return false;
    }
    return true;
  });
  return verdict;
}

struct AmenabilityWitness {
  std::size_t changed_agent = 0;   // i, whose type is switched
  std::size_t affected_agent = 0;  // j, whose utility moves
  Profile strategies;
  Profile types;
  std::size_t alternative_type = 0;
  double utility = 0.0;
  double alternative_utility = 0.0;
};

struct AmenabilityVerdict {
  bool holds = true;
  std::optional<AmenabilityWitness> witness;
};

// No agent's utility depends on another agent's type.
inline AmenabilityVerdict is_coutility_amenable(const BayesianGame& game) {
  AmenabilityVerdict verdict;
  const std::size_t n = game.agent_count();
  game.type_space().for_each([&](const Profile& t) {
    bool ok = true;
    game.strategy_space().for_each([&](const Profile& s) {
      for (std::size_t i = 0; i < n && ok; ++i) {
        Profile t2 = t;
        for (std::size_t alt = 0; alt < game.type_sets()[i].size() && ok;
             ++alt) {
          if (alt == t[i]) continue;
          t2[i] = alt;
          for (std::size_t j = 0; j < n && ok; ++j) {
            if (j == i) continue;
            const double u = game.utility(j, s, t);
            const double v = game.utility(j, s, t2);
            if (!approx_equal(u, v)) {
              verdict.holds = false;
              verdict.witness = AmenabilityWitness{i, j, s, t, alt, u, v};
              ok = false;
            }
          }
        }
      }
      return ok;
    });
    return ok;
  });
  return verdict;
}

enum class CoUtility { kNone, kRelaxed, kStrict };

inline const char* to_string(CoUtility c) {
  switch (c) {
    case CoUtility::kStrict:
      return "strict";
    case CoUtility::kRelaxed:
      return "relaxed";
    case CoUtility::kNone:
      break;
  }
  return "none";
}

// Raised by classify_coutility when the game/protocol is outside the
// definitions' domain.
class PreconditionError : public Error {
 public:
  enum class Kind {
    kNotTwoAgents,
    kNotAmenable,
    kNotSelfEnforcing,
    kCoordination,
  };
  PreconditionError(Kind kind, const std::string& what)
      : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// A run where the protocol output leaves agent `agent` short of her best
// achievable utility over all strategy profiles.
struct MaximalityWitness {
  Profile inputs;
  std::size_t aux = 0;
  Profile types;
  Profile output;
  double utility = 0.0;
  Profile best_profile;
  double best_utility = 0.0;
};

struct CoUtilityVerdict {
  CoUtility level = CoUtility::kNone;
  std::vector<bool> maximal;  // per agent
  std::vector<std::optional<MaximalityWitness>> witnesses;
};

// Maximality is over joint strategy profiles: the output must give agent i
// at least max_{s'} u_i(s', t) in every run.
inline CoUtilityVerdict classify_coutility(
    const ProtocolTable& protocol, const BayesianGame& game,
    Positivity positivity = Positivity::kExPost) {
  using Kind = PreconditionError::Kind;
  if (game.agent_count() != 2) {
    throw PreconditionError(Kind::kNotTwoAgents,
                            "co-utility is defined for two-agent games");
  }
  if (!is_coutility_amenable(game).holds) {
    throw PreconditionError(Kind::kNotAmenable,
                            "game is not co-utility-amenable");
  }
  const auto coordination = is_coordination(protocol, game, positivity);
  if (!coordination.applicable) {
    throw PreconditionError(Kind::kNotSelfEnforcing,
                            "protocol is not self-enforcing");
  }
  if (coordination.holds) {
    throw PreconditionError(Kind::kCoordination,
                            "protocol is a coordination protocol");
  }

  CoUtilityVerdict verdict;
  verdict.maximal.assign(2, true);
  verdict.witnesses.resize(2);
  for (std::size_t i = 0; i < 2; ++i) {
    detail::for_each_run(protocol, game, [&](const Profile& c, std::size_t x,
                                             const Profile& t) {
      const NormalFormGame& g = game.realized(t);
      const Profile& s = protocol.output(c, x);
      const double u = g.utility(i, s);
      Profile best_s = s;
      double best = u;
      g.space().for_each([&](const Profile& alt) {
        const double v = g.utility(i, alt);
        if (v > best) {
          best = v;
          best_s = alt;
        }
      });
      if (definitely_greater(best, u)) {
        verdict.maximal[i] = false;
        verdict.witnesses[i] = MaximalityWitness{c, x, t, s, u, best_s, best};
        return false;
      }
      return true;
    });
  }
  const int count = static_cast<int>(verdict.maximal[0]) +
                    static_cast<int>(verdict.maximal[1]);
  verdict.level = count == 2   ? CoUtility::kStrict
                  : count == 1 ? CoUtility::kRelaxed
                               : CoUtility::kNone;
  return verdict;
}

// The whole ladder for one (protocol, game) pair. Co-utility is only
// evaluated when its preconditions hold; otherwise `coutility_skipped`
// names the failed precondition.
struct ClassificationReport {
  SelfEnforcingVerdict self_enforcing;
  CoordinationVerdict coordination;
  AmenabilityVerdict amenable;
  CoUtilityVerdict coutility;
  std::optional<std::string> coutility_skipped;
  Positivity positivity = Positivity::kExPost;
};

inline ClassificationReport classify_protocol(
    const ProtocolTable& protocol, const BayesianGame& game,
    Positivity positivity = Positivity::kExPost) {
  ClassificationReport report;
  report.positivity = positivity;
  report.self_enforcing = check_self_enforcing(protocol, game, positivity);
  report.coordination = is_coordination(protocol, game, positivity);
  report.amenable = is_coutility_amenable(game);
  try {
    report.coutility = classify_coutility(protocol, game, positivity);
  } catch (const PreconditionError& e) {
    report.coutility = CoUtilityVerdict{};
    report.coutility_skipped = e.what();
  }
  return report;
}

}  // namespace coutil

#endif  // COUTIL_PROTOCOL_HPP_
