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

// Two coordination protocols: equilibrium selection from reported best
// responses in Battle of the Sexes, and the second-price sealed-bid
// auction.

#ifndef COUTIL_COORDINATION_HPP_
#define COUTIL_COORDINATION_HPP_

#include <algorithm>
#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coutil/core.hpp"
#include "coutil/game.hpp"
#include "coutil/protocol.hpp"

namespace coutil {

// ---------------------------------------------------------------------------
// Battle of the Sexes
// ---------------------------------------------------------------------------

enum class BosAction : std::size_t { kOpera = 0, kFootball = 1 };

// (wife action, husband action), matching make_bos agent order.
using BosProfile = std::pair<BosAction, BosAction>;

inline const char* to_string(BosAction a) {
  return a == BosAction::kOpera ? "Opera" : "Football";
}

inline Profile to_profile(BosProfile p) {
  return {static_cast<std::size_t>(p.first),
          static_cast<std::size_t>(p.second)};
}

struct BosReport {
  BosAction wife_br_to_opera = BosAction::kOpera;
  BosAction wife_br_to_football = BosAction::kFootball;
  BosAction husband_br_to_opera = BosAction::kOpera;
  BosAction husband_br_to_football = BosAction::kFootball;
  // Wife's preference order, best first. Must rank every reported
  // equilibrium; profiles that are not reported equilibria are ignored.
  std::vector<BosProfile> wife_ranking = {
      {BosAction::kOpera, BosAction::kOpera},
      {BosAction::kFootball, BosAction::kFootball}};

  friend bool operator==(const BosReport&, const BosReport&) = default;
};

struct BosOutcome {
  // Fixed points of the reported best-response graph, lexicographic order.
  std::vector<BosProfile> reported_equilibria;
  // Wife's highest-ranked reported equilibrium; empty when there is none.
  std::optional<BosProfile> selected;
};

inline BosOutcome bos_protocol(const BosReport& r) {
  for (std::size_t a = 0; a < r.wife_ranking.size(); ++a) {
    for (std::size_t b = a + 1; b < r.wife_ranking.size(); ++b) {
      if (r.wife_ranking[a] == r.wife_ranking[b]) {
        throw InvalidArgument("wife ranking lists a profile twice");
      }
    }
  }
  auto wife_br = [&](BosAction husband) {
    return husband == BosAction::kOpera ? r.wife_br_to_opera
                                        : r.wife_br_to_football;
  };
  auto husband_br = [&](BosAction wife) {
    return wife == BosAction::kOpera ? r.husband_br_to_opera
                                     : r.husband_br_to_football;
  };
  BosOutcome out;
  for (BosAction w : {BosAction::kOpera, BosAction::kFootball}) {
    for (BosAction h : {BosAction::kOpera, BosAction::kFootball}) {
      if (wife_br(h) == w && husband_br(w) == h) {
        out.reported_equilibria.emplace_back(w, h);
      }
    }
  }
  if (out.reported_equilibria.empty()) return out;
  std::size_t best_rank = r.wife_ranking.size();
  for (const auto& eq : out.reported_equilibria) {
    auto it = std::find(r.wife_ranking.begin(), r.wife_ranking.end(), eq);
    if (it == r.wife_ranking.end()) {
      throw InvalidArgument(std::string("wife ranking omits the reported "
                                        "equilibrium (") +
                            to_string(eq.first) + "," + to_string(eq.second) +
                            ")");
    }
    best_rank = std::min(
        best_rank, static_cast<std::size_t>(it - r.wife_ranking.begin()));
  }
  out.selected = r.wife_ranking[best_rank];
  return out;
}

// Best responses read off the game, with the wife ranking every profile by
// her own utility (ties keep lexicographic order).
inline BosReport truthful_bos_report(const NormalFormGame& bos) {
  auto unique_br = [&](std::size_t agent, BosAction other) {
    PartialProfile opp(2);
    opp[1 - agent] = static_cast<std::size_t>(other);
    const auto br = best_responses(bos, agent, opp);
    if (br.size() != 1) {
      throw InvalidArgument("BoS best response is not unique");
    }
    return static_cast<BosAction>(br.front());
  };
  BosReport r;
  r.wife_br_to_opera = unique_br(0, BosAction::kOpera);
  r.wife_br_to_football = unique_br(0, BosAction::kFootball);
  r.husband_br_to_opera = unique_br(1, BosAction::kOpera);
  r.husband_br_to_football = unique_br(1, BosAction::kFootball);
  r.wife_ranking.clear();
  for (BosAction w : {BosAction::kOpera, BosAction::kFootball}) {
    for (BosAction h : {BosAction::kOpera, BosAction::kFootball}) {
      r.wife_ranking.emplace_back(w, h);
    }
  }
  std::stable_sort(r.wife_ranking.begin(), r.wife_ranking.end(),
                   [&](BosProfile a, BosProfile b) {
                     return bos.utility(0, to_profile(a)) >
                            bos.utility(0, to_profile(b));
                   });
  return r;
}

// The husband's lie: claim Football is his best response to Opera, leaving
// (Football, Football) as the only reported equilibrium.
inline BosReport husband_lies_about_opera(BosReport r) {
  r.husband_br_to_opera = BosAction::kFootball;
  return r;
}

// The BoS protocol as a table over explicit report menus. Inputs are opaque
// report labels; agent 0's menu is read for the wife's fields, agent 1's for
// the husband's. Every report combination must yield an equilibrium.
inline ProtocolTable bos_protocol_table(
    const std::vector<std::pair<std::string, BosReport>>& wife_menu,
    const std::vector<std::pair<std::string, BosReport>>& husband_menu) {
  std::vector<std::vector<std::string>> inputs(2);
  for (const auto& [label, _] : wife_menu) inputs[0].push_back(label);
  for (const auto& [label, _] : husband_menu) inputs[1].push_back(label);
  return ProtocolTable::tabulate(
      std::move(inputs), {"none"}, [&](const Profile& c, std::size_t) {
        BosReport merged = wife_menu.at(c[0]).second;
        const BosReport& h = husband_menu.at(c[1]).second;
        merged.husband_br_to_opera = h.husband_br_to_opera;
        merged.husband_br_to_football = h.husband_br_to_football;
        const auto out = bos_protocol(merged);
        if (!out.selected) {
          throw InvalidArgument("reports '" + wife_menu[c[0]].first + "' / '" +
                                husband_menu[c[1]].first +
                                "' have no reported equilibrium");
        }
        return to_profile(*out.selected);
      });
}

// ---------------------------------------------------------------------------
// Second-price sealed-bid auction
// ---------------------------------------------------------------------------

struct AuctionOutcome {
  std::size_t winner = 0;
  double price = 0.0;
  std::vector<double> utilities;  // empty from vickrey_allocate
};

enum class Pricing { kSecondPrice, kFirstPrice };

// Highest bid wins, ties to the lowest index. Second price is the
// second-highest value of the bid multiset, so a tied winner pays the tie.
inline AuctionOutcome vickrey_allocate(std::span<const double> bids,
                                       Pricing pricing = Pricing::kSecondPrice) {
  if (bids.size() < 2) throw InvalidArgument("an auction needs two bids");
  for (double b : bids) {
    if (!(b >= 0.0)) throw InvalidArgument("bids must be non-negative");
  }
  AuctionOutcome out;
  for (std::size_t i = 1; i < bids.size(); ++i) {
    if (bids[i] > bids[out.winner]) out.winner = i;
  }
  if (pricing == Pricing::kFirstPrice) {
    out.price = bids[out.winner];
    return out;
  }
  double second = -1.0;
  for (std::size_t i = 0; i < bids.size(); ++i) {
    if (i != out.winner) second = std::max(second, bids[i]);
  }
  out.price = second;
  return out;
}

inline std::vector<double> vickrey_utilities(
    std::span<const double> valuations, std::span<const double> bids,
    Pricing pricing = Pricing::kSecondPrice) {
  if (valuations.size() != bids.size()) {
    throw InvalidArgument("need one valuation per bid");
  }
  const AuctionOutcome a = vickrey_allocate(bids, pricing);
  std::vector<double> u(bids.size(), 0.0);
  u[a.winner] = valuations[a.winner] - a.price;
  return u;
}

inline AuctionOutcome vickrey_auction(std::span<const double> valuations,
                                      std::span<const double> bids) {
  AuctionOutcome out = vickrey_allocate(bids);
  out.utilities = vickrey_utilities(valuations, bids);
  return out;
}

struct TruthfulnessCounterexample {
  std::size_t agent = 0;
  double valuation = 0.0;
  std::vector<double> bids;  // opponents' bids with the agent's slot truthful
  double alternative_bid = 0.0;
  double truthful_utility = 0.0;
  double alternative_utility = 0.0;
};

// Exhaustive check that bidding one's valuation is weakly dominant: for
// every agent, valuation in `value_grid` and opponent bids in `bid_grid`,
// no alternative bid in `bid_grid` pays strictly more.
inline std::optional<TruthfulnessCounterexample> vickrey_truthfulness_check(
    std::span<const double> value_grid, std::span<const double> bid_grid,
    std::size_t agents, Pricing pricing = Pricing::kSecondPrice) {
  if (value_grid.empty() || bid_grid.empty()) {
    throw InvalidArgument("truthfulness grids must be non-empty");
  }
  if (agents < 2) throw InvalidArgument("an auction needs two bidders");
  std::vector<std::size_t> radices(agents, bid_grid.size());
  std::optional<TruthfulnessCounterexample> found;
  std::vector<double> valuations(agents, 0.0);
  for (std::size_t i = 0; i < agents && !found; ++i) {
    radices[i] = 1;
    const ProfileSpace opponents(radices);
    radices[i] = bid_grid.size();
    for (double v : value_grid) {
      opponents.for_each([&](const Profile& o) {
        std::vector<double> bids(agents);
        for (std::size_t k = 0; k < agents; ++k) bids[k] = bid_grid[o[k]];
        valuations[i] = v;
        bids[i] = v;
        const double truthful = vickrey_utilities(valuations, bids, pricing)[i];
        for (double alt : bid_grid) {
          std::vector<double> deviated = bids;
          deviated[i] = alt;
          const double u = vickrey_utilities(valuations, deviated, pricing)[i];
          if (definitely_greater(u, truthful)) {
            found = TruthfulnessCounterexample{i, v, bids, alt, truthful, u};
            return false;
          }
        }
        return true;
      });
      if (found) break;
    }
  }
  return found;
}

// Sealed-bid auction as a Bayesian game. Types are valuations; strategies
// are "truthful" (bid the own valuation) or "bid:<b>" for every b in
// `bid_grid`. Utilities depend on other agents' types through their
// truthful bids.
inline BayesianGame make_vickrey_game(std::span<const double> value_grid,
                                      std::span<const double> bid_grid,
                                      std::size_t agents) {
  auto label = [](double x) {
    std::string s = std::to_string(x);
    s.erase(s.find_last_not_of('0') + 1);
    if (s.back() == '.') s.pop_back();
    return s;
  };
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> strategies(agents), types(agents);
  for (std::size_t i = 0; i < agents; ++i) {
    names.push_back("Bidder" + std::to_string(i));
    strategies[i].push_back("truthful");
    for (double b : bid_grid) strategies[i].push_back("bid:" + label(b));
    for (double v : value_grid) types[i].push_back(label(v));
  }
  std::vector<double> values(value_grid.begin(), value_grid.end());
  std::vector<double> grid(bid_grid.begin(), bid_grid.end());
  return BayesianGame::tabulate(
      std::move(names), std::move(strategies), std::move(types), {},
      [&](const Profile& s, const Profile& t) {
        std::vector<double> vals(agents), bids(agents);
        for (std::size_t i = 0; i < agents; ++i) {
          vals[i] = values[t[i]];
          bids[i] = s[i] == 0 ? vals[i] : grid[s[i] - 1];
        }
        return vickrey_utilities(vals, bids);
      });
}

// Collect the reported valuations and propose the profile of those bids.
// Requires value_grid to be a subset of bid_grid.
inline ProtocolTable vickrey_protocol_table(std::span<const double> value_grid,
                                            std::span<const double> bid_grid,
                                            const BayesianGame& game) {
  std::vector<std::size_t> bid_index;
  for (double v : value_grid) {
    auto it = std::find(bid_grid.begin(), bid_grid.end(), v);
    if (it == bid_grid.end()) {
      throw InvalidArgument("every valuation must be a bid in the grid");
    }
    bid_index.push_back(static_cast<std::size_t>(it - bid_grid.begin()) + 1);
  }
  return ProtocolTable::tabulate(
      game.type_sets(), {"none"},
      [&](const Profile& c, std::size_t) {
        Profile s(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) s[i] = bid_index[c[i]];
        return s;
      },
      /*inputs_are_types=*/true);
}

}  // namespace coutil

#endif  // COUTIL_COORDINATION_HPP_
