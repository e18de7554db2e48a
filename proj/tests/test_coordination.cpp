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

#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "coutil/coordination.hpp"

namespace coutil {
namespace {

constexpr BosAction kO = BosAction::kOpera;
constexpr BosAction kF = BosAction::kFootball;

TEST(Bos, TruthfulReportsSelectOperaOpera) {
  const auto g = make_bos(3, 2, 3, 2, 1);
  const auto out = bos_protocol(truthful_bos_report(g));
  EXPECT_EQ(out.reported_equilibria,
            (std::vector<BosProfile>{{kO, kO}, {kF, kF}}));
  ASSERT_TRUE(out.selected);
  EXPECT_EQ(*out.selected, BosProfile(kO, kO));
  EXPECT_TRUE(is_pure_nash(g, to_profile(*out.selected)));
}

TEST(Bos, HusbandLieSelectsFootballFootball) {
  const auto g = make_bos(3, 2, 3, 2, 1);
  const auto out = bos_protocol(husband_lies_about_opera(truthful_bos_report(g)));
  EXPECT_EQ(out.reported_equilibria, (std::vector<BosProfile>{{kF, kF}}));
  ASSERT_TRUE(out.selected);
  EXPECT_EQ(*out.selected, BosProfile(kF, kF));
  EXPECT_TRUE(is_pure_nash(g, to_profile(*out.selected)));
}

TEST(Bos, TruthfulRankingOrdersByWifeUtility) {
  const auto r = truthful_bos_report(make_bos(3, 2, 3, 2, 1));
  ASSERT_EQ(r.wife_ranking.size(), 4u);
  EXPECT_EQ(r.wife_ranking[0], BosProfile(kO, kO));
  EXPECT_EQ(r.wife_ranking[1], BosProfile(kF, kF));
}

TEST(Bos, CyclingReportsHaveNoEquilibrium) {
  BosReport r;
  r.husband_br_to_opera = kF;
  r.husband_br_to_football = kO;
  const auto out = bos_protocol(r);
  EXPECT_TRUE(out.reported_equilibria.empty());
  EXPECT_FALSE(out.selected);
}

TEST(Bos, RankingErrors) {
  BosReport r;
  r.wife_ranking = {{kO, kO}, {kO, kO}, {kF, kF}};
  EXPECT_THROW(bos_protocol(r), InvalidArgument);
  r.wife_ranking = {{kO, kO}};
  EXPECT_THROW(bos_protocol(r), InvalidArgument);
}

TEST(Bos, ProtocolTableIsCoordination) {
  const auto g = make_bos(3, 2, 3, 2, 1);
  const auto truthful = truthful_bos_report(g);
  const auto table = bos_protocol_table(
      {{"truthful", truthful}},
      {{"truthful", truthful}, {"lies_about_opera", husband_lies_about_opera(truthful)}});
  const auto game = BayesianGame::publicly_known(g);
  EXPECT_EQ(table.output({0, 0}, 0), (Profile{0, 0}));
  EXPECT_EQ(table.output({0, 1}, 0), (Profile{1, 1}));
  EXPECT_TRUE(check_self_enforcing(table, game).holds);
  const auto v = is_coordination(table, game);
  EXPECT_TRUE(v.applicable);
  ASSERT_TRUE(v.holds);
  EXPECT_EQ(v.witness->agent, 0u);
  EXPECT_DOUBLE_EQ(v.witness->utility, 3.0);
  EXPECT_DOUBLE_EQ(v.witness->misreport_utility, 2.0);
}

TEST(Bos, ProtocolTableRejectsReportsWithoutEquilibrium) {
  BosReport cycle;
  cycle.husband_br_to_opera = kF;
  cycle.husband_br_to_football = kO;
  EXPECT_THROW(bos_protocol_table({{"t", BosReport{}}}, {{"cycle", cycle}}),
               InvalidArgument);
}

// The wife never gains by misreporting: against every husband report for
// which her truthful report yields an equilibrium, no wife report selects a
// profile she values more. Husband reports that cycle under the truthful
// wife report are outside this comparison.
TEST(Bos, WifeTruthfulnessIsDominant) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> base(-3.0, 3.0), gap(0.1, 3.0);
  const std::vector<BosAction> acts = {kO, kF};
  for (int trial = 0; trial < 50; ++trial) {
    const double c = base(rng);
    const double b_w = c + gap(rng), a_w = b_w + gap(rng);
    const double b_h = c + gap(rng), a_h = b_h + gap(rng);
    const auto g = make_bos(a_w, b_w, a_h, b_h, c);
    const auto truthful = truthful_bos_report(g);
    int excluded = 0;
    for (BosAction ho : acts) {
      for (BosAction hf : acts) {
        BosReport base_report = truthful;
        base_report.husband_br_to_opera = ho;
        base_report.husband_br_to_football = hf;
        const auto honest = bos_protocol(base_report);
        if (!honest.selected) {
          ++excluded;
          EXPECT_EQ(ho, kF);
          EXPECT_EQ(hf, kO);
          continue;
        }
        const double u = g.utility(0, to_profile(*honest.selected));
        for (BosAction wo : acts) {
          for (BosAction wf : acts) {
            BosReport lie = base_report;
            lie.wife_br_to_opera = wo;
            lie.wife_br_to_football = wf;
            const auto out = bos_protocol(lie);
            if (!out.selected) continue;
            EXPECT_LE(g.utility(0, to_profile(*out.selected)), u);
          }
        }
      }
    }
    EXPECT_EQ(excluded, 1);
  }
}

// Independent second-price oracle: sort a copy of the bids.
std::vector<double> OracleUtilities(const std::vector<double>& v,
                                    const std::vector<double>& b) {
  std::size_t w = 0;
  for (std::size_t i = 1; i < b.size(); ++i) {
    if (b[i] > b[w]) w = i;
  }
  std::vector<double> sorted = b;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::vector<double> u(b.size(), 0.0);
  u[w] = v[w] - sorted[1];
  return u;
}

TEST(Vickrey, ExampleAuction) {
  const std::vector<double> v = {10, 7, 3}, b = {10, 7, 3};
  const auto out = vickrey_auction(v, b);
  EXPECT_EQ(out.winner, 0u);
  EXPECT_DOUBLE_EQ(out.price, 7.0);
  EXPECT_EQ(out.utilities, (std::vector<double>{3, 0, 0}));
}

TEST(Vickrey, TieGoesToLowestIndexAndPaysTheTie) {
  const std::vector<double> b = {5, 8, 8};
  const auto out = vickrey_allocate(b);
  EXPECT_EQ(out.winner, 1u);
  EXPECT_DOUBLE_EQ(out.price, 8.0);
}

TEST(Vickrey, RejectsBadInput) {
  const std::vector<double> one = {1}, neg = {1, -1};
  EXPECT_THROW(vickrey_allocate(one), InvalidArgument);
  EXPECT_THROW(vickrey_allocate(neg), InvalidArgument);
  const std::vector<double> v = {1, 2, 3}, b = {1, 2};
  EXPECT_THROW(vickrey_utilities(v, b), InvalidArgument);
}

TEST(Vickrey, MatchesSortingOracleOnRandomProfiles) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> d(0, 10), n(2, 5);
  for (int trial = 0; trial < 2000; ++trial) {
    const int k = n(rng);
    std::vector<double> v(k), b(k);
    for (int i = 0; i < k; ++i) {
      v[i] = d(rng);
      b[i] = d(rng);
    }
    EXPECT_EQ(vickrey_utilities(v, b), OracleUtilities(v, b));
  }
}

TEST(Vickrey, TruthfulBiddingIsDominantOnGrid) {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i);
  EXPECT_FALSE(vickrey_truthfulness_check(grid, grid, 2));
  EXPECT_FALSE(vickrey_truthfulness_check(grid, grid, 3));
}

TEST(Vickrey, FirstPriceIsNotTruthful) {
  const std::vector<double> grid = {0, 1, 2, 3};
  const auto cx = vickrey_truthfulness_check(grid, grid, 2, Pricing::kFirstPrice);
  ASSERT_TRUE(cx);
  EXPECT_GT(cx->alternative_utility, cx->truthful_utility);
  std::vector<double> vals(2, 0.0);
  vals[cx->agent] = cx->valuation;
  std::vector<double> bids = cx->bids;
  bids[cx->agent] = cx->alternative_bid;
  EXPECT_DOUBLE_EQ(vickrey_utilities(vals, bids, Pricing::kFirstPrice)[cx->agent],
                   cx->alternative_utility);
}

TEST(Vickrey, GameIsNotAmenableAndProtocolIsCoordination) {
  const std::vector<double> values = {0, 1, 2}, bids = {0, 1, 2};
  const auto game = make_vickrey_game(values, bids, 2);
  const auto amen = is_coutility_amenable(game);
  EXPECT_FALSE(amen.holds);
  const auto table = vickrey_protocol_table(values, bids, game);
  EXPECT_TRUE(table.inputs_are_types());
  EXPECT_FALSE(check_self_enforcing(table, game, Positivity::kExPost).holds);
  EXPECT_TRUE(check_self_enforcing(table, game, Positivity::kExpected).holds);
  EXPECT_TRUE(is_coordination(table, game, Positivity::kExpected).holds);
  const auto report = classify_protocol(table, game, Positivity::kExpected);
  ASSERT_TRUE(report.coutility_skipped);
}

TEST(Vickrey, ProtocolTableRequiresValuationsOnBidGrid) {
  const std::vector<double> values = {0, 5}, bids = {0, 1};
  const auto game = make_vickrey_game(bids, bids, 2);
  EXPECT_THROW(vickrey_protocol_table(values, bids, game), InvalidArgument);
}

}  // namespace
}  // namespace coutil
