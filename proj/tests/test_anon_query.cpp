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

#include <cmath>
#include <functional>
#include <vector>

#include "coutil/anon_query.hpp"

namespace coutil {
namespace {

// Direct summation -sum p log2 p, independent of the library formula.
double OracleEntropy(const std::vector<unsigned>& counts) {
  double n = 0;
  for (unsigned c : counts) n += c;
  double h = 0;
  for (unsigned c : counts) {
    if (c == 0) continue;
    const double p = c / n;
    h -= p * std::log2(p);
  }
  return h;
}

QueryProfile FromCounts(const std::vector<unsigned>& counts) {
  QueryProfile p;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    p.add(std::string(1, static_cast<char>('a' + k)), counts[k]);
  }
  return p;
}

// Calls fn on every count vector of length `cats` with total <= max_total.
void ForEachCounts(std::size_t cats, unsigned max_total,
                   const std::function<void(const std::vector<unsigned>&)>& fn) {
  std::vector<unsigned> c(cats, 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t k,
                                                       unsigned left) {
    if (k == cats) {
      fn(c);
      return;
    }
    for (unsigned x = 0; x <= left; ++x) {
      c[k] = x;
      rec(k + 1, left - x);
    }
  };
  rec(0, max_total);
}

TEST(Entropy, Examples) {
  EXPECT_DOUBLE_EQ(entropy({}), 0.0);
  EXPECT_DOUBLE_EQ(entropy({{"a", 1}, {"b", 1}}), 1.0);
  EXPECT_NEAR(entropy({{"a", 2}, {"b", 1}}), 0.9182958340544896, 1e-15);
  EXPECT_DOUBLE_EQ(entropy({{"a", 7}}), 0.0);
}

TEST(Entropy, MatchesDirectSummation) {
  for (std::size_t cats = 1; cats <= 4; ++cats) {
    ForEachCounts(cats, 8, [](const std::vector<unsigned>& c) {
      EXPECT_NEAR(entropy(FromCounts(c)), OracleEntropy(c), 1e-12);
    });
  }
}

TEST(Entropy, UniformIsLog2K) {
  for (unsigned k = 1; k <= 16; ++k) {
    for (unsigned m = 1; m <= 3; ++m) {
      EXPECT_NEAR(entropy(FromCounts(std::vector<unsigned>(k, m))),
                  std::log2(static_cast<double>(k)), 1e-12);
    }
  }
}

TEST(Entropy, BoundedByLog2OfSupport) {
  ForEachCounts(4, 8, [](const std::vector<unsigned>& c) {
    const auto p = FromCounts(c);
    const double h = entropy(p);
    EXPECT_GE(h, 0.0);
    if (!p.empty()) {
      EXPECT_LE(h, std::log2(static_cast<double>(p.counts().size())) + 1e-12);
    }
  });
}

TEST(Utility, Examples) {
  EXPECT_DOUBLE_EQ(utility(10, 1, {{"a", 1}, {"b", 1}}, 0.5), 6.0);
  EXPECT_DOUBLE_EQ(utility(10, 0, {{"a", 1}, {"b", 1}}, 7.0), 1.0);
  EXPECT_DOUBLE_EQ(utility(0, 1, {}, 3.0), 0.0);
}

AgentState Awaiting(QueryProfile y, double alpha, double t, const Query& q) {
  AgentState s;
  s.alpha = alpha;
  s.profile = std::move(y);
  s.pending.push_back({q, t, 1});
  return s;
}

TEST(Initiator, DirectWhenEntropyGainBeatsPatience) {
  const auto s = Awaiting({{"a", 4}}, 0.1, 5, "b");
  EXPECT_NEAR(direct_submission_utility(s, "b"), 0.7219280948873623, 1e-12);
  EXPECT_NEAR(expected_forward_utility(s, "b", 1), 0.2, 1e-12);
  EXPECT_EQ(initiator_decision(s, "b", 1), InitiatorAction::kSubmitDirect);
}

TEST(Initiator, ForwardWhenUrgent) {
  const auto s = Awaiting({{"a", 4}}, 2.0, 5, "b");
  EXPECT_NEAR(expected_forward_utility(s, "b", 1), 4.0, 1e-12);
  EXPECT_EQ(initiator_decision(s, "b", 1), InitiatorAction::kForward);
}

TEST(Initiator, TieForwards) {
  const auto s = Awaiting({}, 0.0, 5, "a");
  EXPECT_DOUBLE_EQ(direct_submission_utility(s, "a"),
                   expected_forward_utility(s, "a", 1));
  EXPECT_EQ(initiator_decision(s, "a", 1), InitiatorAction::kForward);
}

TEST(Initiator, ExpectedForwardExamples) {
  const QueryProfile y = {{"a", 1}, {"b", 1}};
  EXPECT_DOUBLE_EQ(expected_forward_utility(Awaiting(y, 2, 5, "a"), "a", 1), 5.0);
  EXPECT_DOUBLE_EQ(expected_forward_utility(Awaiting(y, 0, 9, "a"), "a", 1), 1.0);
  EXPECT_DOUBLE_EQ(expected_forward_utility(Awaiting(y, 3, 1, "a"), "a", 1), 1.0);
}

TEST(Initiator, RequiresAnAwaitedQuery) {
  const auto s = Awaiting({}, 1, 5, "a");
  EXPECT_THROW(initiator_decision(s, "b", 1), InvalidArgument);
}

TEST(Responder, Examples) {
  AgentState s;
  s.profile = {{"a", 1}};
  EXPECT_EQ(responder_decision(s, "b"), ResponderAction::kAccept);
  s.profile = {{"a", 1}, {"b", 1}};
  EXPECT_EQ(responder_decision(s, "a"), ResponderAction::kReject);
  s.profile = {};
  EXPECT_EQ(responder_decision(s, "a"), ResponderAction::kReject);
}

TEST(Responder, AcceptIffEntropyStrictlyIncreases) {
  for (std::size_t cats = 1; cats <= 3; ++cats) {
    ForEachCounts(cats, 6, [&](const std::vector<unsigned>& c) {
      AgentState s;
      s.profile = FromCounts(c);
      for (std::size_t k = 0; k <= cats; ++k) {
        const Query q(1, static_cast<char>('a' + k));
        std::vector<unsigned> after = c;
        if (k == cats) after.push_back(0);
        ++after[k];
        const bool gain = OracleEntropy(after) > OracleEntropy(c) + 1e-9;
        EXPECT_EQ(responder_decision(s, q) == ResponderAction::kAccept, gain);
        if (k == cats && !s.profile.empty()) {
          EXPECT_EQ(responder_decision(s, q), ResponderAction::kAccept);
        }
      }
    });
  }
}

TEST(Transition, DirectSubmission) {
  const auto out = apply_transition(Awaiting({{"a", 1}}, 1, 5, "b"), std::nullopt,
                                    "b", InitiatorAction::kSubmitDirect,
                                    ResponderAction::kNotAsked, 1);
  EXPECT_EQ(out.initiator.profile, (QueryProfile{{"a", 1}, {"b", 1}}));
  EXPECT_EQ(out.initiator.pending[0].interested, 0);
  EXPECT_DOUBLE_EQ(out.initiator_utility, 1.0);
  EXPECT_TRUE(out.answered());
  EXPECT_FALSE(out.responder_utility);
}

TEST(Transition, ForwardReject) {
  AgentState j;
  const auto out = apply_transition(
      Awaiting({{"a", 1}, {"b", 1}}, 2, 5, "a"), j, "a",
      InitiatorAction::kForward, ResponderAction::kReject, 1);
  EXPECT_DOUBLE_EQ(out.initiator.pending[0].time_left, 4.0);
  EXPECT_EQ(out.initiator.pending[0].interested, 1);
  EXPECT_DOUBLE_EQ(out.initiator_utility, 9.0);
  EXPECT_FALSE(out.answered());
  EXPECT_EQ(out.responder->profile, j.profile);
}

TEST(Transition, ForwardAccept) {
  AgentState j;
  j.profile = {{"a", 1}};
  const auto i = Awaiting({{"c", 3}}, 2, 5, "b");
  const auto out = apply_transition(i, j, "b", InitiatorAction::kForward,
                                    ResponderAction::kAccept, 1);
  EXPECT_EQ(out.responder->profile, (QueryProfile{{"a", 1}, {"b", 1}}));
  EXPECT_DOUBLE_EQ(*out.responder_utility, 1.0);
  EXPECT_EQ(out.initiator.profile, i.profile);
  EXPECT_EQ(out.initiator.pending[0].interested, 0);
  EXPECT_DOUBLE_EQ(out.initiator_utility, 0.0);
  EXPECT_TRUE(out.answered());
}

TEST(Transition, RejectsInconsistentActions) {
  const auto i = Awaiting({}, 1, 5, "a");
  EXPECT_THROW(apply_transition(i, std::nullopt, "a", InitiatorAction::kForward,
                                ResponderAction::kAccept, 1),
               InvalidArgument);
  EXPECT_THROW(apply_transition(i, AgentState{}, "a",
                                InitiatorAction::kSubmitDirect,
                                ResponderAction::kReject, 1),
               InvalidArgument);
  EXPECT_THROW(apply_transition(i, AgentState{}, "a", InitiatorAction::kForward,
                                ResponderAction::kNotAsked, 1),
               InvalidArgument);
}

TEST(Protocol1, ForwardAcceptInstanceIsStrict) {
  const auto v = verify_protocol1(
      make_instance({{"a", 2}, {"b", 1}}, 1.0, 5, {{"a", 1}, {"b", 2}}, "a"));
  EXPECT_EQ(v.initiator_action, InitiatorAction::kForward);
  EXPECT_EQ(v.responder_action, ResponderAction::kAccept);
  EXPECT_TRUE(v.equilibrium);
  EXPECT_EQ(v.level, CoUtility::kStrict);
  EXPECT_TRUE(v.responder_entropy_positive);
}

TEST(Protocol1, DirectSubmissionInstanceIsRelaxed) {
  // Direct lowers H(Y_i) from 1 to 0.918 but beats the forward expectation
  // of an almost overdue query (0.5 * 1 * -0.5 + 1 = 0.75).
  const auto v = verify_protocol1(
      make_instance({{"a", 1}, {"b", 1}}, 1.0, 0.5, {{"b", 1}}, "a"));
  EXPECT_EQ(v.initiator_action, InitiatorAction::kSubmitDirect);
  EXPECT_LT(entropy(QueryProfile{{"a", 2}, {"b", 1}}), 1.0);
  EXPECT_NEAR(v.initiator_utilities[1], 0.75, 1e-12);
  EXPECT_TRUE(v.equilibrium);
  EXPECT_TRUE(v.initiator_maximal);
  EXPECT_FALSE(v.responder_maximal);
  EXPECT_EQ(v.level, CoUtility::kRelaxed);

  const auto w = verify_protocol1(
      make_instance({{"a", 4}}, 0.1, 5, {{"a", 1}}, "b"));
  EXPECT_EQ(w.initiator_action, InitiatorAction::kSubmitDirect);
  EXPECT_EQ(w.level, CoUtility::kRelaxed);
}

TEST(Protocol1, EmptyResponderRejectsAndIsMaximal) {
  const auto v =
      verify_protocol1(make_instance({{"a", 1}}, 5.0, 5, {}, "b"));
  EXPECT_EQ(v.responder_action, ResponderAction::kReject);
  EXPECT_TRUE(v.responder_maximal);
  EXPECT_FALSE(v.responder_entropy_positive);
}

TEST(Protocol1, GameEncodingAgreesWithVerdict) {
  const auto inst =
      make_instance({{"a", 2}, {"b", 1}}, 1.0, 5, {{"a", 1}, {"b", 2}}, "a");
  const auto game = make_query_game(inst);
  EXPECT_TRUE(is_coutility_amenable(game).holds);
  const auto table = protocol1_table(inst);
  EXPECT_TRUE(check_self_enforcing(table, game).holds);
  EXPECT_FALSE(is_coordination(table, game).holds);
  EXPECT_EQ(classify_coutility(table, game).level, CoUtility::kStrict);
}

TEST(Protocol1, MultiTypeGameIsAmenable) {
  std::vector<AgentState> is = {Awaiting({{"a", 2}}, 1, 5, "a"),
                                Awaiting({{"a", 1}, {"b", 1}}, 0.1, 2, "a")};
  AgentState r0, r1;
  r1.profile = {{"b", 3}};
  const auto game = make_query_game(is, {r0, r1}, "a", 1);
  EXPECT_EQ(game.type_space().size(), 4u);
  EXPECT_TRUE(is_coutility_amenable(game).holds);
}

// Sweep: every small instance is at least relaxed, each player's chosen
// action maximizes her own score, and both levels occur.
TEST(Protocol1, SmallSweepIsAlwaysAtLeastRelaxed) {
  std::vector<QueryProfile> profiles;
  ForEachCounts(3, 3, [&](const std::vector<unsigned>& c) {
    profiles.push_back(FromCounts(c));
  });
  int strict = 0, relaxed = 0;
  for (const auto& yi : profiles) {
    for (const auto& yj : profiles) {
      for (double alpha : {0.0, 0.5, 2.0}) {
        for (double t : {1.0, 5.0}) {
          for (const Query q : {"a", "c"}) {
            const auto v = verify_protocol1(make_instance(yi, alpha, t, yj, q));
            ASSERT_TRUE(v.equilibrium);
            EXPECT_TRUE(v.initiator_maximal);
            ASSERT_NE(v.level, CoUtility::kNone);
            (v.level == CoUtility::kStrict ? strict : relaxed)++;
          }
        }
      }
    }
  }
  EXPECT_GT(strict, 0);
  EXPECT_GT(relaxed, 0);
}

TEST(AgentState, Validation) {
  AgentState s;
  s.alpha = -1;
  EXPECT_THROW(validate(s), InvalidArgument);
  s.alpha = 1;
  s.pending.push_back({"a", 1, 2});
  EXPECT_THROW(validate(s), InvalidArgument);
}

}  // namespace
}  // namespace coutil
