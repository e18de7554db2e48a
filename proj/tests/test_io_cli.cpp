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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "coutil/cli.hpp"

namespace coutil {
namespace {

namespace fs = std::filesystem;

const std::string kData = COUTIL_DATA_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "coutil");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path TempDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() /
                       ("coutil_test_" + name + "_" +
                        std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path WriteJson(const fs::path& dir, const std::string& name, const Json& j) {
  const fs::path p = dir / name;
  std::ofstream(p) << j.dump();
  return p;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(GameJson, RoundTrip) {
  const auto g = make_tcp_game();
  EXPECT_EQ(game_from_json(to_json(g)), g);
  const auto parsed = game_from_json(Json::parse(Slurp(kData + "/games/tcp.json")));
  EXPECT_EQ(parsed, g);
}

TEST(GameJson, BayesianRoundTrip) {
  const auto bg = BayesianGame::tabulate(
      {"A", "B"}, {{"x", "y"}, {"z"}}, {{"lo", "hi"}, {"only"}}, {0.25, 0.75},
      [](const Profile& s, const Profile& t) {
        return std::vector<double>{double(s[0] + t[0]), 0.5};
      });
  const auto back = bayesian_game_from_json(to_json(bg));
  EXPECT_EQ(back.type_sets(), bg.type_sets());
  EXPECT_EQ(back.prior_table(), bg.prior_table());
  EXPECT_EQ(back.realizations(), bg.realizations());
}

TEST(GameJson, ErrorsNameTheField) {
  auto message = [](const Json& j) {
    try {
      bayesian_game_from_json(j);
    } catch (const InvalidArgument& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  Json j = to_json(make_tcp_game());
  j["payoffs"][3]["profile"] = {"Honest", "Maybe"};
  EXPECT_NE(message(j).find("game.payoffs[3].profile"), std::string::npos);

  j = to_json(make_tcp_game());
  j["payoffs"].erase(2);
  EXPECT_NE(message(j).find("Dishonest,Honest"), std::string::npos);

  j = to_json(make_tcp_game());
  j["payoffs"].push_back(j["payoffs"][0]);
  EXPECT_NE(message(j).find("duplicate"), std::string::npos);

  j = to_json(make_tcp_game());
  j.erase("agents");
  EXPECT_NE(message(j).find("agents"), std::string::npos);
}

TEST(GameJson, GuardFiresBeforePayoffs) {
  Json j;
  j["agents"] = std::vector<std::string>(8, "p");
  j["actions"] = std::vector<std::vector<std::string>>(
      8, {"a", "b", "c", "d", "e", "f", "g", "h"});
  j["payoffs"] = Json::array();
  EXPECT_THROW(bayesian_game_from_json(j), GuardError);
}

TEST(ProtocolJson, RoundTripAndMismatch) {
  const auto game = bayesian_game_from_json(
      Json::parse(Slurp(kData + "/games/bos.json")));
  const auto p = protocol_from_json(
      Json::parse(Slurp(kData + "/protocols/bos_best_response.json")), game);
  EXPECT_EQ(p.output({0, 1}, 0), (Profile{1, 1}));
  const auto back = protocol_from_json(to_json(p, game), game);
  EXPECT_EQ(back.outputs(), p.outputs());

  Json bad = to_json(p, game);
  bad["table"][0]["output"] = {"Opera", "Tennis"};
  EXPECT_THROW(protocol_from_json(bad, game), DomainMismatch);
  bad = to_json(p, game);
  bad["table"].erase(1);
  EXPECT_THROW(protocol_from_json(bad, game), InvalidArgument);
}

TEST(ScenarioJson, RoundTripAndForms) {
  Scenario s;
  s.agent_count = 3;
  s.query_universe_size = 4;
  s.horizon = 9;
  s.alpha = AlphaUniform{0.1, 0.2};
  s.workload = {Workload::Kind::kPowerLaw, 1.5};
  s.policies = {Policy::kProtocol1, Policy::kAlwaysDirect, Policy::kProtocol1};
  s.seed = 18446744073709551615ull;
  const auto back = scenario_from_json(to_json(s));
  EXPECT_EQ(to_json(back), to_json(s));
  EXPECT_EQ(back.seed, s.seed);

  Json j = to_json(s);
  j["alpha"] = {1.0, 2.0};
  EXPECT_THROW(scenario_from_json(j), InvalidArgument);
  j["alpha"] = {{"normal", {0, 1}}};
  EXPECT_THROW(scenario_from_json(j), InvalidArgument);
  j = to_json(s);
  j["workload"] = {{"kind", "zipf"}};
  EXPECT_THROW(scenario_from_json(j), InvalidArgument);
  j = to_json(s);
  j["policy"] = "Sometimes";
  EXPECT_THROW(scenario_from_json(j), InvalidArgument);
}

TEST(StateJson, RoundTrip) {
  AgentState s;
  s.alpha = 0.7;
  s.profile = {{"a", 3}, {"b", 1}};
  s.pending = {{"c", 2.5, 1}, {"d", -1, 0}};
  EXPECT_EQ(agent_state_from_json(to_json(s)), s);
}

TEST(MetricsCsv, UsesSeventeenDigits) {
  Metrics m;
  m.trajectory.push_back({0, 1, 0.1, 2});
  EXPECT_EQ(metrics_csv(m),
            "step,agent,entropy,answered_cumulative\n0,1,0.10000000000000001,2\n");
}

TEST(Cli, DemoTcp) {
  const auto r = Cli({"demo-tcp"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  const Json& w = j["honest_protocol"]["self_enforcing"]["witness"];
  EXPECT_FALSE(j["honest_protocol"]["self_enforcing"]["holds"]);
  EXPECT_EQ(w["kind"], "not_equilibrium");
  EXPECT_EQ(w["deviation"], "Dishonest");
  const Json& dom = j["analysis"]["dominant_strategies"];
  EXPECT_EQ(dom["Alice"]["weak"], Json::array({"Dishonest"}));
  EXPECT_EQ(dom["Bob"]["weak"], Json::array({"Dishonest"}));
  EXPECT_TRUE(dom["Alice"]["strict"].empty());
}

TEST(Cli, DemoBos) {
  const auto r = Cli({"demo-bos"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["truthful"]["selected"], Json::array({"Opera", "Opera"}));
  EXPECT_EQ(j["husband_lies"]["selected"], Json::array({"Football", "Football"}));
  EXPECT_TRUE(j["truthful"]["selected_is_nash"]);
  EXPECT_TRUE(j["husband_lies"]["selected_is_nash"]);
  EXPECT_TRUE(j["classification"]["coordination"]["holds"]);
}

TEST(Cli, DemoVickreyAndProtocol1) {
  const auto v = Cli({"demo-vickrey"});
  ASSERT_EQ(v.code, 0) << v.err;
  const Json j = Json::parse(v.out);
  EXPECT_EQ(j["winner"], 0);
  EXPECT_EQ(j["price"], 3.0);
  EXPECT_TRUE(j["truthfulness"][2]["truthful_dominant"]);
  EXPECT_FALSE(j["truthfulness"][3]["truthful_dominant"]);
  EXPECT_FALSE(j["protocol_classification"]["amenable"]["holds"]);

  const auto p = Cli({"demo-protocol1"});
  ASSERT_EQ(p.code, 0) << p.err;
  const Json k = Json::parse(p.out);
  EXPECT_EQ(k["instances"][0]["coutility"], "strict");
  EXPECT_EQ(k["instances"][1]["coutility"], "relaxed");
  EXPECT_EQ(k["instances"][2]["responder_action"], "Reject");
  EXPECT_TRUE(k["instances"][2]["responder_maximal"]);
}

TEST(Cli, AnalyzeAndCheckBundledFiles) {
  const auto a = Cli({"analyze-game", kData + "/games/tcp.json"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(Json::parse(a.out)["pure_nash_equilibria"].size(), 3u);

  const auto c = Cli({"check-protocol", kData + "/games/query_instance.json",
                      kData + "/protocols/protocol1_instance.json"});
  ASSERT_EQ(c.code, 0) << c.err;
  const Json j = Json::parse(c.out);
  EXPECT_TRUE(j["self_enforcing"]["holds"]);
  EXPECT_EQ(j["coutility"]["level"], "strict");

  const auto t = Cli({"check-protocol", kData + "/games/tcp.json",
                      kData + "/protocols/tcp_honest.json"});
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_FALSE(Json::parse(t.out)["self_enforcing"]["holds"]);
}

TEST(Cli, SimulateWritesArtifacts) {
  const auto dir = TempDir("sim");
  const auto r = Cli({"simulate", kData + "/scenarios/skewed.json", "--horizon",
                      "50", "--out", dir.string(), "--events"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "metrics.csv"));
  EXPECT_TRUE(fs::exists(dir / "events.jsonl"));
  const Json summary = Json::parse(Slurp(dir / "summary.json"));
  EXPECT_EQ(summary["queries"], 50);
  EXPECT_EQ(summary["rng_algorithm"], "mt19937_64");
  EXPECT_EQ(Slurp(dir / "summary.json"), r.out);
  std::ifstream events(dir / "events.jsonl");
  std::string line;
  std::size_t lines = 0;
  while (std::getline(events, line)) ++lines;
  EXPECT_EQ(lines, 50u);

  const auto again = Cli({"simulate", kData + "/scenarios/skewed.json",
                          "--horizon", "50", "--format", "csv"});
  EXPECT_EQ(again.out, Slurp(dir / "metrics.csv"));
  fs::remove_all(dir);
}

TEST(Cli, CompareDefaultsAndCsv) {
  const auto r = Cli({"compare", kData + "/scenarios/skewed.json", "--horizon",
                      "100", "--policies", "Protocol1,AlwaysDirect,AlwaysForward",
                      "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("policy,mean_final_entropy,answered_fraction,mean_delay\n", 0),
            0u);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 4);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(Cli({}).code, cli::kUsage);
  EXPECT_EQ(Cli({"no-such-command"}).code, cli::kUsage);
  EXPECT_EQ(Cli({"demo-tcp", "--format", "csv"}).code, cli::kUsage);
  EXPECT_EQ(Cli({"analyze-game", "/nonexistent/game.json"}).code, cli::kInput);
  EXPECT_EQ(Cli({"check-protocol", kData + "/games/tcp.json",
                 kData + "/protocols/bos_best_response.json"})
                .code,
            cli::kInput);

  const auto dir = TempDir("codes");
  Json huge;
  huge["agents"] = std::vector<std::string>(8, "p");
  huge["actions"] = std::vector<std::vector<std::string>>(
      8, {"a", "b", "c", "d", "e", "f", "g", "h"});
  huge["payoffs"] = Json::array();
  EXPECT_EQ(Cli({"analyze-game", WriteJson(dir, "huge.json", huge).string()}).code,
            cli::kGuard);
  std::ofstream(dir / "broken.json") << "{not json";
  EXPECT_EQ(Cli({"analyze-game", (dir / "broken.json").string()}).code,
            cli::kInput);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace coutil
