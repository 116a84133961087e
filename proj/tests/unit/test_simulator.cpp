//------------------------------------------------------------------------------
//
//   Copyright 2026 The ioracle Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include "ioracle/error.hpp"
#include "ioracle/simulator.hpp"

#include <catch_amalgamated.hpp>
#include <json.hpp>

#include <filesystem>
#include <sstream>

using namespace ioracle;
using namespace ioracle::sim;

namespace {

Scenario bundled(std::string const &name)
{
  return load_scenario(std::string(IORACLE_SCENARIO_DIR) + "/" + name + ".yaml");
}

std::string scenario_error(std::string const &text)
{
  try
  {
    parse_scenario(text, "t.yaml");
  }
  catch (Error const &e)
  {
    CHECK(e.code() == ErrorCode::Scenario);
    return e.what();
  }
  return "";
}

std::set<NodeId> qualified_of(Simulation const &s, NodeId id)
{
  auto const *k = s.node(id).active_key(s.ledger());
  return k == nullptr ? std::set<NodeId>{} : k->qualified;
}

std::vector<nlohmann::json> log_lines(std::string const &log)
{
  std::vector<nlohmann::json> out;
  std::istringstream          in(log);
  std::string                 line;
  while (std::getline(in, line))
  {
    out.push_back(nlohmann::json::parse(line));
  }
  return out;
}

}  // namespace

TEST_CASE("baseline requests settle within two blocks", "[sim]")
{
  auto r = run(bundled("baseline"));
  auto const &m = r.metrics;
  REQUIRE(m.requests.size() == 3);
  CHECK(m.fulfilled() == 3);
  for (auto const &q : m.requests)
  {
    REQUIRE(q.latency.has_value());
    CHECK(*q.latency <= 2);
    CHECK(q.canonical == std::optional<bool>(true));
  }
  // a transaction that never made it is reported as not included
  REQUIRE(m.requests[2].answer.has_value());
  CHECK_FALSE(m.requests[2].answer->included);
  CHECK(m.requests[0].answer->included);
  CHECK(m.conservation);
  CHECK(m.submissions_rejected == 0);
}

TEST_CASE("aggregator compensation covers the BLS submission", "[sim]")
{
  auto sc = bundled("baseline");
  auto r  = run(sc);
  auto const bls = cost::cost(sc.costs, cost::Mechanism::Bls, sc.nodes.size());
  for (auto const &n : r.metrics.nodes)
  {
    CHECK(n.rewards == static_cast<Amount>(n.results) * (bls + sc.economics.aggregation_reward));
  }
}

TEST_CASE("runs are reproducible", "[sim]")
{
  auto sc = bundled("byzantine");
  auto a  = run(sc).transcript();
  auto b  = run(sc).transcript();
  CHECK(a == b);
  sc.seed += 1;
  CHECK(run(sc).transcript() != a);

  Simulation s(bundled("baseline"));
  while (!s.done())
  {
    s.tick();
  }
  CHECK(s.result().transcript() == run(bundled("baseline")).transcript());
  CHECK_THROWS_AS(s.tick(), Error);
}

TEST_CASE("idle network", "[sim]")
{
  auto sc = bundled("idle");
  auto r  = run(sc);
  REQUIRE(r.metrics.key_active_at.has_value());
  CHECK(r.metrics.oracle_txs_after_key == std::optional<std::uint64_t>(0));
  CHECK(r.metrics.costs.relay_window == cost::cost(sc.costs, cost::Mechanism::Relay, sc.blocks));
  CHECK(r.metrics.costs.bls == 0);
  CHECK(r.metrics.conservation);
}

TEST_CASE("a node offline during key generation is not qualified", "[sim]")
{
  Simulation s(bundled("offline_dkg"));
  auto       r = s.run();
  auto       q = qualified_of(s, 1);
  CHECK(q == std::set<NodeId>{1, 2, 3, 4});
  CHECK(s.node(5).active_key(s.ledger()) == nullptr);
  CHECK(r.metrics.fulfilled() == 2);
  CHECK(r.metrics.messages_dropped > 0);
  for (auto const &j : log_lines(r.message_log))
  {
    if (j["status"] == "dropped-offline")
    {
      CHECK(j["to"] == 5);
    }
  }
}

TEST_CASE("a cheating dealer is excluded", "[sim]")
{
  Simulation s(bundled("dkg_cheater"));
  s.run();
  auto q = qualified_of(s, 1);
  CHECK(q == std::set<NodeId>{1, 3, 4, 5});
  for (NodeId id : {3, 4, 5})
  {
    CHECK(qualified_of(s, id) == q);
  }
  std::uint64_t complaints = 0;
  for (NodeId id = 1; id <= 5; ++id)
  {
    complaints += s.node(id).stats().dkg_complaints;
  }
  CHECK(complaints >= 1);
  CHECK(s.metrics().fulfilled() == 1);
}

TEST_CASE("lost submission and restart", "[sim]")
{
  Simulation s(bundled("faults"));
  auto       r = s.run();
  auto const &m = r.metrics;
  CHECK(m.submissions_dropped == 1);
  REQUIRE(m.fulfilled() == 2);
  // the dropped submission costs exactly one block
  CHECK(m.requests[0].latency == std::optional<std::uint64_t>(3));
  CHECK(m.requests[1].latency == std::optional<std::uint64_t>(2));
  CHECK(s.node(2).stats().restarts == 1);
  CHECK(s.node(2).active_key(s.ledger()) != nullptr);
  bool logged = false;
  for (auto const &j : log_lines(r.message_log))
  {
    logged = logged || (j["type"] == "submit_result" && j["status"] == "dropped-fault");
  }
  CHECK(logged);
}

TEST_CASE("no result while the validators disagree", "[sim]")
{
  auto sc = bundled("fork_heal");
  auto r  = run(sc);
  REQUIRE(r.metrics.requests.size() == 1);
  auto const &q = r.metrics.requests[0];
  REQUIRE(q.fulfilled_at.has_value());
  CHECK(*q.fulfilled_at > 30);
  CHECK(q.canonical == std::optional<bool>(true));
  CHECK(q.answer->included);
}

TEST_CASE("lazy validators", "[sim]")
{
  auto minority = run(bundled("lazy_minority")).metrics;
  auto majority = run(bundled("lazy_majority")).metrics;
  REQUIRE(minority.fulfilled() == minority.requests.size());
  REQUIRE(majority.fulfilled() == majority.requests.size());
  for (auto const &q : minority.requests)
  {
    CHECK(q.canonical == std::optional<bool>(true));
  }
  for (auto const &q : majority.requests)
  {
    CHECK(q.canonical == std::optional<bool>(false));
    CHECK(q.answer == source::VerificationAnswer{true, 0, {}, true});
  }
}

TEST_CASE("byzantine minority never gets a wrong result through", "[sim]")
{
  auto sc = bundled("byzantine");
  for (std::uint64_t seed = 1; seed <= 8; ++seed)
  {
    sc.seed = seed;
    auto m  = run(sc).metrics;
    INFO("seed " << seed);
    CHECK(m.fulfilled() == m.requests.size());
    for (auto const &q : m.requests)
    {
      CHECK(q.canonical == std::optional<bool>(true));
    }
    CHECK(m.conservation);
  }
}

TEST_CASE("a forged group key is disputed and replaced", "[sim]")
{
  auto sc = bundled("forged_key");
  Simulation s(sc);
  auto       r = s.run();
  auto const &m = r.metrics;
  CHECK(m.keys_rejected == 1);
  CHECK(m.keys_activated == 1);
  REQUIRE(m.key_active_at.has_value());
  Amount const slashed = sc.contracts.min_stake * sc.contracts.slash_percent / 100;
  CHECK(m.burned == slashed);
  CHECK(s.ledger().node(1)->stake == sc.contracts.min_stake - slashed);
  // the active key is the one the honest nodes computed
  auto const *k = s.node(2).active_key(s.ledger());
  REQUIRE(k != nullptr);
  CHECK(s.ledger().key_state().active_key == k->public_key);
  CHECK(m.fulfilled() == 1);
  CHECK(m.conservation);
}

TEST_CASE("every bundled scenario conserves value", "[sim]")
{
  for (auto const &entry : std::filesystem::directory_iterator(IORACLE_SCENARIO_DIR))
  {
    if (entry.path().extension() != ".yaml")
    {
      continue;
    }
    INFO(entry.path().filename().string());
    auto m = run(load_scenario(entry.path().string())).metrics;
    CHECK(m.conservation);
    for (auto const &q : m.requests)
    {
      if (q.fulfilled_at)
      {
        CHECK(*q.fulfilled_at == q.requested_at + *q.latency);
      }
    }
  }
}

TEST_CASE("scenario parsing errors point at the input", "[sim]")
{
  auto e = scenario_error("name: x\nblocks: 10\nnodes:\n  - {id: 1, behavior: sleepy}\n");
  CHECK(e.rfind("t.yaml:4:", 0) == 0);
  e = scenario_error("name: x\nblocks: 10\ncolour: blue\n");
  CHECK(e.rfind("t.yaml:3:", 0) == 0);
  CHECK(e.find("colour") != std::string::npos);
  CHECK_FALSE(scenario_error("name: x\n").empty());
  CHECK_FALSE(scenario_error("blocks: [1\n").empty());
  CHECK_FALSE(scenario_error("blocks: 10\nnodes:\n  - {id: 1}\n  - {id: 1}\n").empty());
  CHECK_FALSE(scenario_error("blocks: 10\nnodes:\n  - {id: 1, behavior: {mode: withhold}}\n").empty());
  try
  {
    load_scenario("/nonexistent/scenario.yaml");
    FAIL("expected an error");
  }
  catch (Error const &err)
  {
    CHECK(err.code() == ErrorCode::Io);
  }
}

TEST_CASE("reports", "[sim]")
{
  auto m = run(bundled("baseline")).metrics;
  auto j = nlohmann::ordered_json::parse(report_json(m));
  std::vector<std::string> keys;
  for (auto const &[k, v] : j.items())
  {
    keys.push_back(k);
  }
  CHECK(keys == std::vector<std::string>{"scenario", "seed", "blocks", "summary", "requests", "submissions", "dkg",
                                         "oracle_txs", "messages", "economics", "nodes", "costs",
                                         "transcript_sha256"});
  CHECK(j["summary"]["fulfilled"] == 3);
  CHECK(j["requests"].size() == 3);
  CHECK(j["transcript_sha256"].get<std::string>().size() == 64);

  auto csv = report_csv(m);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  CHECK(report_table(m).find("baseline") != std::string::npos);
}
