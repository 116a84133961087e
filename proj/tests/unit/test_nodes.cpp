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
#include "ioracle/nodes.hpp"
#include "ioracle/simulator.hpp"

#include <catch_amalgamated.hpp>
#include <json.hpp>

#include <sstream>

using namespace ioracle;
using namespace ioracle::nodes;

namespace {

dkg::LocalRun five_of_three()
{
  dkg::DkgConfig c;
  c.participants = {1, 2, 3, 4, 5};
  c.threshold    = 3;
  c.session      = 1;
  Rng rng(11);
  return dkg::run_local(c, rng, 3);
}

source::TxQuery query(std::string tx)
{
  return source::TxQuery{"B", std::move(tx), 2};
}

source::VerificationAnswer honest_view()
{
  return source::VerificationAnswer{true, 3, sha256("block-3"), true};
}

BehaviorProfile profile(BehaviorKind k, CorruptionMode m = CorruptionMode::RandomPoint)
{
  BehaviorProfile p;
  p.kind       = k;
  p.corruption = m;
  return p;
}

Response respond(dkg::LocalRun const &run, NodeId id, BehaviorProfile const &p, std::uint64_t rid = 7,
                 source::VerificationAnswer view = honest_view())
{
  Rng  rng(100 + id);
  auto r = validator_respond(p, &run.keys.at(id), rid, query("tx-a"), view, rng);
  REQUIRE(r.has_value());
  return *r;
}

std::map<std::uint64_t, PointG2> vks_of(dkg::LocalRun const &run)
{
  return run.keys.begin()->second.verification_keys;
}

PointG2 pk_of(dkg::LocalRun const &run)
{
  return run.keys.begin()->second.public_key;
}

}  // namespace

TEST_CASE("validator path per behaviour", "[nodes]")
{
  auto const run  = five_of_three();
  auto const vks  = vks_of(run);
  auto const view = honest_view();
  Rng        rng(3);

  SECTION("no key share, no answer")
  {
    CHECK_FALSE(validator_respond(profile(BehaviorKind::Altruistic), nullptr, 7, query("tx-a"), view, rng));
  }
  SECTION("altruistic and offline answer from their own view")
  {
    for (auto k : {BehaviorKind::Altruistic, BehaviorKind::Offline})
    {
      auto r = respond(run, 2, profile(k));
      CHECK(r.request_id == 7);
      CHECK(r.payload == contracts::encode_payload(7, view));
      CHECK(r.share.index == run.keys.at(2).index);
      CHECK(tbls::verify_share(r.share, r.payload, vks.at(r.share.index)));
    }
  }
  SECTION("lazy signs its fixed answer")
  {
    auto p = profile(BehaviorKind::Lazy);
    CHECK(p.lazy_answer == source::VerificationAnswer{true, 0, {}, true});
    auto r = respond(run, 1, p);
    CHECK(r.payload == contracts::encode_payload(7, p.lazy_answer));
    CHECK(tbls::verify_share(r.share, r.payload, vks.at(r.share.index)));
    // independent of what the chain says
    auto r2 = respond(run, 1, p, 7, source::VerificationAnswer{});
    CHECK(r2.payload == r.payload);
  }
  SECTION("withholders stay silent")
  {
    CHECK_FALSE(validator_respond(profile(BehaviorKind::RationalWithholder), &run.keys.at(1), 7, query("tx-a"),
                                  view, rng));
    CHECK_FALSE(validator_respond(profile(BehaviorKind::Byzantine, CorruptionMode::Withhold), &run.keys.at(1), 7,
                                  query("tx-a"), view, rng));
  }
  SECTION("random point keeps the payload but breaks the share")
  {
    auto r = respond(run, 4, profile(BehaviorKind::Byzantine, CorruptionMode::RandomPoint));
    CHECK(r.payload == contracts::encode_payload(7, view));
    CHECK_FALSE(tbls::verify_share(r.share, r.payload, vks.at(r.share.index)));
  }
  SECTION("wrong payload is validly signed and identical across colluders")
  {
    auto p  = profile(BehaviorKind::Byzantine, CorruptionMode::WrongPayload);
    auto r4 = respond(run, 4, p);
    auto r5 = respond(run, 5, p);
    CHECK(r4.payload != contracts::encode_payload(7, view));
    CHECK(r4.payload == r5.payload);
    CHECK(r4.payload == contracts::encode_payload(7, forged_answer(query("tx-a"), view)));
    CHECK(tbls::verify_share(r4.share, r4.payload, vks.at(r4.share.index)));
    auto f = forged_answer(query("tx-a"), view);
    CHECK(f.included);
    CHECK(f.confirmed);
    CHECK(f.block_number == view.block_number + 1);
    CHECK(f.block_hash == sha256("ioracle/forged/tx-a"));
  }
}

TEST_CASE("online intervals", "[nodes]")
{
  BehaviorProfile p = profile(BehaviorKind::Offline);
  p.offline         = {{5, 8}, {20, 21}};
  for (std::uint64_t h = 0; h < 30; ++h)
  {
    bool const down = (h >= 5 && h < 8) || h == 20;
    CHECK(p.online_at(h) == !down);
  }
  CHECK(parse_behavior_kind("rational-withholder") == BehaviorKind::RationalWithholder);
  CHECK(parse_corruption_mode("wrong-payload") == CorruptionMode::WrongPayload);
  CHECK_THROWS_AS(parse_behavior_kind("grumpy"), Error);
  CHECK_THROWS_AS(parse_corruption_mode("sideways"), Error);
}

TEST_CASE("aggregation picks the largest valid group", "[nodes]")
{
  auto const run = five_of_three();
  auto const vks = vks_of(run);
  auto const pk  = pk_of(run);
  auto const alt = profile(BehaviorKind::Altruistic);

  SECTION("all honest")
  {
    std::vector<Response> rs;
    for (NodeId id = 1; id <= 5; ++id)
    {
      rs.push_back(respond(run, id, alt));
    }
    ShareCache cache;
    auto       out = aggregate(rs, 7, 3, vks, cache);
    REQUIRE(std::holds_alternative<Submission>(out));
    auto const &s = std::get<Submission>(out);
    CHECK(s.payload == contracts::encode_payload(7, honest_view()));
    CHECK(s.indices == std::vector<std::uint64_t>{1, 2, 3});
    CHECK(tbls::verify(s.signature, s.payload, pk));
    // unique signature: any other quorum gives the same bytes
    std::vector<tbls::SignatureShare> tail{rs[2].share, rs[3].share, rs[4].share};
    CHECK(tbls::recover(tail, 3) == s.signature);
  }
  SECTION("garbage shares never reach recovery")
  {
    auto const bad = profile(BehaviorKind::Byzantine, CorruptionMode::RandomPoint);
    std::vector<Response> rs{respond(run, 1, bad), respond(run, 2, bad), respond(run, 3, alt), respond(run, 4, alt),
                             respond(run, 5, alt)};
    ShareCache cache;
    auto       out = aggregate(rs, 7, 3, vks, cache);
    REQUIRE(std::holds_alternative<Submission>(out));
    auto const &s = std::get<Submission>(out);
    CHECK(s.indices == std::vector<std::uint64_t>{3, 4, 5});
    CHECK(tbls::verify(s.signature, s.payload, pk));
  }
  SECTION("short of threshold after filtering")
  {
    auto const bad = profile(BehaviorKind::Byzantine, CorruptionMode::RandomPoint);
    std::vector<Response> rs{respond(run, 1, bad), respond(run, 2, bad), respond(run, 3, bad), respond(run, 4, alt),
                             respond(run, 5, alt)};
    ShareCache cache;
    auto       out = aggregate(rs, 7, 3, vks, cache);
    REQUIRE(std::holds_alternative<Retry>(out));
    CHECK(std::get<Retry>(out).best_group == 2);
    CHECK(std::get<Retry>(out).rejected_shares == 3);
  }
  SECTION("a lazy majority outvotes two honest nodes")
  {
    auto const lazy = profile(BehaviorKind::Lazy);
    std::vector<Response> rs{respond(run, 1, alt), respond(run, 2, alt), respond(run, 3, lazy), respond(run, 4, lazy),
                             respond(run, 5, lazy)};
    ShareCache cache;
    auto       out = aggregate(rs, 7, 3, vks, cache);
    REQUIRE(std::holds_alternative<Submission>(out));
    CHECK(std::get<Submission>(out).payload == contracts::encode_payload(7, lazy.lazy_answer));
  }
  SECTION("two, two and one: retry")
  {
    auto const lazy  = profile(BehaviorKind::Lazy);
    auto const wrong = profile(BehaviorKind::Byzantine, CorruptionMode::WrongPayload);
    std::vector<Response> rs{respond(run, 1, alt), respond(run, 2, alt), respond(run, 3, lazy), respond(run, 4, lazy),
                             respond(run, 5, wrong)};
    ShareCache cache;
    auto       out = aggregate(rs, 7, 3, vks, cache);
    REQUIRE(std::holds_alternative<Retry>(out));
    CHECK(std::get<Retry>(out).best_group == 2);
    CHECK(std::get<Retry>(out).rejected_shares == 0);

    // with threshold 2 the tie goes to the smaller payload
    auto out2 = aggregate(rs, 7, 2, vks, cache);
    REQUIRE(std::holds_alternative<Submission>(out2));
    auto honest  = contracts::encode_payload(7, honest_view());
    auto lazyp   = contracts::encode_payload(7, lazy.lazy_answer);
    CHECK(std::get<Submission>(out2).payload == std::min(honest, lazyp));
  }
  SECTION("share hygiene")
  {
    auto r1 = respond(run, 1, alt);
    auto r2 = respond(run, 2, alt);
    auto r3 = respond(run, 3, alt);

    // duplicates count once
    std::vector<Response> dup{r1, r1, r2, r2};
    ShareCache            cache;
    auto                  out = aggregate(dup, 7, 3, vks, cache);
    REQUIRE(std::holds_alternative<Retry>(out));
    CHECK(std::get<Retry>(out).best_group == 2);

    // a share relabelled with another index does not verify
    auto stolen        = r3;
    stolen.share.index = 4;
    std::vector<Response> rs{r1, r2, stolen};
    CHECK(std::holds_alternative<Retry>(aggregate(rs, 7, 3, vks, cache)));

    // unknown index and wrong request id are rejected
    auto stray        = r3;
    stray.share.index = 9;
    auto other        = respond(run, 3, alt, 8);
    std::vector<Response> rs2{r1, r2, stray, other};
    out = aggregate(rs2, 7, 3, vks, cache);
    REQUIRE(std::holds_alternative<Retry>(out));
    CHECK(std::get<Retry>(out).rejected_shares == 2);

    std::vector<Response> none;
    out = aggregate(none, 7, 3, vks, cache);
    REQUIRE(std::holds_alternative<Retry>(out));
    CHECK(std::get<Retry>(out).best_group == 0);
  }
  SECTION("retries reuse earlier share checks")
  {
    std::vector<Response> rs{respond(run, 1, alt), respond(run, 2, alt)};
    ShareCache            cache;
    aggregate(rs, 7, 3, vks, cache);
    CHECK(cache.checks() == 2);
    rs.push_back(respond(run, 3, alt));
    CHECK(std::holds_alternative<Submission>(aggregate(rs, 7, 3, vks, cache)));
    CHECK(cache.checks() == 3);
  }
}

namespace {

std::string const kBaseline = R"(
name: nodes-test
seed: 7
blocks: 40
contracts: {rotation_period: 6, dkg_trigger: 5, dispute_window: 12}
nodes:
  - {id: 1, behavior: altruistic}
  - {id: 2, behavior: altruistic}
  - {id: 3, behavior: altruistic}
  - {id: 4, behavior: altruistic}
  - {id: 5, behavior: altruistic}
source_chain:
  - {at: 1, include: tx-a}
requests:
  - {at: 20, tx: tx-a, confirmations: 2}
)";

}  // namespace

TEST_CASE("validators only answer the scheduled aggregator", "[nodes]")
{
  sim::Simulation s(sim::parse_scenario(kBaseline));
  while (s.height() <= 21)
  {
    s.tick();
  }
  auto const open = s.ledger().open_requests();
  REQUIRE(open.size() == 1);

  std::set<NodeId> scheduled;
  for (std::uint64_t h = 20; h <= 26; ++h)
  {
    scheduled.insert(s.ledger().current_aggregator(h));
  }
  NodeId outsider = 0;
  for (NodeId id = 1; id <= 5; ++id)
  {
    if (scheduled.count(id) == 0)
    {
      outsider = id;
      break;
    }
  }
  REQUIRE(outsider != 0);

  std::uint64_t const inject_at = s.height();
  for (NodeId to = 1; to <= 5; ++to)
  {
    if (to != outsider)
    {
      s.inject(Message{outsider, to, 0, 0, CollectRequest{open[0], source::TxQuery{"B", "tx-a", 2}}});
    }
  }
  while (s.height() <= 26)
  {
    s.tick();
  }

  auto                result = s.result();
  std::istringstream  in(result.message_log);
  std::string         line;
  std::size_t         collects = 0, responses = 0;
  while (std::getline(in, line))
  {
    auto j = nlohmann::json::parse(line);
    if (j.value("tick", 0ULL) < inject_at)
    {
      continue;
    }
    if (j.value("type", "") == "collect" && j.value("from", 0ULL) == outsider)
    {
      ++collects;
    }
    if (j.value("type", "") == "response" && j.value("to", 0ULL) == outsider)
    {
      ++responses;
    }
  }
  CHECK(collects == 4);
  CHECK(responses == 0);
  // the request still went through via the scheduled aggregator
  CHECK(s.ledger().get_result(open[0]).has_value());
}

TEST_CASE("an idle network stays quiet", "[nodes]")
{
  auto sc   = sim::parse_scenario(kBaseline);
  sc.requests.clear();
  sc.blocks = 60;
  sim::Simulation s(sc);
  auto            r = s.run();
  REQUIRE(r.metrics.key_active_at.has_value());
  CHECK(r.metrics.oracle_txs_after_key == std::optional<std::uint64_t>(0));
  for (NodeId id = 1; id <= 5; ++id)
  {
    auto const &st = s.node(id).stats();
    CHECK(st.responses_sent == 0);
    CHECK(st.collect_requests_sent == 0);
    CHECK(st.submissions == 0);
  }
}

TEST_CASE("restart keeps the key share", "[nodes]")
{
  auto sc = sim::parse_scenario(kBaseline);
  sc.faults.push_back(sim::FaultSpec{sim::FaultSpec::Kind::Restart, 2, 25, 0, 1, {}, {}});
  sim::Simulation s(sc);
  while (s.height() <= 24)
  {
    s.tick();
  }
  auto const *before = s.node(2).active_key(s.ledger());
  REQUIRE(before != nullptr);
  auto const index = before->index;
  s.run();
  CHECK(s.node(2).stats().restarts == 1);
  auto const *after = s.node(2).active_key(s.ledger());
  REQUIRE(after != nullptr);
  CHECK(after->index == index);
  CHECK(s.metrics().fulfilled() == 1);
}
