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

#include "ioracle/dkg.hpp"
#include "ioracle/error.hpp"

#include <catch_amalgamated.hpp>
#include <json.hpp>

#include <functional>
#include <sstream>

using namespace ioracle;
using namespace ioracle::dkg;

namespace {

DkgConfig make_config(std::size_t n, std::size_t t, std::uint64_t session = 1)
{
  DkgConfig c;
  for (std::size_t i = 0; i < n; ++i)
  {
    c.participants.push_back(100 + i);
  }
  c.threshold = t;
  c.session   = session;
  return c;
}

ErrorCode code_of(std::function<void()> const &fn)
{
  try
  {
    fn();
  }
  catch (Error const &e)
  {
    return e.code();
  }
  return ErrorCode::Internal;
}

// Test-only reconstruction of the group secret; production code never does
// this.
Scalar reconstruct(LocalRun const &run, std::vector<NodeId> const &who, std::size_t t)
{
  std::vector<sharing::Share> shares;
  for (auto id : who)
  {
    auto const &k = run.keys.at(id);
    shares.push_back({k.index, k.secret});
  }
  return sharing::recover_secret(shares, t);
}

std::vector<DealRecord> records_of(std::vector<Deal> const &deals)
{
  std::vector<DealRecord> r;
  for (auto const &d : deals)
  {
    r.push_back(d.record);
  }
  return r;
}

// Re-signs an envelope after the dealer changed its contents, as a
// malicious dealer would.
void corrupt_share(Deal &d, NodeId recipient, bls::IdentityKey const &dealer_key)
{
  auto &env = d.shares.at(recipient);
  env.share.value += Scalar::one();
  env.signature = dealer_key.sign(env.signed_message());
}

}  // namespace

TEST_CASE("config validation", "[dkg]")
{
  DkgConfig c = make_config(3, 2);
  CHECK_NOTHROW(c.validate());
  CHECK(c.index_of(100) == 1);
  CHECK(c.index_of(102) == 3);
  CHECK_FALSE(c.index_of(7).has_value());

  DkgConfig dup = c;
  dup.participants.push_back(100);
  CHECK(code_of([&] { dup.validate(); }) == ErrorCode::InvalidArgument);
  DkgConfig bad_t = c;
  bad_t.threshold = 4;
  CHECK(code_of([&] { bad_t.validate(); }) == ErrorCode::InvalidArgument);
  bad_t.threshold = 0;
  CHECK(code_of([&] { bad_t.validate(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("single participant key", "[dkg]")
{
  Rng       rng(1);
  DkgConfig c   = make_config(1, 1);
  auto      run = run_local(c, rng, 1);
  REQUIRE(run.keys.size() == 1);
  auto const &k = run.keys.at(100);
  CHECK(k.public_key == run.deals[0].record.commitment.points[0]);
  CHECK(k.public_key == PointG2::generator() * k.secret);
  // Constant polynomial: the only share is the dealer's secret.
  CHECK(PointG2::generator() * run.deals[0].shares.at(100).share.value == k.public_key);
}

TEST_CASE("deal shares verify against the broadcast commitment", "[dkg]")
{
  Rng       rng(2);
  DkgConfig c  = make_config(5, 3);
  auto      id = bls::IdentityKey::generate(rng);
  Deal      d  = dkg_deal(101, c, id, rng);
  CHECK(d.record.commitment.points.size() == 3);
  CHECK(d.shares.size() == 5);
  for (auto const &[recipient, env] : d.shares)
  {
    CHECK(env.share.index == *c.index_of(recipient));
    CHECK(sharing::feldman_verify(env.share, d.record.commitment));
    CHECK(bls::verify(env.signature, env.signed_message(), id.public_key));
    CHECK_FALSE(process_deal(recipient, c, d).has_value());
  }
  CHECK(bls::verify(d.record.signature, d.record.signed_message(), id.public_key));
  CHECK(code_of([&] { dkg_deal(999, c, id, rng); }) == ErrorCode::NotParticipant);
}

TEST_CASE("transcript rejects a second deal from the same dealer", "[dkg]")
{
  Rng        rng(3);
  DkgConfig  c  = make_config(3, 2);
  auto       id = bls::IdentityKey::generate(rng);
  Transcript tr(c);
  tr.add_deal(dkg_deal(100, c, id, rng).record);
  CHECK(code_of([&] { tr.add_deal(dkg_deal(100, c, id, rng).record); }) == ErrorCode::DuplicateDealer);

  DealRecord foreign = dkg_deal(101, c, id, rng).record;
  foreign.dealer     = 555;
  CHECK(code_of([&] { tr.add_deal(foreign); }) == ErrorCode::NotParticipant);

  DkgConfig other = make_config(3, 2, 9);
  CHECK(code_of([&] { tr.add_deal(dkg_deal(101, other, id, rng).record); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("process_deal complains about bad deals", "[dkg]")
{
  Rng       rng(4);
  DkgConfig c  = make_config(5, 3);
  auto      id = bls::IdentityKey::generate(rng);
  Deal      d  = dkg_deal(100, c, id, rng);

  SECTION("mutated share for one receiver")
  {
    corrupt_share(d, 101, id);
    auto complaint = process_deal(101, c, d);
    REQUIRE(complaint.has_value());
    CHECK(complaint->complainer == 101);
    CHECK(complaint->dealer == 100);
    REQUIRE(complaint->evidence.has_value());
    CHECK(complaint->evidence->share == d.shares.at(101).share);
    CHECK_FALSE(process_deal(102, c, d).has_value());
  }
  SECTION("commitment of the wrong length")
  {
    d.record.commitment.points.pop_back();
    CHECK(process_deal(103, c, d).has_value());
  }
  SECTION("missing share")
  {
    d.shares.erase(104);
    auto complaint = process_deal(104, c, d);
    REQUIRE(complaint.has_value());
    CHECK_FALSE(complaint->evidence.has_value());
  }
  SECTION("share carries another node's index")
  {
    d.shares.at(102) = d.shares.at(103);
    d.shares.at(102).recipient = 102;
    CHECK(process_deal(102, c, d).has_value());
  }
  SECTION("receiver outside the participant list")
  {
    CHECK(code_of([&] { process_deal(42, c, d); }) == ErrorCode::NotParticipant);
  }
}

TEST_CASE("qualified set", "[dkg]")
{
  Rng       rng(5);
  DkgConfig c = make_config(5, 3);

  IdentityDirectory                  dir;
  std::map<NodeId, bls::IdentityKey> keys;
  std::vector<Deal>                  deals;
  for (auto p : c.participants)
  {
    keys.emplace(p, bls::IdentityKey::generate(rng));
    dir.emplace(p, keys.at(p).public_key);
  }
  for (auto p : c.participants)
  {
    deals.push_back(dkg_deal(p, c, keys.at(p), rng));
  }
  auto records = records_of(deals);
  std::set<NodeId> all(c.participants.begin(), c.participants.end());

  CHECK(qualified_set(c, records, {}, dir) == all);

  SECTION("valid complaint excludes the dealer")
  {
    corrupt_share(deals[3], 100, keys.at(103));
    auto complaint = process_deal(100, c, deals[3]);
    REQUIRE(complaint.has_value());
    std::vector<Complaint> cs{*complaint};
    auto expected = all;
    expected.erase(103);
    CHECK(complaint_is_valid(*complaint, c, records[3], dir));
    CHECK(qualified_set(c, records, cs, dir) == expected);
  }
  SECTION("complaint about a valid share is discarded")
  {
    Complaint forged{101, 102, c.session, deals[2].shares.at(101)};
    CHECK_FALSE(complaint_is_valid(forged, c, records[2], dir));
    std::vector<Complaint> cs{forged};
    CHECK(qualified_set(c, records, cs, dir) == all);
  }
  SECTION("complaint with a share the dealer never signed is discarded")
  {
    Complaint forged{101, 102, c.session, deals[2].shares.at(101)};
    forged.evidence->share.value += Scalar::one();
    CHECK_FALSE(complaint_is_valid(forged, c, records[2], dir));
    std::vector<Complaint> cs{forged};
    CHECK(qualified_set(c, records, cs, dir) == all);
  }
  SECTION("complaint without evidence is discarded")
  {
    std::vector<Complaint> cs{Complaint{101, 102, c.session, std::nullopt}};
    CHECK(qualified_set(c, records, cs, dir) == all);
  }
  SECTION("malformed commitment needs no evidence")
  {
    deals[1].record.commitment.points.pop_back();
    deals[1].record.signature = keys.at(101).sign(deals[1].record.signed_message());
    records = records_of(deals);
    std::vector<Complaint> cs{Complaint{104, 101, c.session, std::nullopt}};
    auto expected = all;
    expected.erase(101);
    CHECK(qualified_set(c, records, cs, dir) == expected);
  }
  SECTION("record with a bad signature is ignored")
  {
    records[4].signature = records[3].signature;
    auto expected        = all;
    expected.erase(104);
    CHECK(qualified_set(c, records, {}, dir) == expected);
  }
}

TEST_CASE("honest run: key shares reconstruct the public key", "[dkg]")
{
  Rng       rng(6);
  DkgConfig c   = make_config(5, 3);
  auto      run = run_local(c, rng, 3);
  REQUIRE(run.complaints.empty());
  REQUIRE(run.qualified.size() == 5);
  REQUIRE(run.keys.size() == 5);

  PointG2 const g  = PointG2::generator();
  PointG2 const pk = run.keys.at(100).public_key;
  PointG2       expected_pk;
  for (auto const &d : run.deals)
  {
    expected_pk = expected_pk + d.record.commitment.points[0];
  }
  CHECK(pk == expected_pk);

  std::vector<std::vector<NodeId>> subsets{{100, 101, 102}, {100, 102, 104}, {101, 103, 104}, {102, 103, 104}};
  for (auto const &sub : subsets)
  {
    CHECK(g * reconstruct(run, sub, 3) == pk);
  }
  for (auto const &[id, k] : run.keys)
  {
    CHECK(k.public_key == pk);
    CHECK(k.verification_keys == run.keys.at(100).verification_keys);
    CHECK(k.verification_keys.at(k.index) == g * k.secret);
  }
}

TEST_CASE("excluded dealer contributes nothing to the key", "[dkg]")
{
  Rng       rng(7);
  DkgConfig c = make_config(5, 3);

  LocalRun bad = run_local(c, rng, 3, [](Deal &d, bls::IdentityKey const &key) {
    if (d.record.dealer == 103)
    {
      corrupt_share(d, 101, key);
    }
  });
  auto records = records_of(bad.deals);
  auto q       = bad.qualified;
  REQUIRE(bad.complaints.size() == 1);
  CHECK(q == std::set<NodeId>{100, 101, 102, 104});

  KeyShare k0 = finalize(100, c, bad.deals, q, 3);
  PointG2  without;
  for (auto const &d : bad.deals)
  {
    if (d.record.dealer != 103)
    {
      without = without + d.record.commitment.points[0];
    }
  }
  CHECK(k0.public_key == without);
  CHECK(k0.public_key == group_public_key(records, q));

  std::vector<sharing::Share> shares;
  for (NodeId id : {100, 101, 102})
  {
    KeyShare k = finalize(id, c, bad.deals, q, 3);
    CHECK(k.public_key == k0.public_key);
    shares.push_back({k.index, k.secret});
  }
  CHECK(PointG2::generator() * sharing::recover_secret(shares, 3) == k0.public_key);
}

TEST_CASE("finalize errors", "[dkg]")
{
  Rng       rng(8);
  DkgConfig c   = make_config(3, 2);
  auto      run = run_local(c, rng, 2);

  std::set<NodeId> small{100};
  CHECK(code_of([&] { finalize(100, c, run.deals, small, 2); }) == ErrorCode::SessionFailed);
  CHECK(code_of([&] { finalize(100, c, run.deals, {}, 0); }) == ErrorCode::SessionFailed);

  auto starved = run.deals;
  starved[1].shares.erase(102);
  CHECK(code_of([&] { finalize(102, c, starved, run.qualified, 2); }) == ErrorCode::Threshold);
  CHECK(code_of([&] { finalize(77, c, run.deals, run.qualified, 2); }) == ErrorCode::NotParticipant);
}

TEST_CASE("exclusion soundness over random misbehaviour", "[dkg]")
{
  for (std::uint64_t seed = 0; seed < 8; ++seed)
  {
    Rng         rng(500 + seed);
    std::size_t n = 3 + rng.uniform(3);
    DkgConfig   c = make_config(n, n / 2 + 1, seed);

    std::set<NodeId> cheaters;
    for (auto p : c.participants)
    {
      if (rng.uniform(3) == 0)
      {
        cheaters.insert(p);
      }
    }
    std::map<NodeId, NodeId> victim;
    for (auto p : cheaters)
    {
      victim[p] = c.participants[rng.uniform(n)];
    }

    IdentityDirectory                  dir;
    std::map<NodeId, bls::IdentityKey> keys;
    for (auto p : c.participants)
    {
      keys.emplace(p, bls::IdentityKey::generate(rng));
      dir.emplace(p, keys.at(p).public_key);
    }
    std::vector<Deal> deals;
    for (auto p : c.participants)
    {
      deals.push_back(dkg_deal(p, c, keys.at(p), rng));
      if (cheaters.count(p) != 0)
      {
        corrupt_share(deals.back(), victim[p], keys.at(p));
      }
    }
    std::vector<Complaint> complaints;
    for (auto r : c.participants)
    {
      for (auto const &d : deals)
      {
        if (auto cp = process_deal(r, c, d))
        {
          complaints.push_back(*cp);
        }
      }
    }
    // An honest node also files a bogus complaint; it must not matter.
    complaints.push_back(Complaint{c.participants[0], c.participants[n - 1], c.session,
                                   deals[n - 1].shares.at(c.participants[0])});

    auto records = records_of(deals);
    auto q       = qualified_set(c, records, complaints, dir);
    for (auto p : c.participants)
    {
      CHECK((q.count(p) == 0) == (cheaters.count(p) != 0));
    }
  }
}

TEST_CASE("sessions agree when driven by messages", "[dkg]")
{
  Rng       rng(9);
  DkgConfig c = make_config(4, 3, 42);

  IdentityDirectory                  dir;
  std::map<NodeId, bls::IdentityKey> keys;
  for (auto p : c.participants)
  {
    keys.emplace(p, bls::IdentityKey::generate(rng));
    dir.emplace(p, keys.at(p).public_key);
  }
  std::vector<Session> sessions;
  for (auto p : c.participants)
  {
    sessions.emplace_back(c, p, keys.at(p), dir);
  }

  // Node 102 deals a bad share to 100.
  std::vector<Deal> deals;
  for (auto &s : sessions)
  {
    deals.push_back(s.make_deal(rng));
    if (s.self() == 102)
    {
      corrupt_share(deals.back(), 100, keys.at(102));
    }
  }
  CHECK(code_of([&] { sessions[0].make_deal(rng); }) == ErrorCode::DuplicateDealer);

  // Deliver in reverse dealer order to show ordering does not matter.
  for (auto &s : sessions)
  {
    for (auto it = deals.rbegin(); it != deals.rend(); ++it)
    {
      s.on_record(it->record);
      for (auto const &[r, env] : it->shares)
      {
        s.on_share(env);
      }
    }
  }
  std::vector<Complaint> all;
  for (auto &s : sessions)
  {
    auto cs = s.collect_complaints();
    all.insert(all.end(), cs.begin(), cs.end());
    CHECK(s.collect_complaints().empty());
  }
  REQUIRE(all.size() == 1);
  for (auto &s : sessions)
  {
    for (auto const &cp : all)
    {
      s.on_complaint(cp);
    }
  }

  std::vector<KeyShare> ks;
  for (auto const &s : sessions)
  {
    ks.push_back(s.finish(3));
  }
  for (auto const &k : ks)
  {
    CHECK(k.qualified == std::set<NodeId>{100, 101, 103});
    CHECK(k.public_key == ks[0].public_key);
    CHECK(k.verification_keys == ks[0].verification_keys);
  }
  std::vector<sharing::Share> shares{{ks[1].index, ks[1].secret}, {ks[2].index, ks[2].secret},
                                     {ks[3].index, ks[3].secret}};
  CHECK(PointG2::generator() * sharing::recover_secret(shares, 3) == ks[0].public_key);

  auto log = sessions[0].transcript().dump_json_lines(ks[0].public_key, ks[0].qualified);
  std::istringstream lines(log);
  std::string        line;
  std::map<std::string, int> kinds;
  std::vector<NodeId>        dealers;
  while (std::getline(lines, line))
  {
    auto j = nlohmann::json::parse(line);
    kinds[j.at("type").get<std::string>()]++;
    if (j["type"] == "deal")
    {
      dealers.push_back(j.at("dealer").get<NodeId>());
      CHECK(j.at("commitment").size() == 3);
    }
    if (j["type"] == "public_key")
    {
      CHECK(j.at("public_key") == ks[0].public_key.to_hex());
    }
  }
  CHECK(kinds["deal"] == 4);
  CHECK(kinds["complaint"] == 1);
  CHECK(kinds["public_key"] == 1);
  CHECK(dealers == std::vector<NodeId>{100, 101, 102, 103});
}
