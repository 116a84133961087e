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

#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace ioracle::sim {

namespace {

class Parser
{
public:
  explicit Parser(std::string source)
    : source_(std::move(source))
  {}

  [[noreturn]] void fail(YAML::Node const &at, std::string const &msg) const
  {
    auto m = at.Mark();
    if (m.is_null())
    {
      throw Error(ErrorCode::Scenario, source_ + ": " + msg);
    }
    throw Error(ErrorCode::Scenario,
                source_ + ":" + std::to_string(m.line + 1) + ":" + std::to_string(m.column + 1) + ": " + msg);
  }

  void expect_map(YAML::Node const &n, char const *what) const
  {
    if (!n.IsMap())
    {
      fail(n, std::string(what) + " must be a mapping");
    }
  }

  void expect_seq(YAML::Node const &n, char const *what) const
  {
    if (!n.IsSequence())
    {
      fail(n, std::string(what) + " must be a list");
    }
  }

  void allow_keys(YAML::Node const &n, std::initializer_list<char const *> keys) const
  {
    for (auto const &kv : n)
    {
      auto key = kv.first.as<std::string>();
      bool ok  = false;
      for (auto const *k : keys)
      {
        ok = ok || key == k;
      }
      if (!ok)
      {
        fail(kv.first, "unknown key '" + key + "'");
      }
    }
  }

  template <typename T>
  T as(YAML::Node const &n, char const *what) const
  {
    try
    {
      return n.as<T>();
    }
    catch (YAML::Exception const &)
    {
      fail(n, std::string("invalid value for '") + what + "'");
    }
  }

  template <typename T>
  void read(YAML::Node const &parent, char const *key, T &out) const
  {
    if (auto n = parent[key])
    {
      out = as<T>(n, key);
    }
  }

  template <typename T>
  T need(YAML::Node const &parent, char const *key) const
  {
    auto n = parent[key];
    if (!n)
    {
      fail(parent, std::string("missing key '") + key + "'");
    }
    return as<T>(n, key);
  }

  std::uint64_t need_u64(YAML::Node const &parent, char const *key) const
  {
    auto n = parent[key];
    if (!n)
    {
      fail(parent, std::string("missing key '") + key + "'");
    }
    return u64(n, key);
  }

  std::uint64_t u64(YAML::Node const &n, char const *key) const
  {
    auto v = as<std::int64_t>(n, key);
    if (v < 0)
    {
      fail(n, std::string("'") + key + "' must not be negative");
    }
    return static_cast<std::uint64_t>(v);
  }

  void read_u64(YAML::Node const &parent, char const *key, std::uint64_t &out) const
  {
    if (auto n = parent[key])
    {
      out = u64(n, key);
    }
  }

  source::TxQuery query(YAML::Node const &n) const
  {
    source::TxQuery q;
    q.tx = need<std::string>(n, "tx");
    if (q.tx.empty())
    {
      fail(n["tx"], "transaction id must not be empty");
    }
    read(n, "chain", q.chain);
    read_u64(n, "confirmations", q.min_confirmations);
    return q;
  }

  std::set<NodeId> id_list(YAML::Node const &n, char const *what) const
  {
    expect_seq(n, what);
    std::set<NodeId> out;
    for (auto const &x : n)
    {
      out.insert(u64(x, what));
    }
    return out;
  }

  nodes::BehaviorProfile behavior(YAML::Node const &n) const
  {
    nodes::BehaviorProfile b;
    auto kind_of = [&](YAML::Node const &k) {
      try
      {
        return nodes::parse_behavior_kind(as<std::string>(k, "behavior"));
      }
      catch (Error const &e)
      {
        fail(k, e.what());
      }
    };
    if (n.IsScalar())
    {
      b.kind = kind_of(n);
      return b;
    }
    expect_map(n, "behavior");
    allow_keys(n, {"kind", "mode", "answer", "intervals", "corrupt_dkg_share", "forge_public_key"});
    if (!n["kind"])
    {
      fail(n, "behavior needs a 'kind'");
    }
    b.kind = kind_of(n["kind"]);
    if (auto m = n["mode"])
    {
      try
      {
        b.corruption = nodes::parse_corruption_mode(as<std::string>(m, "mode"));
      }
      catch (Error const &e)
      {
        fail(m, e.what());
      }
    }
    if (auto a = n["answer"])
    {
      expect_map(a, "answer");
      allow_keys(a, {"included", "block_number", "block_hash", "confirmed"});
      read(a, "included", b.lazy_answer.included);
      read_u64(a, "block_number", b.lazy_answer.block_number);
      read(a, "confirmed", b.lazy_answer.confirmed);
      if (auto h = a["block_hash"])
      {
        try
        {
          auto bytes = from_hex(as<std::string>(h, "block_hash"));
          if (bytes.size() != 32)
          {
            fail(h, "block_hash must be 32 bytes of hex");
          }
          std::copy(bytes.begin(), bytes.end(), b.lazy_answer.block_hash.begin());
        }
        catch (Error const &)
        {
          fail(h, "block_hash must be 32 bytes of hex");
        }
      }
    }
    if (auto iv = n["intervals"])
    {
      expect_seq(iv, "intervals");
      for (auto const &pair : iv)
      {
        if (!pair.IsSequence() || pair.size() != 2)
        {
          fail(pair, "an interval is a [from, to) pair");
        }
        nodes::Interval i{u64(pair[0], "from"), u64(pair[1], "to")};
        if (i.from >= i.to)
        {
          fail(pair, "interval must satisfy from < to");
        }
        b.offline.push_back(i);
      }
    }
    read(n, "corrupt_dkg_share", b.corrupt_dkg_share);
    read(n, "forge_public_key", b.forge_public_key);
    if (b.kind == nodes::BehaviorKind::Offline && b.offline.empty())
    {
      fail(n, "offline behavior needs at least one interval");
    }
    return b;
  }

  Scenario parse(YAML::Node const &root, std::filesystem::path const &dir) const
  {
    Scenario sc;
    expect_map(root, "scenario");
    allow_keys(root, {"name", "seed", "blocks", "contracts", "dkg", "economics", "costs", "calibration", "nodes",
                      "source_chain", "requests", "faults"});
    read(root, "name", sc.name);
    read_u64(root, "seed", sc.seed);
    sc.blocks = need_u64(root, "blocks");
    if (sc.blocks == 0)
    {
      fail(root["blocks"], "blocks must be at least 1");
    }

    if (auto c = root["contracts"])
    {
      expect_map(c, "contracts");
      allow_keys(c, {"min_stake", "rotation_period", "dkg_trigger", "dispute_window", "slash_percent",
                     "validator_threshold", "lottery_alpha"});
      auto &p = sc.contracts;
      read(c, "min_stake", p.min_stake);
      read_u64(c, "rotation_period", p.rotation_period);
      read_u64(c, "dkg_trigger", p.dkg_trigger);
      read_u64(c, "dispute_window", p.dispute_window);
      if (auto s = c["slash_percent"])
      {
        auto v = u64(s, "slash_percent");
        if (v > 100)
        {
          fail(s, "slash_percent must be at most 100");
        }
        p.slash_percent = static_cast<std::uint32_t>(v);
      }
      if (auto v = c["validator_threshold"])
      {
        p.validator_threshold = u64(v, "validator_threshold");
      }
      read(c, "lottery_alpha", p.lottery_alpha);
      if (p.rotation_period == 0)
      {
        fail(c["rotation_period"], "rotation_period must be at least 1");
      }
      if (p.dkg_trigger == 0)
      {
        fail(c["dkg_trigger"], "dkg_trigger must be at least 1");
      }
      if (p.lottery_alpha < 0)
      {
        fail(c["lottery_alpha"], "lottery_alpha must not be negative");
      }
    }
    if (auto d = root["dkg"])
    {
      expect_map(d, "dkg");
      allow_keys(d, {"wait_blocks"});
      read_u64(d, "wait_blocks", sc.dkg_wait);
    }
    if (auto e = root["economics"])
    {
      expect_map(e, "economics");
      allow_keys(e, {"aggregation_reward", "validation_contribution", "client_funds"});
      read(e, "aggregation_reward", sc.economics.aggregation_reward);
      read(e, "validation_contribution", sc.economics.validation_contribution);
      read(e, "client_funds", sc.economics.client_funds);
    }
    if (root["costs"] && root["calibration"])
    {
      fail(root["calibration"], "give either 'costs' or 'calibration', not both");
    }
    try
    {
      if (auto c = root["costs"])
      {
        expect_map(c, "costs");
        YAML::Emitter out;
        out << c;
        sc.costs = cost::parse_calibration(out.c_str());
      }
      if (auto c = root["calibration"])
      {
        std::filesystem::path p = as<std::string>(c, "calibration");
        sc.costs                = cost::load_calibration((p.is_absolute() ? p : dir / p).string());
      }
    }
    catch (Error const &e)
    {
      if (e.code() == ErrorCode::Scenario || e.code() == ErrorCode::Infeasible || e.code() == ErrorCode::Io)
      {
        fail(root["costs"] ? root["costs"] : root["calibration"], e.what());
      }
      throw;
    }

    auto ns = root["nodes"];
    if (!ns)
    {
      fail(root, "missing key 'nodes'");
    }
    expect_seq(ns, "nodes");
    std::set<NodeId> ids;
    for (auto const &n : ns)
    {
      expect_map(n, "node");
      allow_keys(n, {"id", "stake", "funds", "join_at", "behavior"});
      NodeSpec spec;
      spec.id = need_u64(n, "id");
      if (!ids.insert(spec.id).second)
      {
        fail(n["id"], "duplicate node id " + std::to_string(spec.id));
      }
      if (auto s = n["stake"])
      {
        spec.stake = as<Amount>(s, "stake");
      }
      read(n, "funds", spec.funds);
      read_u64(n, "join_at", spec.join_at);
      if (auto b = n["behavior"])
      {
        spec.behavior = behavior(b);
      }
      if (spec.join_at >= sc.blocks)
      {
        fail(n["join_at"], "join_at is past the end of the run");
      }
      sc.nodes.push_back(std::move(spec));
    }
    auto known = [&](YAML::Node const &at, NodeId id) {
      if (ids.count(id) == 0)
      {
        fail(at, "unknown node id " + std::to_string(id));
      }
    };

    if (auto script = root["source_chain"])
    {
      expect_seq(script, "source_chain");
      for (auto const &a : script)
      {
        expect_map(a, "source_chain entry");
        allow_keys(a, {"at", "include", "fork", "heal", "lag", "reorg"});
        SourceAction act;
        act.at = need_u64(a, "at");
        if (act.at >= sc.blocks)
        {
          fail(a["at"], "'at' is past the end of the run");
        }
        int kinds = 0;
        if (auto x = a["include"])
        {
          ++kinds;
          act.kind = SourceAction::Kind::Include;
          act.tx   = as<std::string>(x, "include");
          if (act.tx.empty())
          {
            fail(x, "transaction id must not be empty");
          }
        }
        if (auto x = a["fork"])
        {
          ++kinds;
          expect_map(x, "fork");
          allow_keys(x, {"depth", "length", "nodes"});
          act.kind = SourceAction::Kind::Fork;
          read_u64(x, "depth", act.depth);
          read_u64(x, "length", act.length);
          if (auto list = x["nodes"])
          {
            act.nodes = id_list(list, "nodes");
            for (auto id : act.nodes)
            {
              known(list, id);
            }
          }
        }
        if (auto x = a["heal"])
        {
          ++kinds;
          act.kind = SourceAction::Kind::Heal;
        }
        if (auto x = a["lag"])
        {
          ++kinds;
          expect_map(x, "lag");
          allow_keys(x, {"node", "blocks"});
          act.kind = SourceAction::Kind::Lag;
          act.node = need_u64(x, "node");
          known(x["node"], act.node);
          act.lag = need_u64(x, "blocks");
        }
        if (auto x = a["reorg"])
        {
          ++kinds;
          act.kind   = SourceAction::Kind::Reorg;
          act.branch = static_cast<std::uint32_t>(u64(x, "reorg"));
        }
        if (kinds != 1)
        {
          fail(a, "each source_chain entry needs exactly one of include, fork, heal, lag, reorg");
        }
        sc.source_script.push_back(std::move(act));
      }
    }

    if (auto rs = root["requests"])
    {
      expect_seq(rs, "requests");
      for (auto const &r : rs)
      {
        expect_map(r, "request");
        if (auto rnd = r["random"])
        {
          allow_keys(r, {"random"});
          expect_map(rnd, "random");
          allow_keys(rnd, {"count", "from", "to", "tx", "chain", "confirmations"});
          RandomRequests rr;
          rr.count = need_u64(rnd, "count");
          rr.from  = need_u64(rnd, "from");
          rr.to    = need_u64(rnd, "to");
          rr.query = query(rnd);
          if (rr.from >= rr.to || rr.to > sc.blocks)
          {
            fail(rnd, "random requests need from < to <= blocks");
          }
          if (rr.count > rr.to - rr.from)
          {
            fail(rnd["count"], "more random requests than heights in [from, to)");
          }
          sc.random_requests.push_back(std::move(rr));
          continue;
        }
        allow_keys(r, {"at", "tx", "chain", "confirmations"});
        RequestSpec spec;
        spec.at    = need_u64(r, "at");
        spec.query = query(r);
        if (spec.at >= sc.blocks)
        {
          fail(r["at"], "'at' is past the end of the run");
        }
        sc.requests.push_back(std::move(spec));
      }
    }

    if (auto fs = root["faults"])
    {
      expect_seq(fs, "faults");
      for (auto const &f : fs)
      {
        expect_map(f, "fault");
        allow_keys(f, {"drop_submission", "drop_messages", "restart"});
        if (f.size() != 1)
        {
          fail(f, "each fault entry has exactly one kind");
        }
        FaultSpec spec;
        if (auto x = f["drop_submission"])
        {
          expect_map(x, "drop_submission");
          allow_keys(x, {"node", "at", "count"});
          spec.kind = FaultSpec::Kind::DropSubmission;
          spec.node = need_u64(x, "node");
          known(x["node"], spec.node);
          spec.at = need_u64(x, "at");
          read_u64(x, "count", spec.count);
        }
        else if (auto x = f["drop_messages"])
        {
          expect_map(x, "drop_messages");
          allow_keys(x, {"from", "to", "at", "until"});
          spec.kind  = FaultSpec::Kind::DropMessages;
          spec.at    = need_u64(x, "at");
          spec.until = need_u64(x, "until");
          if (spec.at >= spec.until)
          {
            fail(x, "drop_messages needs at < until");
          }
          if (auto v = x["from"])
          {
            spec.from = u64(v, "from");
            known(v, *spec.from);
          }
          if (auto v = x["to"])
          {
            spec.to = u64(v, "to");
            known(v, *spec.to);
          }
        }
        else if (auto x = f["restart"])
        {
          expect_map(x, "restart");
          allow_keys(x, {"node", "at"});
          spec.kind = FaultSpec::Kind::Restart;
          spec.node = need_u64(x, "node");
          known(x["node"], spec.node);
          spec.at = need_u64(x, "at");
        }
        sc.faults.push_back(spec);
      }
    }

    try
    {
      sc.validate();
    }
    catch (Error const &e)
    {
      fail(root, e.what());
    }
    return sc;
  }

private:
  std::string source_;
};

}  // namespace

void Scenario::validate() const
{
  auto bad = [](std::string const &msg) { throw Error(ErrorCode::Scenario, msg); };
  if (blocks == 0)
  {
    bad("blocks must be at least 1");
  }
  if (nodes.empty())
  {
    bad("a scenario needs at least one node");
  }
  if (contracts.rotation_period == 0 || contracts.dkg_trigger == 0)
  {
    bad("rotation_period and dkg_trigger must be at least 1");
  }
  std::set<NodeId> ids;
  for (auto const &n : nodes)
  {
    if (!ids.insert(n.id).second)
    {
      bad("duplicate node id " + std::to_string(n.id));
    }
    Amount stake = n.stake.value_or(contracts.min_stake);
    if (stake < 0 || n.funds < stake)
    {
      bad("node " + std::to_string(n.id) + " cannot fund its stake");
    }
  }
  auto known = [&](NodeId id) {
    if (ids.count(id) == 0)
    {
      bad("unknown node id " + std::to_string(id));
    }
  };
  for (auto const &a : source_script)
  {
    for (auto id : a.nodes)
    {
      known(id);
    }
    if (a.kind == SourceAction::Kind::Lag)
    {
      known(a.node);
    }
  }
  for (auto const &f : faults)
  {
    if (f.kind != FaultSpec::Kind::DropMessages)
    {
      known(f.node);
    }
  }
  for (auto const &r : requests)
  {
    if (r.at >= blocks || r.query.tx.empty())
    {
      bad("request at " + std::to_string(r.at) + " is outside the run or has no transaction");
    }
  }
  if (economics.aggregation_reward < 0 || economics.validation_contribution < 0 || economics.client_funds < 0)
  {
    bad("economics amounts must not be negative");
  }
  costs.validate();
}

Scenario parse_scenario(std::string const &text, std::string const &source_name)
{
  Parser     p(source_name);
  YAML::Node root;
  try
  {
    root = YAML::Load(text);
  }
  catch (YAML::ParserException const &e)
  {
    throw Error(ErrorCode::Scenario, source_name + ":" + std::to_string(e.mark.line + 1) + ":" +
                                         std::to_string(e.mark.column + 1) + ": " + e.msg);
  }
  auto dir = std::filesystem::path(source_name).parent_path();
  return p.parse(root, dir);
}

Scenario load_scenario(std::string const &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw Error(ErrorCode::Io, "cannot read scenario '" + path + "'");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path);
}

}  // namespace ioracle::sim
