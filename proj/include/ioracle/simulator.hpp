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

#pragma once

// Deterministic discrete-event harness. One tick is one target-chain block and
// one source-chain block. Within tick h:
//   1. scripted restarts take effect
//   2. the source-chain script for h runs and the source chain grows a block
//   3. messages sent during tick h-1 are delivered in (sender ordinal, seq)
//      order and every online node handles its inbox
//   4. scheduled registrations and client requests enter the transaction pool
//   5. block h is mined
//   6. every online node sees block h
// Everything is a pure function of the scenario and its seed.

#include "ioracle/contracts.hpp"
#include "ioracle/costmodel.hpp"
#include "ioracle/nodes.hpp"
#include "ioracle/sourcechain.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ioracle::sim {

using NodeId = std::uint64_t;
using Amount = contracts::Amount;

struct NodeSpec
{
  NodeId                 id{0};
  std::optional<Amount>  stake;  // default: minimum stake
  Amount                 funds{1000};
  std::uint64_t          join_at{0};
  nodes::BehaviorProfile behavior;
};

struct SourceAction
{
  enum class Kind
  {
    Include,
    Fork,
    Heal,
    Lag,
    Reorg,
  };
  std::uint64_t    at{0};
  Kind             kind{Kind::Include};
  std::string      tx;
  std::uint64_t    depth{0};
  std::uint64_t    length{0};
  std::set<NodeId> nodes;
  NodeId           node{0};
  std::uint64_t    lag{0};
  std::uint32_t    branch{0};
};

struct RequestSpec
{
  std::uint64_t   at{0};
  source::TxQuery query;
};

/// `count` requests at distinct heights drawn uniformly from [from, to).
struct RandomRequests
{
  std::size_t     count{0};
  std::uint64_t   from{0};
  std::uint64_t   to{0};
  source::TxQuery query;
};

struct FaultSpec
{
  enum class Kind
  {
    DropSubmission,  // drop the node's next `count` result submissions at or after `at`
    DropMessages,    // drop messages delivered in [at, until) matching from/to
    Restart,         // node loses volatile state at the start of tick `at`
  };
  Kind                  kind{Kind::DropSubmission};
  NodeId                node{0};
  std::uint64_t         at{0};
  std::uint64_t         until{0};
  std::uint64_t         count{1};
  std::optional<NodeId> from;
  std::optional<NodeId> to;
};

struct Economics
{
  Amount aggregation_reward{10};
  Amount validation_contribution{5};
  Amount client_funds{1'000'000'000};
};

struct Scenario
{
  std::string                name{"scenario"};
  std::uint64_t              seed{1};
  std::uint64_t              blocks{40};
  contracts::ContractParams  contracts;
  std::uint64_t              dkg_wait{2};
  Economics                  economics;
  cost::CostParams           costs;
  std::vector<NodeSpec>      nodes;
  std::vector<SourceAction>  source_script;
  std::vector<RequestSpec>   requests;
  std::vector<RandomRequests> random_requests;
  std::vector<FaultSpec>     faults;

  /// Throws Error(Scenario) naming the offending field.
  void validate() const;
};

/// Throws Error(Io) if the file cannot be read and Error(Scenario) with
/// "<file>:<line>:<column>: ..." for malformed content.
Scenario load_scenario(std::string const &path);
Scenario parse_scenario(std::string const &text, std::string const &source_name = "<scenario>");

struct RequestMetrics
{
  std::uint64_t                request_id{0};
  source::TxQuery              query;
  std::uint64_t                requested_at{0};
  std::optional<std::uint64_t> fulfilled_at;
  std::optional<std::uint64_t> latency;
  std::optional<NodeId>        aggregator;
  std::optional<source::VerificationAnswer> answer;
  // Set for fulfilled requests: the accepted answer matched the canonical
  // source chain at some tick while the request was open.
  std::optional<bool> canonical;
  bool                lottery_win{false};
};

struct NodeMetrics
{
  NodeId        id{0};
  std::string   behavior;
  Amount        balance{0};
  Amount        stake{0};
  std::string   status;
  Amount        rewards{0};  // tx compensation + aggregation rewards
  std::uint64_t results{0};
  std::uint64_t lottery_wins{0};
  Amount        lottery_payout{0};
  bool          key_share{false};
  nodes::NodeStats stats;
};

struct CostTotals
{
  std::uint64_t results{0};
  std::uint64_t nodes{0};
  cost::Gas     bls{0};
  cost::Gas     onchain{0};
  cost::Gas     ecdsa{0};
  cost::Gas     relay_window{0};  // one header per simulated block
};

struct Metrics
{
  std::string                 scenario;
  std::uint64_t               seed{0};
  std::uint64_t               blocks{0};
  std::vector<RequestMetrics> requests;
  std::vector<NodeMetrics>    nodes;
  std::uint64_t               submissions_accepted{0};
  std::uint64_t               submissions_rejected{0};
  std::uint64_t               submissions_dropped{0};
  std::map<std::string, std::uint64_t> rejects;
  std::uint64_t               dkg_sessions{0};
  std::uint64_t               keys_activated{0};
  std::uint64_t               keys_rejected{0};
  std::optional<std::uint64_t> key_active_at;
  std::optional<std::uint64_t> oracle_txs_after_key;
  std::uint64_t               oracle_txs{0};
  std::uint64_t               messages_sent{0};
  std::uint64_t               messages_dropped{0};
  Amount                      pot{0};
  Amount                      burned{0};
  Amount                      minted{0};
  bool                        conservation{false};
  CostTotals                  costs;
  std::string                 transcript_sha256;

  std::size_t fulfilled() const;
};

struct RunResult
{
  Metrics     metrics;
  std::string ledger_transcript;   // JSON lines, one per block
  std::string message_log;         // JSON lines, one per delivery attempt
  std::string dkg_transcript;      // JSON lines per session

  std::string transcript() const;
};

class Simulation
{
public:
  explicit Simulation(Scenario scenario);
  ~Simulation();
  Simulation(Simulation const &)            = delete;
  Simulation &operator=(Simulation const &) = delete;

  void tick();
  RunResult run();

  /// Queues a message as if `m.from` had sent it during the current tick;
  /// it is delivered at the next one. Lets tests impersonate a node.
  void inject(nodes::Message m);

  std::uint64_t height() const;
  bool          done() const;

  Scenario const            &scenario() const;
  contracts::Ledger const   &ledger() const;
  source::SourceChain const &chain() const;
  nodes::OracleNode const   &node(NodeId id) const;

  Metrics   metrics() const;
  RunResult result() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

RunResult run(Scenario const &scenario);

std::string report_json(Metrics const &m);
std::string report_table(Metrics const &m);
/// One row per request.
std::string report_csv(Metrics const &m);

}  // namespace ioracle::sim
