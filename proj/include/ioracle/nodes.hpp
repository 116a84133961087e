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

// Oracle node logic. A node is a sequential state machine driven by the
// simulator: `receive` queues messages, `step` handles the inbox for the
// current tick, `on_block` reacts to a freshly mined block. Everything a node
// knows about other nodes comes from messages, its source-chain view, and the
// public ledger.

#include "ioracle/contracts.hpp"
#include "ioracle/dkg.hpp"
#include "ioracle/sourcechain.hpp"
#include "ioracle/tbls.hpp"

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace ioracle::nodes {

using NodeId = std::uint64_t;

enum class BehaviorKind
{
  Altruistic,
  Lazy,
  Byzantine,
  Offline,
  RationalWithholder,
};

enum class CorruptionMode
{
  RandomPoint,   // honest payload, garbage share
  WrongPayload,  // colluding forged answer with a valid share
  Withhold,      // never answers, never aggregates
};

char const    *to_string(BehaviorKind k);
char const    *to_string(CorruptionMode m);
BehaviorKind   parse_behavior_kind(std::string_view s);
CorruptionMode parse_corruption_mode(std::string_view s);

/// Half-open block interval [from, to).
struct Interval
{
  std::uint64_t from{0};
  std::uint64_t to{0};

  bool contains(std::uint64_t h) const
  {
    return h >= from && h < to;
  }
};

struct BehaviorProfile
{
  BehaviorKind kind{BehaviorKind::Altruistic};
  // Lazy: answer signed without looking at the chain.
  source::VerificationAnswer lazy_answer{true, 0, {}, true};
  // Byzantine
  CorruptionMode corruption{CorruptionMode::RandomPoint};
  // Offline: the node is down during these intervals and behaves
  // altruistically otherwise.
  std::vector<Interval> offline;
  // DKG misbehaviour, usable with any kind.
  bool corrupt_dkg_share{false};  // deal one invalid share
  bool forge_public_key{false};   // submit a random group key

  bool online_at(std::uint64_t height) const;
};

struct Response
{
  std::uint64_t        request_id{0};
  Bytes                payload;
  tbls::SignatureShare share;
};

// ------------------------------------------------------------ messages

struct CollectRequest
{
  std::uint64_t   request_id{0};
  source::TxQuery query;
};
struct ResponseMessage
{
  Response response;
};
struct DkgShareMessage
{
  dkg::ShareEnvelope envelope;
};

using MessageBody = std::variant<CollectRequest, ResponseMessage, DkgShareMessage>;

struct Message
{
  NodeId        from{0};
  NodeId        to{0};
  std::uint64_t seq{0};  // per sender
  std::uint64_t sent_at{0};
  MessageBody   body;
};

char const *message_type(MessageBody const &body);

/// What a node may touch outside itself.
class Environment
{
public:
  virtual ~Environment() = default;

  virtual contracts::Ledger const &ledger() const = 0;
  /// Answers from `self`'s own source-chain view.
  virtual source::VerificationAnswer query_source(NodeId self, source::TxQuery const &q) const = 0;
  virtual void                       send(NodeId from, NodeId to, MessageBody body) = 0;
  virtual void                       submit(NodeId from, contracts::Transaction tx) = 0;
};

// ------------------------------------------------------------ pure paths

/// The validator path for one request given the node's own view of the
/// source chain. Returns nullopt without a key share and for withholding
/// profiles.
std::optional<Response> validator_respond(BehaviorProfile const &profile, dkg::KeyShare const *key,
                                          std::uint64_t request_id, source::TxQuery const &query,
                                          source::VerificationAnswer const &own_view, Rng &rng);

/// Forged answer shared by colluding wrong-payload nodes.
source::VerificationAnswer forged_answer(source::TxQuery const &query, source::VerificationAnswer const &honest);

struct Submission
{
  Bytes                      payload;
  bls::Signature             signature;
  std::vector<std::uint64_t> indices;  // shares used, ascending
};
struct Retry
{
  std::size_t best_group{0};  // valid shares in the best group
  std::size_t rejected_shares{0};
};
using AggregateOutcome = std::variant<Submission, Retry>;

/// Remembers share checks across blocks so retries do not repeat pairings.
class ShareCache
{
public:
  bool verify(tbls::SignatureShare const &share, std::span<std::uint8_t const> payload, PointG2 const &vk);
  std::size_t checks() const
  {
    return checks_;
  }

private:
  std::map<Bytes, bool> seen_;
  std::size_t           checks_{0};
};

/// Groups responses by payload bytes, keeps only shares that verify against
/// `vks`, and recovers from the group with the most valid shares (ties go to
/// the smaller payload). Unverified shares never reach recover.
AggregateOutcome aggregate(std::span<Response const> responses, std::uint64_t request_id, std::size_t threshold,
                           std::map<std::uint64_t, PointG2> const &vks, ShareCache &cache);

// ------------------------------------------------------------ node

struct NodeOptions
{
  std::uint64_t dkg_wait{2};  // blocks between the key generation event and dealing
};

struct NodeStats
{
  std::uint64_t responses_sent{0};
  std::uint64_t collect_requests_sent{0};
  std::uint64_t submissions{0};
  std::uint64_t retries{0};
  std::uint64_t invalid_shares_seen{0};
  std::uint64_t dkg_complaints{0};
  std::uint64_t dkg_failures{0};
  std::uint64_t key_submissions{0};
  std::uint64_t key_disputes{0};
  std::uint64_t restarts{0};
};

class OracleNode
{
public:
  OracleNode(NodeId id, BehaviorProfile profile, bls::IdentityKey identity, Rng rng, NodeOptions options = {});

  NodeId id() const
  {
    return id_;
  }
  BehaviorProfile const &profile() const
  {
    return profile_;
  }
  PointG2 const &identity_public_key() const
  {
    return identity_.public_key;
  }
  bool online_at(std::uint64_t height) const
  {
    return profile_.online_at(height);
  }

  void receive(Message message);
  /// Processes the inbox at tick `height`, then, as the scheduled aggregator,
  /// tries to submit every request with enough matching shares.
  void step(std::uint64_t height, Environment &env);
  /// Called after block `height` is mined: replays new ledger events, runs
  /// the DKG schedule, and as an upcoming aggregator asks validators for
  /// responses to every open request.
  void on_block(std::uint64_t height, Environment &env);
  /// Loses all volatile state; key shares survive.
  void restart();

  std::optional<Response> validator_respond(std::uint64_t request_id, source::TxQuery const &query,
                                            Environment &env);

  /// Key share for the session currently active on-chain, if this node has
  /// one. Exposed for tests and reports.
  dkg::KeyShare const *active_key(contracts::Ledger const &ledger) const;
  std::set<std::uint64_t> open_requests() const;
  NodeStats const        &stats() const
  {
    return stats_;
  }

private:
  struct DkgRun
  {
    contracts::KeyGenerationInfo info;
    dkg::Session                 session;
    std::uint64_t                start{0};
    bool                         failed{false};
  };
  struct Collection
  {
    std::map<NodeId, Response>   responses;
    std::optional<std::uint64_t> submitted_at;
  };
  struct PublicKeyInfo
  {
    std::size_t                      threshold{0};
    std::map<std::uint64_t, PointG2> vks;
    std::map<NodeId, std::uint64_t>  index;
  };

  void replay(Environment &env);
  void handle_event(contracts::Event const &ev, Environment &env);
  void run_dkg(std::uint64_t height, Environment &env);
  void run_key_submission(std::uint64_t height, Environment &env);
  void run_collection(std::uint64_t height, Environment &env);
  void try_submit(std::uint64_t height, Environment &env);
  void on_collect(Message const &m, CollectRequest const &req, std::uint64_t height, Environment &env);
  void on_response(Message const &m, Response const &r, std::uint64_t height, Environment &env);
  bool aggregates() const;
  bool is_aggregator_for(std::uint64_t height, Environment &env) const;
  PublicKeyInfo const *active_public_info(contracts::Ledger const &ledger);

  NodeId           id_;
  BehaviorProfile  profile_;
  bls::IdentityKey identity_;
  Rng              rng_;
  NodeOptions      options_;
  NodeStats        stats_;

  // persistent
  std::map<std::uint64_t, dkg::KeyShare> keys_;  // session -> share

  // volatile
  std::size_t                                            cursor_{0};
  std::deque<Message>                                    inbox_;
  std::map<std::uint64_t, contracts::KeyGenerationInfo> generations_;
  std::map<std::uint64_t, dkg::Transcript>              transcripts_;
  std::map<std::uint64_t, PublicKeyInfo>                public_info_;
  std::optional<DkgRun>                                  dkg_;
  std::map<std::uint64_t, source::TxQuery>               open_;
  std::map<std::uint64_t, Collection>                    collections_;
  ShareCache                                             cache_;
  std::set<std::uint64_t>                                disputed_;
};

}  // namespace ioracle::nodes
