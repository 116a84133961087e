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

// Pedersen-style distributed key generation: every participant deals a random
// secret with Feldman VSS, recipients complain about shares that fail
// verification, and the key is the sum over the qualified dealers. A single
// valid complaint disqualifies a dealer; there is no rebuttal round.

#include "ioracle/bls.hpp"
#include "ioracle/sharing.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ioracle::dkg {

using NodeId = std::uint64_t;

/// Node id -> long-lived identity public key (as registered on-chain).
using IdentityDirectory = std::map<NodeId, PointG2>;

struct DkgConfig
{
  std::vector<NodeId> participants;  // registration order
  std::size_t         threshold{0};
  std::uint64_t       session{0};

  /// Throws Error(InvalidArgument) on duplicate ids or a bad threshold.
  void validate() const;

  /// 1-based evaluation point of `node`, or nullopt if not a participant.
  std::optional<std::uint64_t> index_of(NodeId node) const;
};

/// Private share sent point-to-point, signed by the dealer so that a recipient
/// can prove misbehaviour.
struct ShareEnvelope
{
  NodeId         dealer{0};
  NodeId         recipient{0};
  std::uint64_t  session{0};
  sharing::Share share;
  Digest         commitment_hash{};
  bls::Signature signature;

  Bytes signed_message() const;
};

/// The broadcast half of a deal.
struct DealRecord
{
  NodeId                     dealer{0};
  std::uint64_t              session{0};
  sharing::FeldmanCommitment commitment;
  bls::Signature             signature;  // over session, dealer, commitment

  Bytes signed_message() const;
};

struct Deal
{
  DealRecord                      record;
  std::map<NodeId, ShareEnvelope> shares;  // recipient -> envelope
};

struct Complaint
{
  NodeId                       complainer{0};
  NodeId                       dealer{0};
  std::uint64_t                session{0};
  std::optional<ShareEnvelope> evidence;  // absent when no share arrived
};

struct KeyShare
{
  std::uint64_t                     index{0};
  Scalar                            secret;
  PointG2                           public_key;
  std::map<std::uint64_t, PointG2>  verification_keys;  // index -> x_i * G
  std::set<NodeId>                  qualified;
  std::uint64_t                     session{0};
  std::size_t                       threshold{0};
};

/// Deals a fresh random secret. Throws Error(NotParticipant).
Deal dkg_deal(NodeId node, DkgConfig const &config, bls::IdentityKey const &identity, Rng &rng);

/// Checks the share addressed to `receiver`; returns a complaint iff the deal
/// is malformed, the share is missing, or it fails Feldman verification.
std::optional<Complaint> process_deal(NodeId receiver, DkgConfig const &config, Deal const &deal);

/// True iff the complaint proves dealer misbehaviour against `record`.
bool complaint_is_valid(Complaint const &complaint, DkgConfig const &config, DealRecord const &record,
                        IdentityDirectory const &identities);

/// Dealers with an authentic broadcast record and no valid complaint.
std::set<NodeId> qualified_set(DkgConfig const &config, std::span<DealRecord const> records,
                               std::span<Complaint const> complaints, IdentityDirectory const &identities);

/// Sums the shares of qualified dealers. `received` maps dealer -> envelope
/// addressed to `node`. Throws Error(SessionFailed) if |Q| is below
/// `validator_threshold` and Error(Threshold) if a qualified dealer's share is
/// missing.
KeyShare finalize(NodeId node, DkgConfig const &config, std::span<DealRecord const> records,
                  std::set<NodeId> const &qualified, std::map<NodeId, ShareEnvelope> const &received,
                  std::size_t validator_threshold);

/// Convenience for in-process runs where every deal is visible.
KeyShare finalize(NodeId node, DkgConfig const &config, std::span<Deal const> deals,
                  std::set<NodeId> const &qualified, std::size_t validator_threshold);

/// Public key implied by a set of records restricted to `qualified`.
PointG2 group_public_key(std::span<DealRecord const> records, std::set<NodeId> const &qualified);

/// Whole protocol in one process with every message delivered: used by the
/// CLI demo and by tests. `tamper` may rewrite a dealer's output before it is
/// sent, to script a malicious dealer; it gets the dealer's identity key so
/// it can re-sign what it changed. Nodes missing a share from a qualified
/// dealer are left out of `keys`.
struct LocalRun
{
  IdentityDirectory                  identities;
  std::map<NodeId, bls::IdentityKey> identity_keys;
  std::vector<Deal>                  deals;
  std::vector<Complaint>             complaints;
  std::set<NodeId>                   qualified;
  std::map<NodeId, KeyShare>         keys;
};

LocalRun run_local(DkgConfig const &config, Rng &rng, std::size_t validator_threshold,
                   std::function<void(Deal &, bls::IdentityKey const &)> const &tamper = {});

/// Ordered broadcast log for one session. Every honest node that feeds the same
/// records and complaints derives the same qualified set and public key.
class Transcript
{
public:
  explicit Transcript(DkgConfig config);

  /// Throws Error(DuplicateDealer) / Error(NotParticipant) / Error(InvalidArgument)
  /// for a session mismatch.
  void add_deal(DealRecord record);
  void add_complaint(Complaint complaint);

  DkgConfig const &config() const
  {
    return config_;
  }
  std::vector<DealRecord> records() const;  // dealer-id order
  std::vector<Complaint> const &complaints() const
  {
    return complaints_;
  }
  std::set<NodeId> qualified(IdentityDirectory const &identities) const;

  /// JSON lines: one per deal record, one per complaint, then a final
  /// {"type":"public_key"} line when `key` is given.
  std::string dump_json_lines(std::optional<PointG2> const &key = std::nullopt,
                              std::set<NodeId> const      &qualified = {}) const;

private:
  DkgConfig                    config_;
  std::map<NodeId, DealRecord> records_;
  std::vector<Complaint>       complaints_;
};

/// Per-node DKG state machine, advanced by feeding it messages.
class Session
{
public:
  Session(DkgConfig config, NodeId self, bls::IdentityKey identity, IdentityDirectory identities);

  /// Produce this node's deal (once per session).
  Deal make_deal(Rng &rng);

  void on_record(DealRecord const &record);
  void on_share(ShareEnvelope const &envelope);
  void on_complaint(Complaint const &complaint);

  /// Complaints against every recorded dealer whose share to this node is
  /// missing or invalid. Each dealer is complained about at most once.
  std::vector<Complaint> collect_complaints();

  std::set<NodeId> qualified() const;

  /// Throws as `finalize`.
  KeyShare finish(std::size_t validator_threshold) const;

  NodeId self() const
  {
    return self_;
  }
  Transcript const &transcript() const
  {
    return transcript_;
  }
  bool has_dealt() const
  {
    return dealt_;
  }

private:
  DkgConfig                       config_;
  NodeId                          self_;
  bls::IdentityKey                identity_;
  IdentityDirectory               identities_;
  Transcript                      transcript_;
  std::map<NodeId, ShareEnvelope> received_;
  std::set<NodeId>                complained_;
  bool                            dealt_{false};
};

}  // namespace ioracle::dkg
