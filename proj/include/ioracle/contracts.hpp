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

// In-memory emulation of the three target-chain contracts (registry, key,
// oracle) behind a single ledger with a block clock and an append-only event
// log. Every state change goes through a transaction; rejected transactions
// leave state untouched and are reported in their receipt.

#include "ioracle/bls.hpp"
#include "ioracle/dkg.hpp"
#include "ioracle/sourcechain.hpp"

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace ioracle::contracts {

using NodeId  = std::uint64_t;
using Account = std::string;
using Amount  = std::int64_t;

Account node_account(NodeId node);

struct ContractParams
{
  Amount        min_stake{100};
  std::uint64_t rotation_period{6};
  std::uint64_t dkg_trigger{3};  // registrations per key generation
  std::uint64_t dispute_window{12};
  std::uint32_t slash_percent{50};
  std::size_t   validator_threshold{0};  // 0: same as the signature threshold
  Amount        min_tx_compensation{257607};
  Amount        min_aggregation_reward{10};
  Amount        min_validation_contribution{5};
  double        lottery_alpha{0.5};
};

enum class NodeStatus
{
  Active,
  Exiting,
  Kicked,
};

struct NodeRecord
{
  NodeId        id{0};
  std::string   host;
  PointG2       identity_key;
  Amount        stake{0};
  NodeStatus    status{NodeStatus::Active};
  std::uint64_t ordinal{0};  // registration order, never reused
};

struct Fees
{
  Amount tx_compensation{0};
  Amount aggregation_reward{0};
  Amount validation_contribution{0};

  Amount total() const
  {
    return tx_compensation + aggregation_reward + validation_contribution;
  }
  bool operator==(Fees const &) const = default;
};

struct KeyGenerationInfo
{
  std::uint64_t       session{0};
  std::vector<NodeId> participants;
  std::size_t         threshold{0};
  std::size_t         validator_threshold{0};
  std::uint64_t       height{0};
};

struct PendingKey
{
  std::uint64_t    session{0};
  PointG2          public_key;
  NodeId           submitter{0};
  std::set<NodeId> disputes;
  std::uint64_t    submitted_at{0};
};

struct KeyState
{
  std::optional<PointG2>           active_key;
  std::uint64_t                    active_session{0};
  std::size_t                      threshold{0};
  std::size_t                      validator_threshold{0};
  std::optional<KeyGenerationInfo> generation;  // latest session
  std::optional<PendingKey>        pending;
};

struct LotteryOutcome
{
  bool   win{false};
  Amount payout{0};
  double probability{0.0};
  double draw{0.0};
};

struct ResultRecord
{
  std::uint64_t  request_id{0};
  Bytes          payload;
  bls::Signature signature;
  NodeId         aggregator{0};
  std::uint64_t  height{0};
  std::uint64_t  key_session{0};
  LotteryOutcome lottery;
};

// ------------------------------------------------------------ payload

/// Canonical result encoding; these bytes are what the threshold signature
/// covers. 8-byte request id, inclusion flag, 8-byte block number, 32-byte
/// block hash, confirmation flag, all big-endian.
constexpr std::size_t kPayloadSize = 8 + 1 + 8 + 32 + 1;

Bytes                      encode_payload(std::uint64_t request_id, source::VerificationAnswer const &answer);
std::optional<std::pair<std::uint64_t, source::VerificationAnswer>> decode_payload(
    std::span<std::uint8_t const> bytes);

// ------------------------------------------------------------ lottery

/// u in [0,1) from the first 64 bits of SHA-256 over the signature encoding.
double lottery_draw(bls::Signature const &sig);
double win_probability(Amount stake, Amount total_stake, double alpha);

/// Pure: the pot passed in already includes the current contribution.
LotteryOutcome run_lottery(bls::Signature const &sig, Amount stake, Amount total_stake, Amount pot, double alpha);

// ------------------------------------------------------------ transactions

struct RegisterTx
{
  NodeId      node{0};
  std::string host;
  PointG2     identity_key;
  Amount      stake{0};
};
struct DeregisterTx
{
  NodeId node{0};
};
struct KickTx
{
  NodeId           sender{0};
  NodeId           target{0};
  std::set<NodeId> votes;
};
struct SubmitKeyTx
{
  NodeId        node{0};
  std::uint64_t session{0};
  PointG2       public_key;
};
struct DisputeKeyTx
{
  NodeId        node{0};
  std::uint64_t session{0};
};
struct RequestTx
{
  Account         client;
  source::TxQuery query;
  Fees            fees;
};
struct SubmitResultTx
{
  NodeId         node{0};
  std::uint64_t  request_id{0};
  Bytes          payload;
  bls::Signature signature;
};
/// DKG broadcast messages ride on the ledger's event log.
struct DkgDealTx
{
  NodeId          node{0};
  dkg::DealRecord record;
};
struct DkgComplaintTx
{
  NodeId         node{0};
  dkg::Complaint complaint;
};

using Transaction = std::variant<RegisterTx, DeregisterTx, KickTx, SubmitKeyTx, DisputeKeyTx, RequestTx,
                                 SubmitResultTx, DkgDealTx, DkgComplaintTx>;

/// True for transactions sent by oracle nodes (everything but client
/// requests).
bool is_oracle_tx(Transaction const &tx);

enum class Reject
{
  None,
  InsufficientStake,
  InsufficientBalance,
  DuplicateNode,
  UnknownNode,
  NotActive,
  NoMajority,
  NotParticipant,
  NoSession,
  StaleSession,
  SubmissionPending,
  KeyAlreadyActive,
  NothingPending,
  AlreadyDisputed,
  DisputeWindowClosed,
  Underpayment,
  WrongAggregator,
  NoActiveKey,
  UnknownRequest,
  DuplicateResult,
  InvalidPayload,
  InvalidSignature,
  InvalidKey,
};

char const *to_string(Reject r);

struct Receipt
{
  Reject        reject{Reject::None};
  std::uint64_t request_id{0};  // set by RequestTx

  bool ok() const
  {
    return reject == Reject::None;
  }
};

// ------------------------------------------------------------ events

struct NodeRegistered
{
  NodeId        node{0};
  std::uint64_t ordinal{0};
  Amount        stake{0};
};
struct NodeExited
{
  NodeId node{0};
  bool   kicked{false};
  Amount returned{0};
  Amount burned{0};
};
struct KeyGenerationEvent
{
  KeyGenerationInfo info;
};
struct KeySubmitted
{
  std::uint64_t session{0};
  NodeId        submitter{0};
  PointG2       public_key;
  std::uint64_t dispute_deadline{0};
};
struct KeyDisputed
{
  std::uint64_t session{0};
  NodeId        node{0};
  std::size_t   votes{0};
};
struct KeyRejected
{
  std::uint64_t session{0};
  NodeId        submitter{0};
  Amount        slashed{0};
};
struct KeyActivated
{
  std::uint64_t session{0};
  PointG2       public_key;
  std::size_t   threshold{0};
  std::size_t   validator_threshold{0};
};
struct RequestEvent
{
  std::uint64_t   request_id{0};
  Account         client;
  source::TxQuery query;
  Fees            fees;
};
struct ResultAvailable
{
  std::uint64_t request_id{0};
  NodeId        aggregator{0};
  bool          lottery_win{false};
  Amount        payout{0};
};
struct DkgDealBroadcast
{
  dkg::DealRecord record;
};
struct DkgComplaintBroadcast
{
  dkg::Complaint complaint;
};

using EventPayload = std::variant<NodeRegistered, NodeExited, KeyGenerationEvent, KeySubmitted, KeyDisputed,
                                  KeyRejected, KeyActivated, RequestEvent, ResultAvailable, DkgDealBroadcast,
                                  DkgComplaintBroadcast>;

struct Event
{
  std::uint64_t seq{0};
  std::uint64_t height{0};
  EventPayload  payload;
};

struct BlockRecord
{
  std::uint64_t                                 height{0};
  std::vector<std::pair<Transaction, Receipt>>  txs;
  std::uint64_t                                 first_event{0};
  std::uint64_t                                 end_event{0};
};

// ------------------------------------------------------------ ledger

class Ledger
{
public:
  explicit Ledger(ContractParams params = {});

  ContractParams const &params() const
  {
    return params_;
  }

  /// Height of the block currently being assembled.
  std::uint64_t height() const
  {
    return height_;
  }

  /// Genesis-style minting; tracked so conservation can be checked.
  void fund(Account const &account, Amount amount);

  /// Queue for the next `mine`.
  void submit(Transaction tx);
  std::size_t pending() const
  {
    return pool_.size();
  }

  /// Closes the current block: applies the queued transactions in order and
  /// advances the height. An undisputed key whose window has run out is
  /// activated at the start of the new block.
  std::vector<Receipt> mine();

  /// Applies one transaction in the current block.
  Receipt execute(Transaction const &tx);

  // registry
  std::optional<NodeRecord> node(NodeId id) const;
  std::vector<NodeRecord>   nodes() const;  // registration order
  std::vector<NodeId>       active_nodes() const;
  /// Throws Error(InvalidArgument) when no node is active.
  NodeId        current_aggregator(std::uint64_t height) const;
  std::uint64_t registrations_since_dkg() const
  {
    return since_dkg_;
  }

  // key
  KeyState const &key_state() const
  {
    return key_;
  }

  // oracle
  std::optional<ResultRecord> get_result(std::uint64_t request_id) const;
  bool                        request_open(std::uint64_t request_id) const;
  std::vector<std::uint64_t>  open_requests() const;

  // accounting
  Amount balance(Account const &account) const;
  Amount pot() const
  {
    return pot_;
  }
  Amount escrow_total() const;
  Amount stake_total() const;  // stakes still locked
  Amount active_stake_total() const;
  Amount burned() const
  {
    return burned_;
  }
  Amount minted() const
  {
    return minted_;
  }
  /// balances + locked stakes + escrow + pot; equals minted - burned.
  Amount supply() const;
  std::map<Account, Amount> const &balances() const
  {
    return balances_;
  }

  std::vector<Event> const &events() const
  {
    return events_;
  }
  std::vector<BlockRecord> const &blocks() const
  {
    return blocks_;
  }

  /// Oracle-side transactions (accepted or not) in blocks at or above
  /// `from_height`.
  std::size_t oracle_tx_count(std::uint64_t from_height) const;

  /// One JSON object per mined block: height, transactions with receipts,
  /// events.
  std::string transcript_json_lines() const;

private:
  Receipt apply(RegisterTx const &tx);
  Receipt apply(DeregisterTx const &tx);
  Receipt apply(KickTx const &tx);
  Receipt apply(SubmitKeyTx const &tx);
  Receipt apply(DisputeKeyTx const &tx);
  Receipt apply(RequestTx const &tx);
  Receipt apply(SubmitResultTx const &tx);
  Receipt apply(DkgDealTx const &tx);
  Receipt apply(DkgComplaintTx const &tx);

  void emit(EventPayload payload);
  void trigger_key_generation();
  void check_validator_floor();
  void maybe_activate_key();
  bool is_active(NodeId id) const;

  ContractParams params_;
  std::uint64_t  height_{0};

  std::vector<NodeRecord>       records_;
  std::map<NodeId, std::size_t> by_id_;
  std::uint64_t                 since_dkg_{0};
  std::uint64_t                 next_session_{1};

  KeyState key_;

  std::uint64_t                        next_request_{1};
  std::map<std::uint64_t, Fees>        escrow_;
  std::map<std::uint64_t, ResultRecord> results_;
  Amount                               pot_{0};

  std::map<Account, Amount> balances_;
  Amount                    burned_{0};
  Amount                    minted_{0};

  std::deque<Transaction>  pool_;
  std::vector<Event>       events_;
  std::vector<BlockRecord> blocks_;
  BlockRecord              current_;
};

}  // namespace ioracle::contracts
