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

#include "ioracle/contracts.hpp"
#include "ioracle/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace ioracle::contracts {

using nlohmann::json;

Account node_account(NodeId node)
{
  return "node-" + std::to_string(node);
}

// ------------------------------------------------------------ payload

Bytes encode_payload(std::uint64_t request_id, source::VerificationAnswer const &answer)
{
  Bytes out;
  out.reserve(kPayloadSize);
  append_u64_be(out, request_id);
  out.push_back(answer.included ? 1 : 0);
  append_u64_be(out, answer.included ? answer.block_number : 0);
  if (answer.included)
  {
    append(out, answer.block_hash);
  }
  else
  {
    out.insert(out.end(), 32, 0);
  }
  out.push_back(answer.confirmed ? 1 : 0);
  return out;
}

std::optional<std::pair<std::uint64_t, source::VerificationAnswer>> decode_payload(
    std::span<std::uint8_t const> bytes)
{
  if (bytes.size() != kPayloadSize || bytes[8] > 1 || bytes[kPayloadSize - 1] > 1)
  {
    return std::nullopt;
  }
  source::VerificationAnswer a;
  std::uint64_t              id = read_u64_be(bytes.subspan(0, 8));
  a.included                    = bytes[8] == 1;
  a.block_number                = read_u64_be(bytes.subspan(9, 8));
  std::copy(bytes.begin() + 17, bytes.begin() + 49, a.block_hash.begin());
  a.confirmed = bytes[49] == 1;
  return std::make_pair(id, a);
}

// ------------------------------------------------------------ lottery

double lottery_draw(bls::Signature const &sig)
{
  auto          enc = sig.point.encode();
  Digest        h   = sha256(enc);
  std::uint64_t top = read_u64_be(std::span<std::uint8_t const>(h.data(), 8));
  return std::ldexp(static_cast<double>(top >> 11), -53);
}

double win_probability(Amount stake, Amount total_stake, double alpha)
{
  if (total_stake <= 0 || stake <= 0)
  {
    return 0.0;
  }
  double share = static_cast<double>(stake) / static_cast<double>(total_stake);
  return std::min(1.0, alpha * share * share);
}

LotteryOutcome run_lottery(bls::Signature const &sig, Amount stake, Amount total_stake, Amount pot, double alpha)
{
  LotteryOutcome out;
  out.probability = win_probability(stake, total_stake, alpha);
  out.draw        = lottery_draw(sig);
  out.win         = out.draw < out.probability;
  out.payout      = out.win ? pot : 0;
  return out;
}

// ------------------------------------------------------------ misc

bool is_oracle_tx(Transaction const &tx)
{
  return !std::holds_alternative<RequestTx>(tx);
}

char const *to_string(Reject r)
{
  switch (r)
  {
  case Reject::None:
    return "ok";
  case Reject::InsufficientStake:
    return "insufficient stake";
  case Reject::InsufficientBalance:
    return "insufficient balance";
  case Reject::DuplicateNode:
    return "duplicate node";
  case Reject::UnknownNode:
    return "unknown node";
  case Reject::NotActive:
    return "node not active";
  case Reject::NoMajority:
    return "no majority";
  case Reject::NotParticipant:
    return "not a participant";
  case Reject::NoSession:
    return "no key generation session";
  case Reject::StaleSession:
    return "stale session";
  case Reject::SubmissionPending:
    return "submission pending";
  case Reject::KeyAlreadyActive:
    return "key already active";
  case Reject::NothingPending:
    return "nothing pending";
  case Reject::AlreadyDisputed:
    return "already disputed";
  case Reject::DisputeWindowClosed:
    return "dispute window closed";
  case Reject::Underpayment:
    return "underpayment";
  case Reject::WrongAggregator:
    return "wrong aggregator";
  case Reject::NoActiveKey:
    return "no active key";
  case Reject::UnknownRequest:
    return "unknown request";
  case Reject::DuplicateResult:
    return "duplicate result";
  case Reject::InvalidPayload:
    return "invalid payload";
  case Reject::InvalidSignature:
    return "invalid signature";
  case Reject::InvalidKey:
    return "invalid key";
  }
  return "unknown";
}

namespace {

json query_json(source::TxQuery const &q)
{
  return json{{"chain", q.chain}, {"tx", q.tx}, {"min_confirmations", q.min_confirmations}};
}

json fees_json(Fees const &f)
{
  return json{{"tx_compensation", f.tx_compensation},
              {"aggregation_reward", f.aggregation_reward},
              {"validation_contribution", f.validation_contribution}};
}

json complaint_json(dkg::Complaint const &c)
{
  json j{{"complainer", c.complainer}, {"dealer", c.dealer}, {"session", c.session}};
  if (c.evidence)
  {
    j["share_index"] = c.evidence->share.index;
    j["share_value"] = c.evidence->share.value.to_hex();
    j["signature"]   = c.evidence->signature.point.to_hex();
  }
  return j;
}

json record_json(dkg::DealRecord const &r)
{
  json pts = json::array();
  for (auto const &p : r.commitment.points)
  {
    pts.push_back(p.to_hex());
  }
  return json{{"dealer", r.dealer}, {"session", r.session}, {"commitment", pts},
              {"signature", r.signature.point.to_hex()}};
}

struct TxJson
{
  json operator()(RegisterTx const &t) const
  {
    return {{"type", "register"}, {"node", t.node}, {"host", t.host}, {"identity_key", t.identity_key.to_hex()},
            {"stake", t.stake}};
  }
  json operator()(DeregisterTx const &t) const
  {
    return {{"type", "deregister"}, {"node", t.node}};
  }
  json operator()(KickTx const &t) const
  {
    return {{"type", "kick"}, {"sender", t.sender}, {"target", t.target},
            {"votes", std::vector<NodeId>(t.votes.begin(), t.votes.end())}};
  }
  json operator()(SubmitKeyTx const &t) const
  {
    return {{"type", "submit_key"}, {"node", t.node}, {"session", t.session}, {"public_key", t.public_key.to_hex()}};
  }
  json operator()(DisputeKeyTx const &t) const
  {
    return {{"type", "dispute_key"}, {"node", t.node}, {"session", t.session}};
  }
  json operator()(RequestTx const &t) const
  {
    return {{"type", "request"}, {"client", t.client}, {"query", query_json(t.query)}, {"fees", fees_json(t.fees)}};
  }
  json operator()(SubmitResultTx const &t) const
  {
    return {{"type", "submit_result"}, {"node", t.node}, {"request_id", t.request_id},
            {"payload", to_hex(t.payload)}, {"signature", t.signature.point.to_hex()}};
  }
  json operator()(DkgDealTx const &t) const
  {
    return {{"type", "dkg_deal"}, {"node", t.node}, {"record", record_json(t.record)}};
  }
  json operator()(DkgComplaintTx const &t) const
  {
    return {{"type", "dkg_complaint"}, {"node", t.node}, {"complaint", complaint_json(t.complaint)}};
  }
};

struct EventJson
{
  json operator()(NodeRegistered const &e) const
  {
    return {{"type", "NodeRegistered"}, {"node", e.node}, {"ordinal", e.ordinal}, {"stake", e.stake}};
  }
  json operator()(NodeExited const &e) const
  {
    return {{"type", "NodeExited"}, {"node", e.node}, {"kicked", e.kicked}, {"returned", e.returned},
            {"burned", e.burned}};
  }
  json operator()(KeyGenerationEvent const &e) const
  {
    return {{"type", "KeyGeneration"},
            {"session", e.info.session},
            {"participants", e.info.participants},
            {"threshold", e.info.threshold},
            {"validator_threshold", e.info.validator_threshold}};
  }
  json operator()(KeySubmitted const &e) const
  {
    return {{"type", "KeySubmitted"}, {"session", e.session}, {"submitter", e.submitter},
            {"public_key", e.public_key.to_hex()}, {"dispute_deadline", e.dispute_deadline}};
  }
  json operator()(KeyDisputed const &e) const
  {
    return {{"type", "KeyDisputed"}, {"session", e.session}, {"node", e.node}, {"votes", e.votes}};
  }
  json operator()(KeyRejected const &e) const
  {
    return {{"type", "KeyRejected"}, {"session", e.session}, {"submitter", e.submitter}, {"slashed", e.slashed}};
  }
  json operator()(KeyActivated const &e) const
  {
    return {{"type", "KeyActivated"}, {"session", e.session}, {"public_key", e.public_key.to_hex()},
            {"threshold", e.threshold}, {"validator_threshold", e.validator_threshold}};
  }
  json operator()(RequestEvent const &e) const
  {
    return {{"type", "Request"}, {"request_id", e.request_id}, {"client", e.client},
            {"query", query_json(e.query)}, {"fees", fees_json(e.fees)}};
  }
  json operator()(ResultAvailable const &e) const
  {
    return {{"type", "ResultAvailable"}, {"request_id", e.request_id}, {"aggregator", e.aggregator},
            {"lottery_win", e.lottery_win}, {"payout", e.payout}};
  }
  json operator()(DkgDealBroadcast const &e) const
  {
    return {{"type", "DkgDeal"}, {"record", record_json(e.record)}};
  }
  json operator()(DkgComplaintBroadcast const &e) const
  {
    return {{"type", "DkgComplaint"}, {"complaint", complaint_json(e.complaint)}};
  }
};

}  // namespace

// ------------------------------------------------------------ ledger

Ledger::Ledger(ContractParams params)
  : params_(params)
{
  if (params_.rotation_period == 0 || params_.dkg_trigger == 0)
  {
    throw Error(ErrorCode::InvalidArgument, "rotation period and DKG trigger must be positive");
  }
  if (params_.slash_percent > 100 || params_.min_stake < 0)
  {
    throw Error(ErrorCode::InvalidArgument, "slash percent must be within 0..100 and stake non-negative");
  }
}

void Ledger::fund(Account const &account, Amount amount)
{
  if (amount < 0)
  {
    throw Error(ErrorCode::InvalidArgument, "cannot fund a negative amount");
  }
  balances_[account] += amount;
  minted_ += amount;
}

void Ledger::submit(Transaction tx)
{
  pool_.push_back(std::move(tx));
}

std::vector<Receipt> Ledger::mine()
{
  std::vector<Receipt> receipts;
  while (!pool_.empty())
  {
    Transaction tx = std::move(pool_.front());
    pool_.pop_front();
    receipts.push_back(execute(tx));
  }
  current_.height    = height_;
  current_.end_event = events_.size();
  blocks_.push_back(std::move(current_));
  current_             = BlockRecord{};
  current_.first_event = events_.size();
  ++height_;
  // Activation belongs to the first thing that happens in the new block.
  maybe_activate_key();
  return receipts;
}

Receipt Ledger::execute(Transaction const &tx)
{
  Receipt r = std::visit([this](auto const &t) { return apply(t); }, tx);
  current_.txs.emplace_back(tx, r);
  return r;
}

void Ledger::emit(EventPayload payload)
{
  events_.push_back(Event{events_.size(), height_, std::move(payload)});
}

bool Ledger::is_active(NodeId id) const
{
  auto it = by_id_.find(id);
  return it != by_id_.end() && records_[it->second].status == NodeStatus::Active;
}

// ---- registry

Receipt Ledger::apply(RegisterTx const &tx)
{
  if (by_id_.count(tx.node) != 0)
  {
    return {Reject::DuplicateNode};
  }
  if (tx.stake < params_.min_stake)
  {
    return {Reject::InsufficientStake};
  }
  if (tx.identity_key.is_identity())
  {
    return {Reject::InvalidKey};
  }
  Account acct = node_account(tx.node);
  if (balance(acct) < tx.stake)
  {
    return {Reject::InsufficientBalance};
  }
  balances_[acct] -= tx.stake;

  NodeRecord rec;
  rec.id           = tx.node;
  rec.host         = tx.host;
  rec.identity_key = tx.identity_key;
  rec.stake        = tx.stake;
  rec.ordinal      = records_.size();
  by_id_.emplace(tx.node, records_.size());
  records_.push_back(rec);
  emit(NodeRegistered{rec.id, rec.ordinal, rec.stake});

  if (++since_dkg_ >= params_.dkg_trigger)
  {
    trigger_key_generation();
  }
  return {};
}

Receipt Ledger::apply(DeregisterTx const &tx)
{
  auto it = by_id_.find(tx.node);
  if (it == by_id_.end())
  {
    return {Reject::UnknownNode};
  }
  NodeRecord &rec = records_[it->second];
  if (rec.status != NodeStatus::Active)
  {
    return {Reject::NotActive};
  }
  Amount returned = rec.stake;
  balances_[node_account(rec.id)] += returned;
  rec.stake  = 0;
  rec.status = NodeStatus::Exiting;
  emit(NodeExited{rec.id, false, returned, 0});
  check_validator_floor();
  return {};
}

Receipt Ledger::apply(KickTx const &tx)
{
  if (!is_active(tx.sender))
  {
    return {Reject::NotActive};
  }
  auto it = by_id_.find(tx.target);
  if (it == by_id_.end())
  {
    return {Reject::UnknownNode};
  }
  NodeRecord &target = records_[it->second];
  if (target.status != NodeStatus::Active)
  {
    return {Reject::NotActive};
  }
  std::size_t others = 0, votes = 0;
  for (auto const &r : records_)
  {
    if (r.status == NodeStatus::Active && r.id != tx.target)
    {
      ++others;
      votes += tx.votes.count(r.id);
    }
  }
  if (2 * votes <= others)
  {
    return {Reject::NoMajority};
  }
  Amount burned = target.stake;
  burned_ += burned;
  target.stake  = 0;
  target.status = NodeStatus::Kicked;
  emit(NodeExited{target.id, true, 0, burned});
  check_validator_floor();
  return {};
}

void Ledger::trigger_key_generation()
{
  KeyGenerationInfo info;
  info.session      = next_session_++;
  info.participants = active_nodes();
  info.threshold    = info.participants.size() / 2 + 1;
  info.validator_threshold = std::max(info.threshold, params_.validator_threshold);
  info.height              = height_;
  since_dkg_               = 0;
  key_.generation          = info;
  key_.pending.reset();
  emit(KeyGenerationEvent{info});
}

void Ledger::check_validator_floor()
{
  if (!key_.generation)
  {
    return;
  }
  auto active = active_nodes();
  if (!active.empty() && active.size() < key_.generation->validator_threshold)
  {
    trigger_key_generation();
  }
}

std::optional<NodeRecord> Ledger::node(NodeId id) const
{
  auto it = by_id_.find(id);
  if (it == by_id_.end())
  {
    return std::nullopt;
  }
  return records_[it->second];
}

std::vector<NodeRecord> Ledger::nodes() const
{
  return records_;
}

std::vector<NodeId> Ledger::active_nodes() const
{
  std::vector<NodeId> out;
  for (auto const &r : records_)
  {
    if (r.status == NodeStatus::Active)
    {
      out.push_back(r.id);
    }
  }
  return out;
}

NodeId Ledger::current_aggregator(std::uint64_t height) const
{
  auto active = active_nodes();
  if (active.empty())
  {
    throw Error(ErrorCode::InvalidArgument, "no active node can aggregate");
  }
  return active[(height / params_.rotation_period) % active.size()];
}

// ---- key

Receipt Ledger::apply(SubmitKeyTx const &tx)
{
  if (!is_active(tx.node))
  {
    return {Reject::NotActive};
  }
  if (!key_.generation)
  {
    return {Reject::NoSession};
  }
  auto const &gen = *key_.generation;
  if (tx.session != gen.session)
  {
    return {Reject::StaleSession};
  }
  if (std::find(gen.participants.begin(), gen.participants.end(), tx.node) == gen.participants.end())
  {
    return {Reject::NotParticipant};
  }
  if (key_.pending)
  {
    return {Reject::SubmissionPending};
  }
  if (key_.active_key && key_.active_session == tx.session)
  {
    return {Reject::KeyAlreadyActive};
  }
  if (tx.public_key.is_identity())
  {
    return {Reject::InvalidKey};
  }
  key_.pending = PendingKey{tx.session, tx.public_key, tx.node, {}, height_};
  emit(KeySubmitted{tx.session, tx.node, tx.public_key, height_ + params_.dispute_window});
  return {};
}

Receipt Ledger::apply(DisputeKeyTx const &tx)
{
  if (!key_.pending || key_.pending->session != tx.session)
  {
    bool const settled = key_.active_key && key_.active_session == tx.session;
    return {settled ? Reject::DisputeWindowClosed : Reject::NothingPending};
  }
  PendingKey &p = *key_.pending;
  if (height_ >= p.submitted_at + params_.dispute_window)
  {
    return {Reject::DisputeWindowClosed};
  }
  auto const &participants = key_.generation->participants;
  if (!is_active(tx.node) || std::find(participants.begin(), participants.end(), tx.node) == participants.end())
  {
    return {Reject::NotParticipant};
  }
  if (!p.disputes.insert(tx.node).second)
  {
    return {Reject::AlreadyDisputed};
  }
  emit(KeyDisputed{p.session, tx.node, p.disputes.size()});
  if (2 * p.disputes.size() > participants.size())
  {
    Amount slashed = 0;
    auto   it      = by_id_.find(p.submitter);
    if (it != by_id_.end())
    {
      NodeRecord &sub = records_[it->second];
      slashed         = sub.stake * params_.slash_percent / 100;
      sub.stake -= slashed;
      burned_ += slashed;
    }
    emit(KeyRejected{p.session, p.submitter, slashed});
    key_.pending.reset();
  }
  return {};
}

void Ledger::maybe_activate_key()
{
  if (!key_.pending || height_ < key_.pending->submitted_at + params_.dispute_window)
  {
    return;
  }
  PendingKey p           = *key_.pending;
  key_.active_key        = p.public_key;
  key_.active_session    = p.session;
  key_.threshold         = key_.generation->threshold;
  key_.validator_threshold = key_.generation->validator_threshold;
  key_.pending.reset();
  emit(KeyActivated{p.session, p.public_key, key_.threshold, key_.validator_threshold});
}

// ---- oracle

Receipt Ledger::apply(RequestTx const &tx)
{
  if (tx.fees.tx_compensation < params_.min_tx_compensation ||
      tx.fees.aggregation_reward < params_.min_aggregation_reward ||
      tx.fees.validation_contribution < params_.min_validation_contribution)
  {
    return {Reject::Underpayment};
  }
  if (balance(tx.client) < tx.fees.total())
  {
    return {Reject::InsufficientBalance};
  }
  balances_[tx.client] -= tx.fees.total();
  std::uint64_t id = next_request_++;
  escrow_.emplace(id, tx.fees);
  emit(RequestEvent{id, tx.client, tx.query, tx.fees});
  Receipt r;
  r.request_id = id;
  return r;
}

Receipt Ledger::apply(SubmitResultTx const &tx)
{
  if (!is_active(tx.node))
  {
    return {Reject::NotActive};
  }
  if (current_aggregator(height_) != tx.node)
  {
    return {Reject::WrongAggregator};
  }
  if (!key_.active_key)
  {
    return {Reject::NoActiveKey};
  }
  if (results_.count(tx.request_id) != 0)
  {
    return {Reject::DuplicateResult};
  }
  auto esc = escrow_.find(tx.request_id);
  if (esc == escrow_.end())
  {
    return {Reject::UnknownRequest};
  }
  auto decoded = decode_payload(tx.payload);
  if (!decoded || decoded->first != tx.request_id)
  {
    return {Reject::InvalidPayload};
  }
  if (!bls::verify(tx.signature, tx.payload, *key_.active_key))
  {
    return {Reject::InvalidSignature};
  }

  Fees const fees = esc->second;
  escrow_.erase(esc);
  Account const acct = node_account(tx.node);
  balances_[acct] += fees.tx_compensation + fees.aggregation_reward;
  pot_ += fees.validation_contribution;

  LotteryOutcome lot =
      run_lottery(tx.signature, node(tx.node)->stake, active_stake_total(), pot_, params_.lottery_alpha);
  if (lot.win)
  {
    balances_[acct] += lot.payout;
    pot_ = 0;
  }

  ResultRecord rec;
  rec.request_id  = tx.request_id;
  rec.payload     = tx.payload;
  rec.signature   = tx.signature;
  rec.aggregator  = tx.node;
  rec.height      = height_;
  rec.key_session = key_.active_session;
  rec.lottery     = lot;
  results_.emplace(tx.request_id, rec);
  emit(ResultAvailable{tx.request_id, tx.node, lot.win, lot.payout});
  return {};
}

Receipt Ledger::apply(DkgDealTx const &tx)
{
  if (!is_active(tx.node))
  {
    return {Reject::NotActive};
  }
  if (tx.record.dealer != tx.node)
  {
    return {Reject::NotParticipant};
  }
  emit(DkgDealBroadcast{tx.record});
  return {};
}

Receipt Ledger::apply(DkgComplaintTx const &tx)
{
  if (!is_active(tx.node))
  {
    return {Reject::NotActive};
  }
  if (tx.complaint.complainer != tx.node)
  {
    return {Reject::NotParticipant};
  }
  emit(DkgComplaintBroadcast{tx.complaint});
  return {};
}

std::optional<ResultRecord> Ledger::get_result(std::uint64_t request_id) const
{
  auto it = results_.find(request_id);
  if (it == results_.end())
  {
    return std::nullopt;
  }
  return it->second;
}

bool Ledger::request_open(std::uint64_t request_id) const
{
  return escrow_.count(request_id) != 0;
}

std::vector<std::uint64_t> Ledger::open_requests() const
{
  std::vector<std::uint64_t> out;
  for (auto const &[id, f] : escrow_)
  {
    out.push_back(id);
  }
  return out;
}

// ---- accounting

Amount Ledger::balance(Account const &account) const
{
  auto it = balances_.find(account);
  return it == balances_.end() ? 0 : it->second;
}

Amount Ledger::escrow_total() const
{
  Amount sum = 0;
  for (auto const &[id, f] : escrow_)
  {
    sum += f.total();
  }
  return sum;
}

Amount Ledger::stake_total() const
{
  Amount sum = 0;
  for (auto const &r : records_)
  {
    sum += r.stake;
  }
  return sum;
}

Amount Ledger::active_stake_total() const
{
  Amount sum = 0;
  for (auto const &r : records_)
  {
    if (r.status == NodeStatus::Active)
    {
      sum += r.stake;
    }
  }
  return sum;
}

Amount Ledger::supply() const
{
  Amount sum = 0;
  for (auto const &[a, b] : balances_)
  {
    sum += b;
  }
  return sum + stake_total() + escrow_total() + pot_;
}

std::size_t Ledger::oracle_tx_count(std::uint64_t from_height) const
{
  std::size_t n = 0;
  for (auto const &b : blocks_)
  {
    if (b.height < from_height)
    {
      continue;
    }
    for (auto const &[tx, r] : b.txs)
    {
      n += is_oracle_tx(tx) ? 1 : 0;
    }
  }
  return n;
}

std::string Ledger::transcript_json_lines() const
{
  std::string out;
  for (auto const &b : blocks_)
  {
    json txs = json::array();
    for (auto const &[tx, r] : b.txs)
    {
      json j          = std::visit(TxJson{}, tx);
      j["accepted"]   = r.ok();
      if (!r.ok())
      {
        j["reject"] = to_string(r.reject);
      }
      txs.push_back(std::move(j));
    }
    json evs = json::array();
    for (auto i = b.first_event; i < b.end_event; ++i)
    {
      json j   = std::visit(EventJson{}, events_[i].payload);
      j["seq"] = events_[i].seq;
      evs.push_back(std::move(j));
    }
    json line{{"height", b.height}, {"txs", txs}, {"events", evs}};
    out += line.dump() + "\n";
  }
  return out;
}

}  // namespace ioracle::contracts
