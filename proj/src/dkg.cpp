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

#include <json.hpp>

#include <algorithm>

namespace ioracle::dkg {

namespace {

constexpr std::string_view kShareTag  = "ioracle/dkg/share";
constexpr std::string_view kRecordTag = "ioracle/dkg/commitment";

Digest commitment_hash(sharing::FeldmanCommitment const &com)
{
  return sha256(com.encode());
}

}  // namespace

void DkgConfig::validate() const
{
  if (participants.empty())
  {
    throw Error(ErrorCode::InvalidArgument, "DKG needs at least one participant");
  }
  std::set<NodeId> unique(participants.begin(), participants.end());
  if (unique.size() != participants.size())
  {
    throw Error(ErrorCode::InvalidArgument, "DKG participant ids must be unique");
  }
  if (threshold == 0 || threshold > participants.size())
  {
    throw Error(ErrorCode::InvalidArgument, "DKG threshold must satisfy 1 <= t <= n");
  }
}

std::optional<std::uint64_t> DkgConfig::index_of(NodeId node) const
{
  auto it = std::find(participants.begin(), participants.end(), node);
  if (it == participants.end())
  {
    return std::nullopt;
  }
  return static_cast<std::uint64_t>(it - participants.begin()) + 1;
}

Bytes ShareEnvelope::signed_message() const
{
  Bytes m = to_bytes(kShareTag);
  append_u64_be(m, session);
  append_u64_be(m, dealer);
  append_u64_be(m, recipient);
  append_u64_be(m, share.index);
  append(m, share.value.to_bytes());
  append(m, commitment_hash);
  return m;
}

Bytes DealRecord::signed_message() const
{
  Bytes m = to_bytes(kRecordTag);
  append_u64_be(m, session);
  append_u64_be(m, dealer);
  append(m, commitment.encode());
  return m;
}

Deal dkg_deal(NodeId node, DkgConfig const &config, bls::IdentityKey const &identity, Rng &rng)
{
  config.validate();
  if (!config.index_of(node))
  {
    throw Error(ErrorCode::NotParticipant, "node " + std::to_string(node) + " is not a DKG participant");
  }
  Scalar secret = Scalar::random(rng);
  auto   poly   = sharing::Polynomial::random(secret, config.threshold, rng);

  Deal deal;
  deal.record.dealer     = node;
  deal.record.session    = config.session;
  deal.record.commitment = sharing::feldman_commit(poly);
  deal.record.signature  = identity.sign(deal.record.signed_message());

  Digest const ch = commitment_hash(deal.record.commitment);
  for (std::size_t k = 0; k < config.participants.size(); ++k)
  {
    ShareEnvelope env;
    env.dealer          = node;
    env.recipient       = config.participants[k];
    env.session         = config.session;
    env.share           = sharing::Share{k + 1, poly.evaluate(k + 1)};
    env.commitment_hash = ch;
    env.signature       = identity.sign(env.signed_message());
    deal.shares.emplace(env.recipient, std::move(env));
  }
  return deal;
}

std::optional<Complaint> process_deal(NodeId receiver, DkgConfig const &config, Deal const &deal)
{
  auto index = config.index_of(receiver);
  if (!index)
  {
    throw Error(ErrorCode::NotParticipant, "node " + std::to_string(receiver) + " is not a DKG participant");
  }
  Complaint c{receiver, deal.record.dealer, config.session, std::nullopt};
  auto      it = deal.shares.find(receiver);
  if (it != deal.shares.end())
  {
    c.evidence = it->second;
  }
  if (deal.record.session != config.session || deal.record.commitment.points.size() != config.threshold)
  {
    return c;
  }
  if (!c.evidence)
  {
    return c;
  }
  ShareEnvelope const &env = *c.evidence;
  if (env.dealer != deal.record.dealer || env.recipient != receiver || env.session != config.session ||
      env.share.index != *index || env.commitment_hash != commitment_hash(deal.record.commitment) ||
      !sharing::feldman_verify(env.share, deal.record.commitment))
  {
    return c;
  }
  return std::nullopt;
}

bool complaint_is_valid(Complaint const &complaint, DkgConfig const &config, DealRecord const &record,
                        IdentityDirectory const &identities)
{
  auto index = config.index_of(complaint.complainer);
  if (!index || complaint.dealer != record.dealer || complaint.session != config.session ||
      record.session != config.session)
  {
    return false;
  }
  // A malformed commitment is publicly visible; no evidence needed.
  if (record.commitment.points.size() != config.threshold)
  {
    return true;
  }
  if (!complaint.evidence)
  {
    return false;
  }
  ShareEnvelope const &env = *complaint.evidence;
  if (env.dealer != record.dealer || env.recipient != complaint.complainer || env.session != config.session ||
      env.share.index != *index)
  {
    return false;
  }
  auto key = identities.find(record.dealer);
  if (key == identities.end() || !bls::verify(env.signature, env.signed_message(), key->second))
  {
    return false;
  }
  if (env.commitment_hash != commitment_hash(record.commitment))
  {
    return true;
  }
  return !sharing::feldman_verify(env.share, record.commitment);
}

std::set<NodeId> qualified_set(DkgConfig const &config, std::span<DealRecord const> records,
                               std::span<Complaint const> complaints, IdentityDirectory const &identities)
{
  std::vector<DealRecord const *> ordered;
  for (auto const &r : records)
  {
    ordered.push_back(&r);
  }
  std::sort(ordered.begin(), ordered.end(),
            [](DealRecord const *a, DealRecord const *b) { return a->dealer < b->dealer; });

  std::set<NodeId> q;
  for (auto const *r : ordered)
  {
    if (!config.index_of(r->dealer) || r->session != config.session || q.count(r->dealer) != 0)
    {
      continue;
    }
    auto key = identities.find(r->dealer);
    if (key == identities.end() || !bls::verify(r->signature, r->signed_message(), key->second))
    {
      continue;
    }
    bool excluded = std::any_of(complaints.begin(), complaints.end(), [&](Complaint const &c) {
      return c.dealer == r->dealer && complaint_is_valid(c, config, *r, identities);
    });
    if (!excluded)
    {
      q.insert(r->dealer);
    }
  }
  return q;
}

PointG2 group_public_key(std::span<DealRecord const> records, std::set<NodeId> const &qualified)
{
  PointG2 pk;
  for (auto const &r : records)
  {
    if (qualified.count(r.dealer) != 0 && !r.commitment.points.empty())
    {
      pk = pk + r.commitment.points.front();
    }
  }
  return pk;
}

KeyShare finalize(NodeId node, DkgConfig const &config, std::span<DealRecord const> records,
                  std::set<NodeId> const &qualified, std::map<NodeId, ShareEnvelope> const &received,
                  std::size_t validator_threshold)
{
  auto index = config.index_of(node);
  if (!index)
  {
    throw Error(ErrorCode::NotParticipant, "node " + std::to_string(node) + " is not a DKG participant");
  }
  if (qualified.size() < validator_threshold || qualified.empty())
  {
    throw Error(ErrorCode::SessionFailed, "qualified set of size " + std::to_string(qualified.size()) +
                                              " is below the validator threshold " +
                                              std::to_string(validator_threshold));
  }

  KeyShare ks;
  ks.index     = *index;
  ks.qualified = qualified;
  ks.session   = config.session;
  ks.threshold = config.threshold;

  // Aggregate commitment C_k = sum_{j in Q} A_{j,k}.
  std::vector<PointG2> aggregate(config.threshold);
  std::set<NodeId>     seen;
  for (auto const &r : records)
  {
    if (qualified.count(r.dealer) == 0 || !seen.insert(r.dealer).second)
    {
      continue;
    }
    if (r.commitment.points.size() != config.threshold)
    {
      throw Error(ErrorCode::InvalidArgument, "qualified dealer has a malformed commitment");
    }
    for (std::size_t k = 0; k < config.threshold; ++k)
    {
      aggregate[k] = aggregate[k] + r.commitment.points[k];
    }
    auto env = received.find(r.dealer);
    if (env == received.end())
    {
      throw Error(ErrorCode::Threshold, "missing share from qualified dealer " + std::to_string(r.dealer));
    }
    ks.secret += env->second.share.value;
  }
  if (seen.size() != qualified.size())
  {
    throw Error(ErrorCode::InvalidArgument, "qualified dealer without a broadcast record");
  }

  sharing::FeldmanCommitment combined{aggregate};
  ks.public_key = aggregate.front();
  for (std::uint64_t i = 1; i <= config.participants.size(); ++i)
  {
    ks.verification_keys.emplace(i, combined.evaluate(i));
  }
  return ks;
}

KeyShare finalize(NodeId node, DkgConfig const &config, std::span<Deal const> deals,
                  std::set<NodeId> const &qualified, std::size_t validator_threshold)
{
  std::vector<DealRecord>         records;
  std::map<NodeId, ShareEnvelope> received;
  for (auto const &d : deals)
  {
    records.push_back(d.record);
    auto it = d.shares.find(node);
    if (it != d.shares.end())
    {
      received.emplace(d.record.dealer, it->second);
    }
  }
  return finalize(node, config, records, qualified, received, validator_threshold);
}

LocalRun run_local(DkgConfig const &config, Rng &rng, std::size_t validator_threshold,
                   std::function<void(Deal &, bls::IdentityKey const &)> const &tamper)
{
  config.validate();
  LocalRun run;
  for (auto id : config.participants)
  {
    auto key = bls::IdentityKey::generate(rng);
    run.identities.emplace(id, key.public_key);
    run.identity_keys.emplace(id, std::move(key));
  }
  for (auto id : config.participants)
  {
    Deal d = dkg_deal(id, config, run.identity_keys.at(id), rng);
    if (tamper)
    {
      tamper(d, run.identity_keys.at(id));
    }
    run.deals.push_back(std::move(d));
  }
  for (auto receiver : config.participants)
  {
    for (auto const &d : run.deals)
    {
      if (auto c = process_deal(receiver, config, d))
      {
        run.complaints.push_back(std::move(*c));
      }
    }
  }
  std::vector<DealRecord> records;
  for (auto const &d : run.deals)
  {
    records.push_back(d.record);
  }
  run.qualified = qualified_set(config, records, run.complaints, run.identities);
  for (auto id : config.participants)
  {
    try
    {
      run.keys.emplace(id, finalize(id, config, run.deals, run.qualified, validator_threshold));
    }
    catch (Error const &e)
    {
      // A node starved of a qualified dealer's share ends without a key.
      if (e.code() != ErrorCode::Threshold)
      {
        throw;
      }
    }
  }
  return run;
}

// ---------------------------------------------------------------- Transcript

Transcript::Transcript(DkgConfig config)
  : config_(std::move(config))
{
  config_.validate();
}

void Transcript::add_deal(DealRecord record)
{
  if (record.session != config_.session)
  {
    throw Error(ErrorCode::InvalidArgument, "deal belongs to session " + std::to_string(record.session));
  }
  if (!config_.index_of(record.dealer))
  {
    throw Error(ErrorCode::NotParticipant, "dealer " + std::to_string(record.dealer) + " is not a participant");
  }
  if (records_.count(record.dealer) != 0)
  {
    throw Error(ErrorCode::DuplicateDealer, "dealer " + std::to_string(record.dealer) + " already dealt");
  }
  records_.emplace(record.dealer, std::move(record));
}

void Transcript::add_complaint(Complaint complaint)
{
  if (complaint.session != config_.session)
  {
    return;
  }
  for (auto const &c : complaints_)
  {
    if (c.complainer == complaint.complainer && c.dealer == complaint.dealer)
    {
      return;
    }
  }
  complaints_.push_back(std::move(complaint));
}

std::vector<DealRecord> Transcript::records() const
{
  std::vector<DealRecord> out;
  out.reserve(records_.size());
  for (auto const &[id, r] : records_)
  {
    out.push_back(r);
  }
  return out;
}

std::set<NodeId> Transcript::qualified(IdentityDirectory const &identities) const
{
  auto recs = records();
  return qualified_set(config_, recs, complaints_, identities);
}

std::string Transcript::dump_json_lines(std::optional<PointG2> const &key, std::set<NodeId> const &qualified) const
{
  using nlohmann::json;
  std::string out;
  for (auto const &[id, r] : records_)
  {
    json j;
    j["type"]    = "deal";
    j["session"] = r.session;
    j["dealer"]  = r.dealer;
    json points  = json::array();
    for (auto const &p : r.commitment.points)
    {
      points.push_back(p.to_hex());
    }
    j["commitment"] = points;
    j["signature"]  = r.signature.point.to_hex();
    out += j.dump() + "\n";
  }
  for (auto const &c : complaints_)
  {
    json j;
    j["type"]       = "complaint";
    j["session"]    = c.session;
    j["complainer"] = c.complainer;
    j["dealer"]     = c.dealer;
    if (c.evidence)
    {
      j["share_index"] = c.evidence->share.index;
      j["share_value"] = c.evidence->share.value.to_hex();
      j["signature"]   = c.evidence->signature.point.to_hex();
    }
    else
    {
      j["share_index"] = nullptr;
    }
    out += j.dump() + "\n";
  }
  if (key)
  {
    json j;
    j["type"]       = "public_key";
    j["session"]    = config_.session;
    j["public_key"] = key->to_hex();
    j["qualified"]  = std::vector<NodeId>(qualified.begin(), qualified.end());
    out += j.dump() + "\n";
  }
  return out;
}

// ---------------------------------------------------------------- Session

Session::Session(DkgConfig config, NodeId self, bls::IdentityKey identity, IdentityDirectory identities)
  : config_(config)
  , self_(self)
  , identity_(std::move(identity))
  , identities_(std::move(identities))
  , transcript_(std::move(config))
{
  if (!config_.index_of(self_))
  {
    throw Error(ErrorCode::NotParticipant, "node " + std::to_string(self_) + " is not a DKG participant");
  }
}

Deal Session::make_deal(Rng &rng)
{
  if (dealt_)
  {
    throw Error(ErrorCode::DuplicateDealer, "node already dealt in this session");
  }
  Deal d = dkg_deal(self_, config_, identity_, rng);
  dealt_ = true;
  return d;
}

void Session::on_record(DealRecord const &record)
{
  transcript_.add_deal(record);
}

void Session::on_share(ShareEnvelope const &envelope)
{
  if (envelope.recipient != self_ || envelope.session != config_.session)
  {
    return;
  }
  received_.insert_or_assign(envelope.dealer, envelope);
}

void Session::on_complaint(Complaint const &complaint)
{
  transcript_.add_complaint(complaint);
}

std::vector<Complaint> Session::collect_complaints()
{
  std::vector<Complaint> out;
  for (auto const &record : transcript_.records())
  {
    if (complained_.count(record.dealer) != 0)
    {
      continue;
    }
    Deal view{record, {}};
    auto it = received_.find(record.dealer);
    if (it != received_.end())
    {
      view.shares.emplace(self_, it->second);
    }
    if (auto c = process_deal(self_, config_, view))
    {
      complained_.insert(record.dealer);
      transcript_.add_complaint(*c);
      out.push_back(std::move(*c));
    }
  }
  return out;
}

std::set<NodeId> Session::qualified() const
{
  return transcript_.qualified(identities_);
}

KeyShare Session::finish(std::size_t validator_threshold) const
{
  auto q    = qualified();
  auto recs = transcript_.records();
  return finalize(self_, config_, recs, q, received_, validator_threshold);
}

}  // namespace ioracle::dkg
