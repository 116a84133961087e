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

#include "ioracle/nodes.hpp"
#include "ioracle/error.hpp"

#include <algorithm>

namespace ioracle::nodes {

namespace {

template <class... Ts>
struct Overloaded : Ts...
{
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

char const *to_string(BehaviorKind k)
{
  switch (k)
  {
  case BehaviorKind::Altruistic:
    return "altruistic";
  case BehaviorKind::Lazy:
    return "lazy";
  case BehaviorKind::Byzantine:
    return "byzantine";
  case BehaviorKind::Offline:
    return "offline";
  case BehaviorKind::RationalWithholder:
    return "rational-withholder";
  }
  return "?";
}

char const *to_string(CorruptionMode m)
{
  switch (m)
  {
  case CorruptionMode::RandomPoint:
    return "random-point";
  case CorruptionMode::WrongPayload:
    return "wrong-payload";
  case CorruptionMode::Withhold:
    return "withhold";
  }
  return "?";
}

BehaviorKind parse_behavior_kind(std::string_view s)
{
  for (auto k : {BehaviorKind::Altruistic, BehaviorKind::Lazy, BehaviorKind::Byzantine, BehaviorKind::Offline,
                 BehaviorKind::RationalWithholder})
  {
    if (s == to_string(k))
    {
      return k;
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown behavior '" + std::string(s) + "'");
}

CorruptionMode parse_corruption_mode(std::string_view s)
{
  for (auto m : {CorruptionMode::RandomPoint, CorruptionMode::WrongPayload, CorruptionMode::Withhold})
  {
    if (s == to_string(m))
    {
      return m;
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown corruption mode '" + std::string(s) + "'");
}

bool BehaviorProfile::online_at(std::uint64_t height) const
{
  if (kind != BehaviorKind::Offline)
  {
    return true;
  }
  return std::none_of(offline.begin(), offline.end(), [&](Interval const &i) { return i.contains(height); });
}

char const *message_type(MessageBody const &body)
{
  return std::visit(Overloaded{[](CollectRequest const &) { return "collect"; },
                               [](ResponseMessage const &) { return "response"; },
                               [](DkgShareMessage const &) { return "dkg_share"; }},
                    body);
}

source::VerificationAnswer forged_answer(source::TxQuery const &query, source::VerificationAnswer const &honest)
{
  source::VerificationAnswer a;
  a.included     = true;
  a.block_number = honest.block_number + 1;
  a.block_hash   = sha256("ioracle/forged/" + query.tx);
  a.confirmed    = true;
  return a;
}

std::optional<Response> validator_respond(BehaviorProfile const &profile, dkg::KeyShare const *key,
                                          std::uint64_t request_id, source::TxQuery const &query,
                                          source::VerificationAnswer const &own_view, Rng &rng)
{
  if (key == nullptr)
  {
    return std::nullopt;
  }
  source::VerificationAnswer answer = own_view;
  bool                       garble = false;
  switch (profile.kind)
  {
  case BehaviorKind::Altruistic:
  case BehaviorKind::Offline:
    break;
  case BehaviorKind::Lazy:
    answer = profile.lazy_answer;
    break;
  case BehaviorKind::RationalWithholder:
    return std::nullopt;
  case BehaviorKind::Byzantine:
    switch (profile.corruption)
    {
    case CorruptionMode::Withhold:
      return std::nullopt;
    case CorruptionMode::WrongPayload:
      answer = forged_answer(query, own_view);
      break;
    case CorruptionMode::RandomPoint:
      garble = true;
      break;
    }
    break;
  }

  Response r;
  r.request_id = request_id;
  r.payload    = contracts::encode_payload(request_id, answer);
  r.share      = tbls::sign_share(*key, r.payload);
  if (garble)
  {
    r.share.point = PointG1::random(rng);
  }
  return r;
}

bool ShareCache::verify(tbls::SignatureShare const &share, std::span<std::uint8_t const> payload, PointG2 const &vk)
{
  Bytes key;
  append_u64_be(key, share.index);
  append(key, share.point.encode());
  append(key, vk.encode());
  append(key, payload);
  auto it = seen_.find(key);
  if (it != seen_.end())
  {
    return it->second;
  }
  ++checks_;
  bool ok = tbls::verify_share(share, payload, vk);
  seen_.emplace(std::move(key), ok);
  return ok;
}

AggregateOutcome aggregate(std::span<Response const> responses, std::uint64_t request_id, std::size_t threshold,
                           std::map<std::uint64_t, PointG2> const &vks, ShareCache &cache)
{
  std::map<Bytes, std::vector<tbls::SignatureShare>> groups;
  std::size_t                                        rejected = 0;
  for (auto const &r : responses)
  {
    auto vk = vks.find(r.share.index);
    if (r.request_id != request_id || vk == vks.end() || !cache.verify(r.share, r.payload, vk->second))
    {
      ++rejected;
      continue;
    }
    auto &g   = groups[r.payload];
    bool  dup = std::any_of(g.begin(), g.end(), [&](auto const &s) { return s.index == r.share.index; });
    if (!dup)
    {
      g.push_back(r.share);
    }
  }

  Bytes const                             *best_payload = nullptr;
  std::vector<tbls::SignatureShare> const *best         = nullptr;
  for (auto const &[payload, shares] : groups)
  {
    if (best == nullptr || shares.size() > best->size())
    {
      best_payload = &payload;
      best         = &shares;
    }
  }
  if (best == nullptr || threshold == 0 || best->size() < threshold)
  {
    return Retry{best == nullptr ? 0 : best->size(), rejected};
  }

  Submission s;
  s.payload   = *best_payload;
  s.signature = tbls::recover(*best, threshold);
  for (auto const &sh : *best)
  {
    s.indices.push_back(sh.index);
  }
  std::sort(s.indices.begin(), s.indices.end());
  s.indices.resize(threshold);
  return s;
}

// ---------------------------------------------------------------- OracleNode

OracleNode::OracleNode(NodeId id, BehaviorProfile profile, bls::IdentityKey identity, Rng rng, NodeOptions options)
  : id_(id)
  , profile_(std::move(profile))
  , identity_(std::move(identity))
  , rng_(std::move(rng))
  , options_(options)
{}

void OracleNode::receive(Message message)
{
  inbox_.push_back(std::move(message));
}

void OracleNode::restart()
{
  cursor_ = 0;
  inbox_.clear();
  generations_.clear();
  transcripts_.clear();
  public_info_.clear();
  dkg_.reset();
  open_.clear();
  collections_.clear();
  cache_ = ShareCache{};
  disputed_.clear();
  ++stats_.restarts;
}

dkg::KeyShare const *OracleNode::active_key(contracts::Ledger const &ledger) const
{
  auto const &ks = ledger.key_state();
  if (!ks.active_key)
  {
    return nullptr;
  }
  auto it = keys_.find(ks.active_session);
  return it == keys_.end() ? nullptr : &it->second;
}

std::set<std::uint64_t> OracleNode::open_requests() const
{
  std::set<std::uint64_t> out;
  for (auto const &[id, q] : open_)
  {
    out.insert(id);
  }
  return out;
}

bool OracleNode::aggregates() const
{
  return !(profile_.kind == BehaviorKind::Byzantine && profile_.corruption == CorruptionMode::Withhold);
}

bool OracleNode::is_aggregator_for(std::uint64_t height, Environment &env) const
{
  try
  {
    return env.ledger().current_aggregator(height) == id_;
  }
  catch (Error const &)
  {
    return false;
  }
}

std::optional<Response> OracleNode::validator_respond(std::uint64_t request_id, source::TxQuery const &query,
                                                      Environment &env)
{
  auto answer = env.query_source(id_, query);
  return nodes::validator_respond(profile_, active_key(env.ledger()), request_id, query, answer, rng_);
}

void OracleNode::step(std::uint64_t height, Environment &env)
{
  while (!inbox_.empty())
  {
    Message m = std::move(inbox_.front());
    inbox_.pop_front();
    std::visit(Overloaded{[&](CollectRequest const &c) { on_collect(m, c, height, env); },
                          [&](ResponseMessage const &r) { on_response(m, r.response, height, env); },
                          [&](DkgShareMessage const &s) {
                            if (dkg_ && s.envelope.dealer == m.from)
                            {
                              dkg_->session.on_share(s.envelope);
                            }
                          }},
               m.body);
  }
  try_submit(height, env);
}

void OracleNode::on_collect(Message const &m, CollectRequest const &req, std::uint64_t height, Environment &env)
{
  // Only the scheduled aggregator gets answers, and only for requests this
  // node has seen on-chain with the same query.
  auto scheduled = [&](std::uint64_t h) {
    try
    {
      return env.ledger().current_aggregator(h) == m.from;
    }
    catch (Error const &)
    {
      return false;
    }
  };
  if (!scheduled(height) && !scheduled(height + 1))
  {
    return;
  }
  auto it = open_.find(req.request_id);
  if (it == open_.end() || !(it->second == req.query))
  {
    return;
  }
  if (auto r = validator_respond(req.request_id, req.query, env))
  {
    env.send(id_, m.from, ResponseMessage{std::move(*r)});
    ++stats_.responses_sent;
  }
}

void OracleNode::on_response(Message const &m, Response const &r, std::uint64_t height, Environment &env)
{
  if (!aggregates() || !(is_aggregator_for(height, env) || is_aggregator_for(height + 1, env)))
  {
    return;
  }
  if (open_.count(r.request_id) == 0)
  {
    return;
  }
  auto const *info = active_public_info(env.ledger());
  if (info == nullptr)
  {
    return;
  }
  auto idx = info->index.find(m.from);
  if (idx == info->index.end() || idx->second != r.share.index)
  {
    ++stats_.invalid_shares_seen;
    return;
  }
  collections_[r.request_id].responses.insert_or_assign(m.from, r);
}

void OracleNode::try_submit(std::uint64_t height, Environment &env)
{
  if (!aggregates() || !is_aggregator_for(height, env) || collections_.empty())
  {
    return;
  }
  auto const *info = active_public_info(env.ledger());
  if (info == nullptr)
  {
    return;
  }
  for (auto &[rid, col] : collections_)
  {
    if (open_.count(rid) == 0 || col.submitted_at == height || col.responses.empty())
    {
      continue;
    }
    std::vector<Response> rs;
    for (auto const &[from, r] : col.responses)
    {
      rs.push_back(r);
    }
    auto outcome = aggregate(rs, rid, info->threshold, info->vks, cache_);
    if (auto *sub = std::get_if<Submission>(&outcome))
    {
      env.submit(id_, contracts::SubmitResultTx{id_, rid, sub->payload, sub->signature});
      col.submitted_at = height;
      ++stats_.submissions;
    }
    else
    {
      auto const &retry = std::get<Retry>(outcome);
      stats_.invalid_shares_seen += retry.rejected_shares;
      ++stats_.retries;
    }
  }
}

OracleNode::PublicKeyInfo const *OracleNode::active_public_info(contracts::Ledger const &ledger)
{
  auto const &ks = ledger.key_state();
  if (!ks.active_key)
  {
    return nullptr;
  }
  auto cached = public_info_.find(ks.active_session);
  if (cached != public_info_.end())
  {
    return &cached->second;
  }
  auto gen = generations_.find(ks.active_session);
  auto tr  = transcripts_.find(ks.active_session);
  if (gen == generations_.end() || tr == transcripts_.end())
  {
    return nullptr;
  }

  // Verification keys follow from the public deal records alone.
  dkg::IdentityDirectory ids;
  for (auto p : gen->second.participants)
  {
    if (auto rec = ledger.node(p))
    {
      ids.emplace(p, rec->identity_key);
    }
  }
  auto                 q = tr->second.qualified(ids);
  std::vector<PointG2> combined(gen->second.threshold);
  for (auto const &rec : tr->second.records())
  {
    if (q.count(rec.dealer) == 0 || rec.commitment.points.size() != combined.size())
    {
      continue;
    }
    for (std::size_t k = 0; k < combined.size(); ++k)
    {
      combined[k] = combined[k] + rec.commitment.points[k];
    }
  }
  sharing::FeldmanCommitment com{combined};

  PublicKeyInfo info;
  info.threshold = ks.threshold;
  for (std::size_t i = 0; i < gen->second.participants.size(); ++i)
  {
    std::uint64_t index = i + 1;
    info.index.emplace(gen->second.participants[i], index);
    info.vks.emplace(index, com.evaluate(index));
  }
  return &public_info_.emplace(ks.active_session, std::move(info)).first->second;
}

void OracleNode::on_block(std::uint64_t height, Environment &env)
{
  replay(env);
  run_dkg(height, env);
  run_key_submission(height, env);
  run_collection(height, env);
}

void OracleNode::replay(Environment &env)
{
  auto const &events = env.ledger().events();
  for (; cursor_ < events.size(); ++cursor_)
  {
    handle_event(events[cursor_], env);
  }
}

void OracleNode::handle_event(contracts::Event const &ev, Environment &env)
{
  auto const &ledger = env.ledger();
  std::visit(
      Overloaded{
          [&](contracts::KeyGenerationEvent const &e) {
            auto const   &info = e.info;
            dkg::DkgConfig config{info.participants, info.threshold, info.session};
            generations_.insert_or_assign(info.session, info);
            transcripts_.insert_or_assign(info.session, dkg::Transcript(config));
            if (!config.index_of(id_))
            {
              dkg_.reset();
              return;
            }
            dkg::IdentityDirectory ids;
            for (auto p : info.participants)
            {
              if (auto rec = ledger.node(p))
              {
                ids.emplace(p, rec->identity_key);
              }
            }
            dkg_.reset();
            dkg_.emplace(DkgRun{info, dkg::Session(config, id_, identity_, std::move(ids)),
                                info.height + options_.dkg_wait, false});
          },
          [&](contracts::DkgDealBroadcast const &e) {
            auto tr = transcripts_.find(e.record.session);
            if (tr == transcripts_.end())
            {
              return;
            }
            try
            {
              tr->second.add_deal(e.record);
              if (dkg_ && dkg_->info.session == e.record.session)
              {
                dkg_->session.on_record(e.record);
              }
            }
            catch (Error const &)
            {
              // duplicate or foreign dealer: the first record stands
            }
          },
          [&](contracts::DkgComplaintBroadcast const &e) {
            auto tr = transcripts_.find(e.complaint.session);
            if (tr == transcripts_.end())
            {
              return;
            }
            tr->second.add_complaint(e.complaint);
            if (dkg_ && dkg_->info.session == e.complaint.session)
            {
              dkg_->session.on_complaint(e.complaint);
            }
          },
          [&](contracts::RequestEvent const &e) { open_.insert_or_assign(e.request_id, e.query); },
          [&](contracts::ResultAvailable const &e) {
            open_.erase(e.request_id);
            collections_.erase(e.request_id);
          },
          [](auto const &) {}},
      ev.payload);
}

void OracleNode::run_dkg(std::uint64_t height, Environment &env)
{
  if (!dkg_)
  {
    return;
  }
  auto &d = *dkg_;
  if (height == d.start && !d.session.has_dealt())
  {
    dkg::Deal deal = d.session.make_deal(rng_);
    if (profile_.corrupt_dkg_share)
    {
      for (auto p : d.info.participants)
      {
        if (p == id_)
        {
          continue;
        }
        auto &env_p = deal.shares.at(p);
        env_p.share.value += Scalar::one();
        env_p.signature = identity_.sign(env_p.signed_message());
        break;
      }
    }
    env.submit(id_, contracts::DkgDealTx{id_, deal.record});
    for (auto const &[recipient, envelope] : deal.shares)
    {
      if (recipient == id_)
      {
        d.session.on_share(envelope);
      }
      else
      {
        env.send(id_, recipient, DkgShareMessage{envelope});
      }
    }
  }
  else if (height == d.start + 1)
  {
    for (auto &c : d.session.collect_complaints())
    {
      env.submit(id_, contracts::DkgComplaintTx{id_, std::move(c)});
      ++stats_.dkg_complaints;
    }
  }
  else if (height == d.start + 2 && keys_.count(d.info.session) == 0 && !d.failed)
  {
    try
    {
      keys_.insert_or_assign(d.info.session, d.session.finish(d.info.validator_threshold));
    }
    catch (Error const &)
    {
      d.failed = true;
      ++stats_.dkg_failures;
    }
  }
}

void OracleNode::run_key_submission(std::uint64_t height, Environment &env)
{
  auto const &ks = env.ledger().key_state();
  if (!ks.generation)
  {
    return;
  }
  std::uint64_t const s   = ks.generation->session;
  auto                key = keys_.find(s);
  if (key == keys_.end() || (ks.active_key && ks.active_session == s))
  {
    return;
  }
  if (ks.pending && ks.pending->session == s)
  {
    if (ks.pending->public_key != key->second.public_key && ks.pending->submitter != id_ &&
        disputed_.insert(s).second)
    {
      env.submit(id_, contracts::DisputeKeyTx{id_, s});
      ++stats_.key_disputes;
    }
    return;
  }

  // One qualified node per block, in registration order, until a key is
  // pending; an absent or rejected submitter is simply skipped over.
  std::uint64_t const first = ks.generation->height + options_.dkg_wait + 2;
  if (height < first)
  {
    return;
  }
  std::vector<NodeId> order;
  for (auto p : ks.generation->participants)
  {
    if (key->second.qualified.count(p) != 0)
    {
      order.push_back(p);
    }
  }
  if (order.empty() || order[(height - first) % order.size()] != id_)
  {
    return;
  }
  PointG2 pk = key->second.public_key;
  if (profile_.forge_public_key)
  {
    pk = PointG2::generator() * Scalar::random(rng_);
  }
  env.submit(id_, contracts::SubmitKeyTx{id_, s, pk});
  ++stats_.key_submissions;
}

void OracleNode::run_collection(std::uint64_t height, Environment &env)
{
  if (!aggregates())
  {
    return;
  }
  bool const next  = is_aggregator_for(height + 1, env);
  bool const after = is_aggregator_for(height + 2, env);
  if (!next && !after)
  {
    collections_.clear();
    return;
  }
  // Responses asked for now arrive two ticks later; only ask when this node
  // will still be the aggregator then.
  if (!after || open_.empty())
  {
    return;
  }
  auto const &ks  = env.ledger().key_state();
  auto        gen = generations_.find(ks.active_session);
  if (!ks.active_key || gen == generations_.end())
  {
    return;
  }
  for (auto const &[rid, query] : open_)
  {
    collections_[rid];
    for (auto p : gen->second.participants)
    {
      auto rec = env.ledger().node(p);
      if (rec && rec->status == contracts::NodeStatus::Active)
      {
        env.send(id_, p, CollectRequest{rid, query});
        ++stats_.collect_requests_sent;
      }
    }
  }
}

}  // namespace ioracle::nodes
