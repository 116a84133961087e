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

#include "ioracle/simulator.hpp"
#include "ioracle/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>

namespace ioracle::sim {

namespace {

using ojson = nlohmann::ordered_json;

constexpr std::uint64_t kIdentityStream = 1ULL << 32;
constexpr std::uint64_t kNodeStream     = 2ULL << 32;
constexpr std::uint64_t kRequestStream  = 3ULL << 32;

constexpr char const *kClient = "client";

char const *status_name(contracts::NodeStatus s)
{
  switch (s)
  {
  case contracts::NodeStatus::Active:
    return "active";
  case contracts::NodeStatus::Exiting:
    return "exited";
  case contracts::NodeStatus::Kicked:
    return "kicked";
  }
  return "?";
}

std::string behavior_name(nodes::BehaviorProfile const &b)
{
  std::string s = nodes::to_string(b.kind);
  if (b.kind == nodes::BehaviorKind::Byzantine)
  {
    s += std::string("/") + nodes::to_string(b.corruption);
  }
  return s;
}

ojson answer_json(source::VerificationAnswer const &a)
{
  return ojson{{"included", a.included},
               {"block_number", a.block_number},
               {"block_hash", to_hex(a.block_hash)},
               {"confirmed", a.confirmed}};
}

template <typename T>
ojson opt_json(std::optional<T> const &v)
{
  return v ? ojson(*v) : ojson(nullptr);
}

}  // namespace

std::size_t Metrics::fulfilled() const
{
  return static_cast<std::size_t>(
      std::count_if(requests.begin(), requests.end(), [](auto const &r) { return r.fulfilled_at.has_value(); }));
}

std::string RunResult::transcript() const
{
  return ledger_transcript + message_log + dkg_transcript;
}

struct Simulation::Impl final : nodes::Environment
{
  struct Issued
  {
    std::uint64_t   request_id{0};
    std::uint64_t   at{0};
    source::TxQuery query;
  };

  Scenario                                        sc;
  contracts::Ledger                               ledger_;
  source::SourceChain                             chain_;
  std::vector<std::unique_ptr<nodes::OracleNode>> nodes_;
  std::map<NodeId, std::size_t>                   position_;
  std::uint64_t                                   h{0};

  std::vector<nodes::Message>              outbox;
  std::map<NodeId, std::uint64_t>          next_seq;
  std::vector<RequestSpec>                 schedule;
  std::vector<std::uint64_t>               fault_budget;
  std::vector<Issued>                      issued;
  std::map<std::uint64_t, std::set<Bytes>> canonical_payloads;
  std::uint64_t                            sent{0};
  std::uint64_t                            dropped{0};
  std::uint64_t                            dropped_submissions{0};
  std::string                              log;

  explicit Impl(Scenario s)
    : sc(std::move(s))
    , ledger_(sc.contracts)
  {
    sc.validate();
    // Requests pay exactly what one threshold-signed result costs to submit.
    auto const n                      = static_cast<std::uint64_t>(sc.nodes.size());
    auto       params                 = sc.contracts;
    params.min_tx_compensation        = cost::cost(sc.costs, cost::Mechanism::Bls, n);
    params.min_aggregation_reward     = sc.economics.aggregation_reward;
    params.min_validation_contribution = sc.economics.validation_contribution;
    sc.contracts                      = params;
    ledger_                           = contracts::Ledger(params);

    Rng master(sc.seed);
    for (std::size_t i = 0; i < sc.nodes.size(); ++i)
    {
      auto const &spec = sc.nodes[i];
      Rng         id_rng = master.fork(kIdentityStream + spec.id);
      auto        identity = bls::IdentityKey::generate(id_rng);
      nodes_.push_back(std::make_unique<nodes::OracleNode>(spec.id, spec.behavior, identity,
                                                            master.fork(kNodeStream + spec.id),
                                                            nodes::NodeOptions{sc.dkg_wait}));
      position_.emplace(spec.id, i);
      ledger_.fund(contracts::node_account(spec.id), spec.funds);
    }
    ledger_.fund(kClient, sc.economics.client_funds);

    schedule = sc.requests;
    Rng req_rng = master.fork(kRequestStream);
    for (auto const &rr : sc.random_requests)
    {
      std::set<std::uint64_t> heights;
      while (heights.size() < rr.count)
      {
        heights.insert(rr.from + req_rng.uniform(rr.to - rr.from));
      }
      for (auto at : heights)
      {
        schedule.push_back({at, rr.query});
      }
    }
    std::stable_sort(schedule.begin(), schedule.end(), [](auto const &a, auto const &b) { return a.at < b.at; });
    for (auto const &f : sc.faults)
    {
      fault_budget.push_back(f.count);
    }
  }

  // Environment

  contracts::Ledger const &ledger() const override
  {
    return ledger_;
  }

  source::VerificationAnswer query_source(NodeId self, source::TxQuery const &q) const override
  {
    return chain_.query(self, q);
  }

  void send(NodeId from, NodeId to, nodes::MessageBody body) override
  {
    outbox.push_back(nodes::Message{from, to, next_seq[from]++, h, std::move(body)});
    ++sent;
  }

  void submit(NodeId from, contracts::Transaction tx) override
  {
    if (std::holds_alternative<contracts::SubmitResultTx>(tx))
    {
      for (std::size_t i = 0; i < sc.faults.size(); ++i)
      {
        auto const &f = sc.faults[i];
        if (f.kind == FaultSpec::Kind::DropSubmission && f.node == from && h >= f.at && fault_budget[i] > 0)
        {
          --fault_budget[i];
          ++dropped_submissions;
          log += ojson{{"tick", h}, {"type", "submit_result"}, {"from", from}, {"status", "dropped-fault"}}.dump() +
                 "\n";
          return;
        }
      }
    }
    ledger_.submit(std::move(tx));
  }

  // Scheduler

  bool message_faulted(nodes::Message const &m) const
  {
    for (auto const &f : sc.faults)
    {
      if (f.kind == FaultSpec::Kind::DropMessages && h >= f.at && h < f.until && (!f.from || *f.from == m.from) &&
          (!f.to || *f.to == m.to))
      {
        return true;
      }
    }
    return false;
  }

  void apply_source_script()
  {
    for (auto const &a : sc.source_script)
    {
      if (a.at != h)
      {
        continue;
      }
      switch (a.kind)
      {
      case SourceAction::Kind::Include:
        chain_.include(a.tx);
        break;
      case SourceAction::Kind::Fork:
        chain_.inject_fork(a.depth, a.length, a.nodes);
        break;
      case SourceAction::Kind::Heal:
        chain_.heal();
        break;
      case SourceAction::Kind::Lag:
        chain_.set_lag(a.node, a.lag);
        break;
      case SourceAction::Kind::Reorg:
        chain_.reorg(a.branch);
        break;
      }
    }
    chain_.advance(1);
  }

  void record_canonical()
  {
    for (auto const &is : issued)
    {
      if (ledger_.request_open(is.request_id))
      {
        canonical_payloads[is.request_id].insert(
            contracts::encode_payload(is.request_id, chain_.query_canonical(is.query)));
      }
    }
  }

  void deliver()
  {
    auto batch = std::move(outbox);
    outbox.clear();
    std::stable_sort(batch.begin(), batch.end(), [&](auto const &a, auto const &b) {
      auto pa = position_.at(a.from), pb = position_.at(b.from);
      return pa != pb ? pa < pb : a.seq < b.seq;
    });
    for (auto &m : batch)
    {
      char const *status = "delivered";
      auto        it     = position_.find(m.to);
      if (it == position_.end())
      {
        status = "dropped-unknown";
      }
      else if (!nodes_[it->second]->online_at(h))
      {
        status = "dropped-offline";
      }
      else if (message_faulted(m))
      {
        status = "dropped-fault";
      }
      log += ojson{{"tick", h},
                   {"from", m.from},
                   {"to", m.to},
                   {"seq", m.seq},
                   {"type", nodes::message_type(m.body)},
                   {"status", status}}
                 .dump() +
             "\n";
      if (std::string_view(status) != "delivered")
      {
        ++dropped;
        continue;
      }
      nodes_[it->second]->receive(std::move(m));
    }
  }

  void tick()
  {
    for (auto const &f : sc.faults)
    {
      if (f.kind == FaultSpec::Kind::Restart && f.at == h)
      {
        nodes_[position_.at(f.node)]->restart();
      }
    }
    apply_source_script();
    record_canonical();

    deliver();
    for (auto &n : nodes_)
    {
      if (n->online_at(h))
      {
        n->step(h, *this);
      }
    }

    for (std::size_t i = 0; i < sc.nodes.size(); ++i)
    {
      auto const &spec = sc.nodes[i];
      if (spec.join_at == h)
      {
        ledger_.submit(contracts::RegisterTx{spec.id, contracts::node_account(spec.id),
                                             nodes_[i]->identity_public_key(),
                                             spec.stake.value_or(sc.contracts.min_stake)});
      }
    }
    std::vector<source::TxQuery> requested;
    for (auto const &r : schedule)
    {
      if (r.at == h)
      {
        contracts::Fees fees{sc.contracts.min_tx_compensation, sc.economics.aggregation_reward,
                             sc.economics.validation_contribution};
        ledger_.submit(contracts::RequestTx{kClient, r.query, fees});
        requested.push_back(r.query);
      }
    }

    ledger_.mine();
    for (auto const &[tx, receipt] : ledger_.blocks().back().txs)
    {
      if (auto const *req = std::get_if<contracts::RequestTx>(&tx); req && receipt.ok())
      {
        issued.push_back({receipt.request_id, h, req->query});
        canonical_payloads[receipt.request_id].insert(
            contracts::encode_payload(receipt.request_id, chain_.query_canonical(req->query)));
      }
    }

    for (auto &n : nodes_)
    {
      if (n->online_at(h))
      {
        n->on_block(h, *this);
      }
    }
    ++h;
  }

  std::string dkg_transcript() const
  {
    std::map<std::uint64_t, contracts::KeyGenerationInfo> gens;
    std::map<std::uint64_t, PointG2>                      activated;
    for (auto const &ev : ledger_.events())
    {
      if (auto const *g = std::get_if<contracts::KeyGenerationEvent>(&ev.payload))
      {
        gens.emplace(g->info.session, g->info);
      }
      if (auto const *a = std::get_if<contracts::KeyActivated>(&ev.payload))
      {
        activated.emplace(a->session, a->public_key);
      }
    }
    std::string out;
    for (auto const &[session, info] : gens)
    {
      dkg::Transcript tr(dkg::DkgConfig{info.participants, info.threshold, session});
      for (auto const &ev : ledger_.events())
      {
        if (auto const *d = std::get_if<contracts::DkgDealBroadcast>(&ev.payload))
        {
          if (d->record.session == session)
          {
            try
            {
              tr.add_deal(d->record);
            }
            catch (Error const &)
            {
            }
          }
        }
        if (auto const *c = std::get_if<contracts::DkgComplaintBroadcast>(&ev.payload))
        {
          tr.add_complaint(c->complaint);
        }
      }
      dkg::IdentityDirectory ids;
      for (auto p : info.participants)
      {
        if (auto rec = ledger_.node(p))
        {
          ids.emplace(p, rec->identity_key);
        }
      }
      auto key = activated.find(session);
      out += tr.dump_json_lines(key == activated.end() ? std::nullopt : std::optional<PointG2>(key->second),
                                tr.qualified(ids));
    }
    return out;
  }

  Metrics metrics() const
  {
    Metrics m;
    m.scenario = sc.name;
    m.seed     = sc.seed;
    m.blocks   = h;

    for (auto const &is : issued)
    {
      RequestMetrics r;
      r.request_id   = is.request_id;
      r.query        = is.query;
      r.requested_at = is.at;
      if (auto rec = ledger_.get_result(is.request_id))
      {
        r.fulfilled_at = rec->height;
        r.latency      = rec->height - is.at;
        r.aggregator   = rec->aggregator;
        if (auto decoded = contracts::decode_payload(rec->payload))
        {
          r.answer = decoded->second;
        }
        auto const &seen = canonical_payloads.at(is.request_id);
        r.canonical      = seen.count(rec->payload) != 0;
        r.lottery_win    = rec->lottery.win;
      }
      m.requests.push_back(std::move(r));
    }

    std::map<NodeId, NodeMetrics> per_node;
    for (std::size_t i = 0; i < sc.nodes.size(); ++i)
    {
      auto const &spec = sc.nodes[i];
      NodeMetrics nm;
      nm.id       = spec.id;
      nm.behavior = behavior_name(spec.behavior);
      nm.balance  = ledger_.balance(contracts::node_account(spec.id));
      if (auto rec = ledger_.node(spec.id))
      {
        nm.stake  = rec->status == contracts::NodeStatus::Active ? rec->stake : 0;
        nm.status = status_name(rec->status);
      }
      else
      {
        nm.status = "unregistered";
      }
      nm.key_share = nodes_[i]->active_key(ledger_) != nullptr;
      nm.stats     = nodes_[i]->stats();
      per_node.emplace(spec.id, std::move(nm));
    }

    for (auto const &block : ledger_.blocks())
    {
      for (auto const &[tx, receipt] : block.txs)
      {
        auto const *sub = std::get_if<contracts::SubmitResultTx>(&tx);
        if (sub == nullptr)
        {
          continue;
        }
        if (receipt.ok())
        {
          ++m.submissions_accepted;
          auto rec = ledger_.get_result(sub->request_id);
          auto it  = per_node.find(sub->node);
          if (rec && it != per_node.end())
          {
            it->second.results += 1;
            for (auto const &ev : ledger_.events())
            {
              if (auto const *req = std::get_if<contracts::RequestEvent>(&ev.payload);
                  req && req->request_id == sub->request_id)
              {
                it->second.rewards += req->fees.tx_compensation + req->fees.aggregation_reward;
              }
            }
            if (rec->lottery.win)
            {
              it->second.lottery_wins += 1;
              it->second.lottery_payout += rec->lottery.payout;
            }
          }
        }
        else
        {
          ++m.submissions_rejected;
          ++m.rejects[contracts::to_string(receipt.reject)];
        }
      }
    }
    for (auto &[id, nm] : per_node)
    {
      m.nodes.push_back(std::move(nm));
    }
    std::stable_sort(m.nodes.begin(), m.nodes.end(),
                     [&](auto const &a, auto const &b) { return position_.at(a.id) < position_.at(b.id); });
    m.submissions_dropped = dropped_submissions;

    for (auto const &ev : ledger_.events())
    {
      if (std::holds_alternative<contracts::KeyGenerationEvent>(ev.payload))
      {
        ++m.dkg_sessions;
      }
      else if (std::holds_alternative<contracts::KeyActivated>(ev.payload))
      {
        ++m.keys_activated;
        if (!m.key_active_at)
        {
          m.key_active_at = ev.height;
        }
      }
      else if (std::holds_alternative<contracts::KeyRejected>(ev.payload))
      {
        ++m.keys_rejected;
      }
    }
    m.oracle_txs = ledger_.oracle_tx_count(0);
    if (m.key_active_at)
    {
      m.oracle_txs_after_key = ledger_.oracle_tx_count(*m.key_active_at);
    }
    m.messages_sent    = sent;
    m.messages_dropped = dropped;
    m.pot              = ledger_.pot();
    m.burned           = ledger_.burned();
    m.minted           = ledger_.minted();
    m.conservation     = ledger_.supply() == ledger_.minted() - ledger_.burned();

    auto const n           = static_cast<std::uint64_t>(sc.nodes.size());
    m.costs.results        = m.submissions_accepted;
    m.costs.nodes          = n;
    auto const results     = static_cast<cost::Gas>(m.submissions_accepted);
    m.costs.bls            = results * cost::cost(sc.costs, cost::Mechanism::Bls, n);
    m.costs.onchain        = results * cost::cost(sc.costs, cost::Mechanism::OnChain, n);
    m.costs.ecdsa          = results * cost::cost(sc.costs, cost::Mechanism::Ecdsa, n);
    m.costs.relay_window   = h == 0 ? 0 : cost::cost(sc.costs, cost::Mechanism::Relay, h);
    return m;
  }

  RunResult result() const
  {
    RunResult r;
    r.ledger_transcript            = ledger_.transcript_json_lines();
    r.message_log                  = log;
    r.dkg_transcript               = dkg_transcript();
    r.metrics                      = metrics();
    r.metrics.transcript_sha256    = to_hex(sha256(r.transcript()));
    return r;
  }
};

Simulation::Simulation(Scenario scenario)
  : impl_(std::make_unique<Impl>(std::move(scenario)))
{}

Simulation::~Simulation() = default;

void Simulation::tick()
{
  if (done())
  {
    throw Error(ErrorCode::InvalidArgument, "simulation already ran all blocks");
  }
  impl_->tick();
}

RunResult Simulation::run()
{
  while (!done())
  {
    impl_->tick();
  }
  return impl_->result();
}

void Simulation::inject(nodes::Message m)
{
  if (impl_->position_.count(m.from) == 0)
  {
    throw Error(ErrorCode::InvalidArgument, "unknown sender " + std::to_string(m.from));
  }
  m.seq     = impl_->next_seq[m.from]++;
  m.sent_at = impl_->h;
  impl_->outbox.push_back(std::move(m));
  ++impl_->sent;
}

std::uint64_t Simulation::height() const
{
  return impl_->h;
}

bool Simulation::done() const
{
  return impl_->h >= impl_->sc.blocks;
}

Scenario const &Simulation::scenario() const
{
  return impl_->sc;
}

contracts::Ledger const &Simulation::ledger() const
{
  return impl_->ledger_;
}

source::SourceChain const &Simulation::chain() const
{
  return impl_->chain_;
}

nodes::OracleNode const &Simulation::node(NodeId id) const
{
  auto it = impl_->position_.find(id);
  if (it == impl_->position_.end())
  {
    throw Error(ErrorCode::InvalidArgument, "unknown node " + std::to_string(id));
  }
  return *impl_->nodes_[it->second];
}

Metrics Simulation::metrics() const
{
  return impl_->metrics();
}

RunResult Simulation::result() const
{
  return impl_->result();
}

RunResult run(Scenario const &scenario)
{
  Simulation s(scenario);
  return s.run();
}

// ---------------------------------------------------------------- reports

std::string report_json(Metrics const &m)
{
  ojson requests = ojson::array();
  std::uint64_t max_latency = 0;
  std::size_t   wrong       = 0;
  for (auto const &r : m.requests)
  {
    requests.push_back(ojson{{"id", r.request_id},
                             {"tx", r.query.tx},
                             {"min_confirmations", r.query.min_confirmations},
                             {"requested_at", r.requested_at},
                             {"fulfilled_at", opt_json(r.fulfilled_at)},
                             {"latency", opt_json(r.latency)},
                             {"aggregator", opt_json(r.aggregator)},
                             {"answer", r.answer ? answer_json(*r.answer) : ojson(nullptr)},
                             {"canonical", opt_json(r.canonical)},
                             {"lottery_win", r.lottery_win}});
    max_latency = std::max(max_latency, r.latency.value_or(0));
    wrong += r.canonical && !*r.canonical ? 1 : 0;
  }
  ojson rejects = ojson::object();
  for (auto const &[k, v] : m.rejects)
  {
    rejects[k] = v;
  }
  ojson nodes = ojson::array();
  for (auto const &n : m.nodes)
  {
    nodes.push_back(ojson{{"id", n.id},
                          {"behavior", n.behavior},
                          {"status", n.status},
                          {"balance", n.balance},
                          {"stake", n.stake},
                          {"rewards", n.rewards},
                          {"results", n.results},
                          {"lottery_wins", n.lottery_wins},
                          {"lottery_payout", n.lottery_payout},
                          {"key_share", n.key_share},
                          {"responses_sent", n.stats.responses_sent},
                          {"submissions", n.stats.submissions},
                          {"retries", n.stats.retries}});
  }
  ojson out{{"scenario", m.scenario},
            {"seed", m.seed},
            {"blocks", m.blocks},
            {"summary",
             {{"requests", m.requests.size()},
              {"fulfilled", m.fulfilled()},
              {"max_latency", max_latency},
              {"wrong_results", wrong}}},
            {"requests", requests},
            {"submissions",
             {{"accepted", m.submissions_accepted},
              {"rejected", m.submissions_rejected},
              {"dropped", m.submissions_dropped},
              {"rejects", rejects}}},
            {"dkg",
             {{"sessions", m.dkg_sessions},
              {"keys_activated", m.keys_activated},
              {"keys_rejected", m.keys_rejected},
              {"key_active_at", opt_json(m.key_active_at)}}},
            {"oracle_txs", {{"total", m.oracle_txs}, {"after_key", opt_json(m.oracle_txs_after_key)}}},
            {"messages", {{"sent", m.messages_sent}, {"dropped", m.messages_dropped}}},
            {"economics",
             {{"pot", m.pot}, {"burned", m.burned}, {"minted", m.minted}, {"conservation", m.conservation}}},
            {"nodes", nodes},
            {"costs",
             {{"nodes", m.costs.nodes},
              {"results", m.costs.results},
              {"bls", m.costs.bls},
              {"on_chain", m.costs.onchain},
              {"ecdsa", m.costs.ecdsa},
              {"relay_window", m.costs.relay_window}}},
            {"transcript_sha256", m.transcript_sha256}};
  return out.dump(2) + "\n";
}

std::string report_table(Metrics const &m)
{
  std::string out;
  char        line[256];
  auto        put = [&](char const *fmt, auto... args) {
    std::snprintf(line, sizeof line, fmt, args...);
    out += line;
  };
  auto num = [](std::optional<std::uint64_t> const &v) { return v ? std::to_string(*v) : std::string("-"); };

  put("scenario %s  seed %llu  blocks %llu\n", m.scenario.c_str(), static_cast<unsigned long long>(m.seed),
      static_cast<unsigned long long>(m.blocks));
  put("requests %zu  fulfilled %zu\n\n", m.requests.size(), m.fulfilled());
  put("%6s %-12s %10s %10s %8s %11s %10s\n", "id", "tx", "requested", "fulfilled", "latency", "aggregator",
      "canonical");
  for (auto const &r : m.requests)
  {
    std::string agg   = r.aggregator ? std::to_string(*r.aggregator) : "-";
    std::string canon = r.canonical ? (*r.canonical ? "yes" : "NO") : "-";
    put("%6llu %-12s %10llu %10s %8s %11s %10s\n", static_cast<unsigned long long>(r.request_id), r.query.tx.c_str(),
        static_cast<unsigned long long>(r.requested_at), num(r.fulfilled_at).c_str(), num(r.latency).c_str(),
        agg.c_str(), canon.c_str());
  }
  put("\n%6s %-26s %-8s %10s %6s %8s %7s %5s %8s\n", "node", "behavior", "status", "balance", "stake", "rewards",
      "results", "wins", "payout");
  for (auto const &n : m.nodes)
  {
    put("%6llu %-26s %-8s %10lld %6lld %8lld %7llu %5llu %8lld\n", static_cast<unsigned long long>(n.id),
        n.behavior.c_str(), n.status.c_str(), static_cast<long long>(n.balance), static_cast<long long>(n.stake),
        static_cast<long long>(n.rewards), static_cast<unsigned long long>(n.results),
        static_cast<unsigned long long>(n.lottery_wins), static_cast<long long>(n.lottery_payout));
  }
  put("\nsubmissions accepted %llu  rejected %llu  dropped %llu\n",
      static_cast<unsigned long long>(m.submissions_accepted), static_cast<unsigned long long>(m.submissions_rejected),
      static_cast<unsigned long long>(m.submissions_dropped));
  for (auto const &[k, v] : m.rejects)
  {
    put("  %-22s %llu\n", k.c_str(), static_cast<unsigned long long>(v));
  }
  put("dkg sessions %llu  keys activated %llu  rejected %llu  key active at %s\n",
      static_cast<unsigned long long>(m.dkg_sessions), static_cast<unsigned long long>(m.keys_activated),
      static_cast<unsigned long long>(m.keys_rejected), num(m.key_active_at).c_str());
  put("oracle txs %llu  after key %s\n", static_cast<unsigned long long>(m.oracle_txs),
      num(m.oracle_txs_after_key).c_str());
  put("messages sent %llu  dropped %llu\n", static_cast<unsigned long long>(m.messages_sent),
      static_cast<unsigned long long>(m.messages_dropped));
  put("pot %lld  burned %lld  minted %lld  conservation %s\n", static_cast<long long>(m.pot),
      static_cast<long long>(m.burned), static_cast<long long>(m.minted), m.conservation ? "ok" : "BROKEN");
  put("gas for %llu results with %llu nodes: bls %lld  on-chain %lld  ecdsa %lld  relay(%llu headers) %lld\n",
      static_cast<unsigned long long>(m.costs.results), static_cast<unsigned long long>(m.costs.nodes),
      static_cast<long long>(m.costs.bls), static_cast<long long>(m.costs.onchain),
      static_cast<long long>(m.costs.ecdsa), static_cast<unsigned long long>(m.blocks),
      static_cast<long long>(m.costs.relay_window));
  put("transcript %s\n", m.transcript_sha256.c_str());
  return out;
}

std::string report_csv(Metrics const &m)
{
  std::string out = "id,tx,requested_at,fulfilled_at,latency,aggregator,canonical\n";
  for (auto const &r : m.requests)
  {
    out += std::to_string(r.request_id) + "," + r.query.tx + "," + std::to_string(r.requested_at) + "," +
           (r.fulfilled_at ? std::to_string(*r.fulfilled_at) : "") + "," +
           (r.latency ? std::to_string(*r.latency) : "") + "," +
           (r.aggregator ? std::to_string(*r.aggregator) : "") + "," +
           (r.canonical ? (*r.canonical ? "true" : "false") : "") + "\n";
  }
  return out;
}

}  // namespace ioracle::sim
