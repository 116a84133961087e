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

#include "ioracle/sourcechain.hpp"
#include "ioracle/error.hpp"

namespace ioracle::source {

SourceChain::SourceChain()
{
  SourceBlock genesis;
  genesis.hash = sha256(std::string_view("ioracle/source/genesis"));
  blocks_.push_back(genesis);
  heads_[kCanonical] = 0;
}

Digest SourceChain::block_hash(Digest const &parent, std::uint64_t number, std::set<std::string> const &txs,
                               BranchId branch) const
{
  // The branch id keeps two empty siblings from sharing a hash.
  Bytes m(parent.begin(), parent.end());
  append_u64_be(m, number);
  append_u64_be(m, branch);
  for (auto const &tx : txs)
  {
    append_u64_be(m, tx.size());
    append(m, to_bytes(tx));
  }
  return sha256(m);
}

std::size_t SourceChain::add_block(std::size_t parent_id, std::set<std::string> txs, BranchId branch)
{
  if (parent_id >= blocks_.size())
  {
    throw Error(ErrorCode::InvalidArgument, "dangling parent block " + std::to_string(parent_id));
  }
  SourceBlock b;
  b.number    = blocks_[parent_id].number + 1;
  b.parent    = blocks_[parent_id].hash;
  b.parent_id = parent_id;
  b.branch    = branch;
  b.hash      = block_hash(b.parent, b.number, txs, branch);
  b.txs       = std::move(txs);
  blocks_.push_back(std::move(b));
  return blocks_.size() - 1;
}

void SourceChain::include(std::string tx)
{
  pending_.push_back(std::move(tx));
}

void SourceChain::advance(std::uint64_t k)
{
  for (std::uint64_t i = 0; i < k; ++i)
  {
    std::set<std::string> txs(pending_.begin(), pending_.end());
    pending_.clear();
    for (auto &[branch, head] : heads_)
    {
      head = add_block(head, txs, branch);
    }
  }
}

BranchId SourceChain::inject_fork(std::uint64_t depth, std::uint64_t length, std::set<NodeId> const &nodes)
{
  std::size_t at = heads_.at(kCanonical);
  for (std::uint64_t i = 0; i < depth; ++i)
  {
    if (!blocks_[at].parent_id)
    {
      throw Error(ErrorCode::InvalidArgument, "fork depth exceeds chain length");
    }
    at = *blocks_[at].parent_id;
  }
  BranchId id = next_branch_++;
  for (std::uint64_t i = 0; i < length; ++i)
  {
    at = add_block(at, {}, id);
  }
  heads_[id] = at;
  for (auto n : nodes)
  {
    views_[n].owner  = n;
    views_[n].branch = id;
  }
  return id;
}

void SourceChain::reorg(BranchId branch)
{
  auto it = heads_.find(branch);
  if (it == heads_.end())
  {
    throw Error(ErrorCode::InvalidArgument, "unknown branch " + std::to_string(branch));
  }
  std::swap(heads_[kCanonical], it->second);
  for (auto &[id, v] : views_)
  {
    if (v.branch == branch)
    {
      v.branch = kCanonical;
    }
    else if (v.branch == kCanonical)
    {
      v.branch = branch;
    }
  }
}

void SourceChain::heal()
{
  for (auto it = heads_.begin(); it != heads_.end();)
  {
    it = it->first == kCanonical ? std::next(it) : heads_.erase(it);
  }
  views_.clear();
}

void SourceChain::set_lag(NodeId node, std::uint64_t lag)
{
  views_[node].owner = node;
  views_[node].lag   = lag;
}

SourceView SourceChain::view_of(NodeId node) const
{
  auto it = views_.find(node);
  if (it == views_.end())
  {
    return SourceView{node, kCanonical, 0};
  }
  return it->second;
}

std::size_t SourceChain::view_head(SourceView const &v) const
{
  auto        it = heads_.find(v.branch);
  std::size_t at = it == heads_.end() ? heads_.at(kCanonical) : it->second;
  for (std::uint64_t i = 0; i < v.lag && blocks_[at].parent_id; ++i)
  {
    at = *blocks_[at].parent_id;
  }
  return at;
}

SourceBlock const &SourceChain::head_of(NodeId viewer) const
{
  return blocks_.at(view_head(view_of(viewer)));
}

VerificationAnswer SourceChain::answer_from(std::size_t head, TxQuery const &q) const
{
  std::uint64_t const top = blocks_[head].number;
  for (std::optional<std::size_t> at = head; at; at = blocks_[*at].parent_id)
  {
    SourceBlock const &b = blocks_[*at];
    if (b.txs.count(q.tx) != 0)
    {
      VerificationAnswer a;
      a.included     = true;
      a.block_number = b.number;
      a.block_hash   = b.hash;
      a.confirmed    = top - b.number >= q.min_confirmations;
      return a;
    }
  }
  return VerificationAnswer{};
}

VerificationAnswer SourceChain::query(NodeId viewer, TxQuery const &q) const
{
  return answer_from(view_head(view_of(viewer)), q);
}

VerificationAnswer SourceChain::query_canonical(TxQuery const &q) const
{
  return answer_from(heads_.at(kCanonical), q);
}

std::optional<std::uint64_t> SourceChain::canonical_confirmations(std::string const &tx) const
{
  TxQuery q;
  q.tx   = tx;
  auto a = query_canonical(q);
  if (!a.included)
  {
    return std::nullopt;
  }
  return head().number - a.block_number;
}

}  // namespace ioracle::source
