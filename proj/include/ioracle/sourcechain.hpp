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

// A toy source blockchain: a tree of synthetic blocks with a canonical branch,
// optional side branches, and per-node views that may lag or sit on a branch.
// Oracle validators answer inclusion queries against their own view.

#include "ioracle/bytes.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ioracle::source {

using NodeId   = std::uint64_t;
using BranchId = std::uint32_t;

constexpr BranchId kCanonical = 0;

struct SourceBlock
{
  std::uint64_t         number{0};
  Digest                hash{};
  Digest                parent{};
  std::set<std::string> txs;
  BranchId              branch{kCanonical};
  std::optional<std::size_t> parent_id;  // index into the block store
};

/// "In which block is `tx` included, and is it confirmed by at least
/// `min_confirmations` blocks?"
struct TxQuery
{
  std::string   chain{"B"};
  std::string   tx;
  std::uint64_t min_confirmations{0};

  bool operator==(TxQuery const &) const = default;
};

struct VerificationAnswer
{
  bool          included{false};
  std::uint64_t block_number{0};
  Digest        block_hash{};
  bool          confirmed{false};

  bool operator==(VerificationAnswer const &) const = default;
};

struct SourceView
{
  NodeId        owner{0};
  BranchId      branch{kCanonical};
  std::uint64_t lag{0};
};

class SourceChain
{
public:
  SourceChain();

  /// Appends `k` blocks to every live branch head. Transactions queued with
  /// `include` land in the first new block of each branch.
  void advance(std::uint64_t k = 1);
  void include(std::string tx);

  /// Appends a block under an existing block id. Throws Error(InvalidArgument)
  /// for a dangling parent.
  std::size_t add_block(std::size_t parent_id, std::set<std::string> txs, BranchId branch);

  /// Starts a side branch that shares the canonical chain up to `depth` blocks
  /// below the head and then has `length` blocks of its own. The listed nodes
  /// follow that branch until `heal`.
  BranchId inject_fork(std::uint64_t depth, std::uint64_t length, std::set<NodeId> const &nodes);

  /// Makes `branch` the canonical chain (a reorg). Views follow their branch.
  void reorg(BranchId branch);

  /// All views back on the canonical head with no lag; side branches are
  /// abandoned.
  void heal();

  void set_lag(NodeId node, std::uint64_t lag);

  SourceView view_of(NodeId node) const;

  VerificationAnswer query(NodeId viewer, TxQuery const &q) const;
  VerificationAnswer query_canonical(TxQuery const &q) const;

  SourceBlock const &head() const
  {
    return blocks_.at(heads_.at(kCanonical));
  }
  SourceBlock const &head_of(NodeId viewer) const;
  std::size_t        block_count() const
  {
    return blocks_.size();
  }
  SourceBlock const &block(std::size_t id) const
  {
    return blocks_.at(id);
  }

  /// Number of blocks on top of the canonical block containing `tx`, or
  /// nullopt if the canonical chain does not contain it.
  std::optional<std::uint64_t> canonical_confirmations(std::string const &tx) const;

private:
  Digest             block_hash(Digest const &parent, std::uint64_t number, std::set<std::string> const &txs,
                                BranchId branch) const;
  std::size_t        view_head(SourceView const &v) const;
  VerificationAnswer answer_from(std::size_t head, TxQuery const &q) const;

  std::vector<SourceBlock>        blocks_;
  std::map<BranchId, std::size_t> heads_;
  std::map<NodeId, SourceView>    views_;
  std::vector<std::string>        pending_;
  BranchId                        next_branch_{1};
};

}  // namespace ioracle::source
