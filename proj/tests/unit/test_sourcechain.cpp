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

#include "ioracle/error.hpp"
#include "ioracle/sourcechain.hpp"

#include <catch_amalgamated.hpp>

using namespace ioracle;
using namespace ioracle::source;

namespace {

TxQuery q(std::string tx, std::uint64_t n)
{
  TxQuery out;
  out.tx                = std::move(tx);
  out.min_confirmations = n;
  return out;
}

}  // namespace

TEST_CASE("confirmation boundary", "[sourcechain]")
{
  SourceChain c;
  c.include("tx1");
  c.advance(1);  // tx1 in block 1
  auto a = c.query_canonical(q("tx1", 3));
  CHECK(a.included);
  CHECK(a.block_number == 1);
  CHECK_FALSE(a.confirmed);

  c.advance(2);
  CHECK_FALSE(c.query_canonical(q("tx1", 3)).confirmed);
  c.advance(1);
  auto b = c.query_canonical(q("tx1", 3));
  CHECK(b.confirmed);  // exactly three blocks on top
  CHECK(b.block_hash == a.block_hash);
  CHECK(c.canonical_confirmations("tx1") == 3);
}

TEST_CASE("absent transaction", "[sourcechain]")
{
  SourceChain c;
  c.advance(5);
  auto a = c.query_canonical(q("missing", 0));
  CHECK(a == VerificationAnswer{});
  CHECK_FALSE(a.included);
  CHECK(a.block_number == 0);
  CHECK(a.block_hash == Digest{});
  CHECK_FALSE(a.confirmed);
  CHECK_FALSE(c.canonical_confirmations("missing").has_value());
}

TEST_CASE("advance increases every confirmation count", "[sourcechain]")
{
  SourceChain c;
  for (int i = 0; i < 4; ++i)
  {
    c.include("t" + std::to_string(i));
    c.advance(1);
  }
  std::vector<std::uint64_t> before;
  for (int i = 0; i < 4; ++i)
  {
    before.push_back(*c.canonical_confirmations("t" + std::to_string(i)));
  }
  c.advance(3);
  for (int i = 0; i < 4; ++i)
  {
    CHECK(*c.canonical_confirmations("t" + std::to_string(i)) == before[static_cast<std::size_t>(i)] + 3);
  }
}

TEST_CASE("lagging view converges", "[sourcechain]")
{
  SourceChain c;
  c.advance(2);
  c.set_lag(7, 2);
  c.include("tx");
  c.advance(1);
  CHECK(c.query_canonical(q("tx", 0)).included);
  CHECK_FALSE(c.query(7, q("tx", 0)).included);
  CHECK(c.query(8, q("tx", 0)).included);  // an unlagged node
  c.advance(2);
  CHECK(c.query(7, q("tx", 0)) == c.query_canonical(q("tx", 0)));
  CHECK_FALSE(c.query(7, q("tx", 2)).confirmed);
  CHECK(c.query_canonical(q("tx", 2)).confirmed);
  c.set_lag(7, 0);
  CHECK(c.query(7, q("tx", 2)) == c.query_canonical(q("tx", 2)));
}

TEST_CASE("fork splits answers until heal", "[sourcechain]")
{
  SourceChain c;
  c.advance(3);
  c.include("tx");
  c.advance(1);
  c.advance(2);
  // Nodes 3 and 4 follow a branch that forked below the including block.
  BranchId b = c.inject_fork(3, 3, {3, 4});
  CHECK(b != kCanonical);
  c.include("tx");
  c.advance(1);

  auto canon = c.query(0, q("tx", 1));
  auto side  = c.query(3, q("tx", 1));
  CHECK(canon.included);
  CHECK(side.included);
  CHECK(canon != side);
  CHECK(c.query(4, q("tx", 1)) == side);
  CHECK(c.query(1, q("tx", 1)) == canon);

  c.heal();
  for (NodeId n = 0; n < 5; ++n)
  {
    CHECK(c.query(n, q("tx", 1)) == c.query_canonical(q("tx", 1)));
    CHECK(c.head_of(n).hash == c.head().hash);
  }
}

TEST_CASE("reorg moves the canonical chain", "[sourcechain]")
{
  SourceChain c;
  c.include("tx");
  c.advance(2);
  BranchId b = c.inject_fork(2, 4, {9});
  auto     before = c.query_canonical(q("tx", 0));
  CHECK(before.included);
  c.reorg(b);
  CHECK_FALSE(c.query_canonical(q("tx", 0)).included);
  CHECK(c.query(9, q("tx", 0)).included == false);
  CHECK(c.query(1, q("tx", 0)).included == false);
  CHECK_THROWS_AS(c.reorg(77), Error);
}

TEST_CASE("structural errors", "[sourcechain]")
{
  SourceChain c;
  CHECK_THROWS_AS(c.add_block(99, {}, kCanonical), Error);
  CHECK_THROWS_AS(c.inject_fork(5, 1, {}), Error);
}

TEST_CASE("block hashes are unique within a run", "[sourcechain]")
{
  SourceChain c;
  c.advance(4);
  c.inject_fork(2, 5, {1});
  c.inject_fork(2, 5, {2});
  c.advance(3);
  std::size_t n = c.block_count();
  CHECK(n == 1 + 4 + 5 + 5 + 3 * 3);
  std::set<Digest> seen;
  for (std::size_t i = 0; i < n; ++i)
  {
    seen.insert(c.block(i).hash);
    if (auto p = c.block(i).parent_id)
    {
      CHECK(c.block(i).parent == c.block(*p).hash);
      CHECK(c.block(i).number == c.block(*p).number + 1);
    }
  }
  CHECK(seen.size() == n);
}

TEST_CASE("monotone confirmation on an unreorged chain", "[sourcechain]")
{
  SourceChain c;
  c.include("tx");
  c.advance(1);
  bool confirmed = false;
  for (int h = 0; h < 20; ++h)
  {
    bool now = c.query_canonical(q("tx", 5)).confirmed;
    CHECK((!confirmed || now));
    confirmed = now;
    c.advance(1);
  }
  CHECK(confirmed);
}
