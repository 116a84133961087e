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
#include "ioracle/sharing.hpp"

#include <catch_amalgamated.hpp>

#include <functional>

using namespace ioracle;
using namespace ioracle::sharing;

namespace {

// Naive power-sum evaluation, kept separate from the Horner loop in the
// library.
Scalar eval_naive(Polynomial const &f, std::uint64_t x)
{
  Scalar acc;
  for (std::size_t k = 0; k < f.coefficients().size(); ++k)
  {
    acc += f.coefficients()[k] * Scalar::from_u64(x).pow(k);
  }
  return acc;
}

void for_each_subset(std::size_t n, std::size_t t, std::function<void(std::vector<std::size_t> const &)> const &fn)
{
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (pick.size() == t)
    {
      fn(pick);
      return;
    }
    for (std::size_t i = start; i < n; ++i)
    {
      pick.push_back(i);
      rec(i + 1);
      pick.pop_back();
    }
  };
  rec(0);
}

ErrorCode code_of(std::function<void()> const &fn)
{
  try
  {
    fn();
  }
  catch (Error const &e)
  {
    return e.code();
  }
  return ErrorCode::Internal;
}

}  // namespace

TEST_CASE("constant polynomial gives every node the secret", "[sharing]")
{
  Rng    rng(1);
  Scalar s        = Scalar::random(rng);
  auto [f, shares] = deal(s, 1, 6, rng);
  for (auto const &sh : shares)
  {
    CHECK(sh.value == s);
  }
  CHECK(f.secret() == s);
}

TEST_CASE("shares are evaluations of the dealt polynomial", "[sharing]")
{
  Rng    rng(2);
  Scalar s         = Scalar::random(rng);
  auto [f, shares] = deal(s, 3, 5, rng);
  REQUIRE(shares.size() == 5);
  CHECK(f.coefficients().size() == 3);
  CHECK(eval_naive(f, 0) == s);
  for (auto const &sh : shares)
  {
    CHECK(sh.value == eval_naive(f, sh.index));
  }
  std::vector<Share> pick{shares[0], shares[2], shares[4]};
  CHECK(recover_secret(pick, 3) == s);
}

TEST_CASE("recovery from every t-subset", "[sharing]")
{
  for (std::uint64_t seed = 0; seed < 100; ++seed)
  {
    Rng rng(seed);
    for (std::size_t n = 1; n <= 7; ++n)
    {
      for (std::size_t t = 1; t <= n; ++t)
      {
        Scalar s         = Scalar::random(rng);
        auto [f, shares] = deal(s, t, n, rng);
        for_each_subset(n, t, [&](auto const &idx) {
          std::vector<Share> sub;
          for (auto i : idx)
          {
            sub.push_back(shares[i]);
          }
          REQUIRE(recover_secret(sub, t) == s);
        });
      }
    }
  }
}

TEST_CASE("extra shares: lowest indices are used", "[sharing]")
{
  Rng    rng(3);
  Scalar s         = Scalar::random(rng);
  auto [f, shares] = deal(s, 2, 4, rng);
  std::vector<Share> mixed{shares[3], shares[0], shares[1]};
  mixed[0].value += Scalar::one();  // index 4 is never used when t=2
  CHECK(recover_secret(mixed, 2) == s);
}

TEST_CASE("below threshold does not reveal the secret", "[sharing]")
{
  Rng    rng(4);
  Scalar s         = Scalar::random(rng);
  auto [f, shares] = deal(s, 2, 2, rng);
  std::vector<Share> one{shares[0]};
  CHECK(recover_secret(one, 1) != s);
  CHECK(code_of([&] { recover_secret(one, 2); }) == ErrorCode::Threshold);
}

TEST_CASE("sharing parameter errors", "[sharing]")
{
  Rng rng(5);
  CHECK(code_of([&] { deal(Scalar::one(), 0, 3, rng); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { deal(Scalar::one(), 4, 3, rng); }) == ErrorCode::InvalidArgument);

  auto [f, shares] = deal(Scalar::one(), 3, 5, rng);
  std::vector<Share> two{shares[0], shares[1]};
  CHECK(code_of([&] { recover_secret(two, 3); }) == ErrorCode::Threshold);
  std::vector<Share> dup{shares[0], shares[1], shares[1]};
  CHECK(code_of([&] { recover_secret(dup, 3); }) == ErrorCode::DuplicateIndex);
  std::vector<std::uint64_t> zero{0, 1};
  CHECK(code_of([&] { lagrange_coefficients(zero); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { Polynomial(std::vector<Scalar>{}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("lagrange interpolation in the exponent", "[sharing]")
{
  PointG2 const g = PointG2::generator();
  for (std::uint64_t seed = 0; seed < 10; ++seed)
  {
    Rng         rng(100 + seed);
    std::size_t n    = 2 + rng.uniform(5);
    std::size_t t    = 1 + rng.uniform(n);
    Scalar      s    = Scalar::random(rng);
    auto [f, shares] = deal(s, t, n, rng);

    std::vector<std::uint64_t> idx;
    std::vector<PointG2>       pub;
    for (std::size_t i = n - t; i < n; ++i)
    {
      idx.push_back(shares[i].index);
      pub.push_back(g * shares[i].value);
    }
    auto    lambda = lagrange_coefficients(idx);
    PointG2 acc;
    for (std::size_t k = 0; k < t; ++k)
    {
      acc = acc + pub[k] * lambda[k];
    }
    CHECK(acc == g * s);
  }
}

TEST_CASE("feldman accepts honest shares", "[sharing]")
{
  for (std::uint64_t seed = 0; seed < 100; ++seed)
  {
    Rng         rng(seed);
    std::size_t t    = 1 + rng.uniform(4);
    std::size_t n    = t + rng.uniform(8 - t);
    auto [f, shares] = deal(Scalar::random(rng), t, n, rng);
    auto com         = feldman_commit(f);
    REQUIRE(com.points.size() == t);
    CHECK(com.points[0] == PointG2::generator() * f.secret());
    for (auto const &sh : shares)
    {
      CHECK(feldman_verify(sh, com));
    }
  }
}

TEST_CASE("feldman rejects every single-bit mutation", "[sharing]")
{
  Rng  rng(9);
  auto [f, shares] = deal(Scalar::random(rng), 3, 5, rng);
  auto  com        = feldman_commit(f);
  Share sh         = shares[1];

  Share bumped = sh;
  bumped.value += Scalar::one();
  CHECK_FALSE(feldman_verify(bumped, com));

  for (int bit = 0; bit < 64; ++bit)
  {
    Share m = sh;
    m.index ^= (std::uint64_t{1} << bit);
    CHECK_FALSE(feldman_verify(m, com));
  }
  auto bytes = sh.value.to_bytes();
  int  tried = 0;
  for (int bit = 0; bit < 256; ++bit)
  {
    auto m = bytes;
    m[static_cast<std::size_t>(bit / 8)] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    Scalar v;
    try
    {
      v = Scalar::from_bytes(m);
    }
    catch (Error const &)
    {
      continue;  // not a canonical scalar, so not a share at all
    }
    ++tried;
    CHECK_FALSE(feldman_verify(Share{sh.index, v}, com));
  }
  CHECK(tried > 200);

  sharing::FeldmanCommitment empty;
  CHECK_FALSE(feldman_verify(sh, empty));
}

TEST_CASE("pedersen commitments", "[sharing]")
{
  PointG2 const &h = pedersen_generator();
  CHECK(h.in_subgroup());
  CHECK_FALSE(h.is_identity());
  CHECK(h != PointG2::generator());

  Rng  rng(77);
  auto [f, shares] = deal(Scalar::random(rng), 3, 5, rng);
  auto [b, blinds] = deal(Scalar::random(rng), 3, 5, rng);
  auto com         = pedersen_commit(f, b);
  for (std::size_t i = 0; i < shares.size(); ++i)
  {
    CHECK(pedersen_verify(shares[i], blinds[i], com));
  }
  Share bad = blinds[2];
  bad.value += Scalar::one();
  CHECK_FALSE(pedersen_verify(shares[2], bad, com));
  CHECK_FALSE(pedersen_verify(shares[2], blinds[3], com));

  auto [short_b, unused] = deal(Scalar::one(), 2, 5, rng);
  CHECK(code_of([&] { pedersen_commit(f, short_b); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("pedersen commitments hide the feldman values", "[sharing]")
{
  for (std::uint64_t seed = 0; seed < 100; ++seed)
  {
    Rng  rng(1000 + seed);
    auto f  = Polynomial::random(Scalar::random(rng), 2, rng);
    auto bl = Polynomial::random(Scalar::random(rng), 2, rng);
    auto pc = pedersen_commit(f, bl);
    auto fc = feldman_commit(f);
    for (std::size_t k = 0; k < 2; ++k)
    {
      CHECK(pc.points[k] != fc.points[k]);
    }
  }
}
