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

// Optimal ate pairing on alt_bn128. Miller loop runs in affine coordinates on
// the twist; lines are evaluated through the untwisting map
// (x, y) -> (x w^2, y w^3) with w^6 = xi.

#include "ioracle/error.hpp"
#include "ioracle/group.hpp"
#include "ioracle/detail/pairing.hpp"

#include <vector>

namespace ioracle {

using field::Fp;
using field::Fp12;
using field::Fp2;
using field::Fp6;

namespace {

// 6x + 2 for the BN parameter x = 4965661367192848881.
constexpr unsigned __int128 kAteLoopCount =
    (static_cast<unsigned __int128>(0x1ULL) << 64) | static_cast<unsigned __int128>(0x9d797039be763ba8ULL);

// (p^4 - p^2 + 1) / r
constexpr char kHardExponentHex[] =
    "1baaa710b0759ad331ec15183177faf6c0eb522d5b122784e529a5861876f6b3b1b1355d189227d79581e16f3fd90c66b8"
    "87d56d5095f23aaa441e3954bcf8adcc7b44c87cdbacff1154e7e1da014fd5abf5cc4f49c36d4e81bb482ccdf42b1";

std::vector<std::uint64_t> const &hard_exponent()
{
  static std::vector<std::uint64_t> const e = [] {
    std::string hex(kHardExponentHex);
    while (hex.size() % 16 != 0)
    {
      hex.insert(hex.begin(), '0');
    }
    std::vector<std::uint64_t> limbs(hex.size() / 16);
    for (std::size_t i = 0; i < limbs.size(); ++i)
    {
      std::string chunk = hex.substr(hex.size() - 16 * (i + 1), 16);
      limbs[i]          = std::stoull(chunk, nullptr, 16);
    }
    return limbs;
  }();
  return e;
}

struct TwistFrobenius
{
  Fp2 gx;  // xi^((p-1)/3)
  Fp2 gy;  // xi^((p-1)/2)

  TwistFrobenius()
  {
    // Extract the constants from the Fp12 Frobenius: w^2 -> gamma_2 w^2 and
    // w^3 -> gamma_3 w^3.
    Fp12 w2{Fp6{Fp2::zero(), Fp2::one(), Fp2::zero()}, Fp6::zero()};
    Fp12 w3{Fp6::zero(), Fp6{Fp2::zero(), Fp2::one(), Fp2::zero()}};
    gx = w2.frobenius().c0.c1;
    gy = w3.frobenius().c1.c1;
  }
};

TwistFrobenius const &twist_frobenius()
{
  static TwistFrobenius const c;
  return c;
}

struct Affine2
{
  Fp2 x, y;
};

Affine2 frobenius(Affine2 const &q)
{
  auto const &c = twist_frobenius();
  return {q.x.conjugate() * c.gx, q.y.conjugate() * c.gy};
}

// Line through (t, q) (tangent if equal) evaluated at P; advances t to t + q.
Fp12 line_and_step(Affine2 &t, Affine2 const &q, Fp const &px, Fp const &py)
{
  Fp12 l{};
  Fp2  lambda;
  if (t.x == q.x)
  {
    if (t.y != q.y || t.y.is_zero())
    {
      // Vertical line x - x_t; t + q is the identity, which cannot happen for
      // order-r inputs before the final step.
      l.c0.c0 = Fp2{px, Fp::zero()};
      l.c0.c1 = -t.x;
      return l;
    }
    Fp2 x2 = t.x.square();
    lambda = (x2.dbl() + x2) * t.y.dbl().inverse();
  }
  else
  {
    lambda = (q.y - t.y) * (q.x - t.x).inverse();
  }
  l.c0.c0 = Fp2{py, Fp::zero()};
  l.c1.c0 = -(lambda * px);
  l.c1.c1 = lambda * t.x - t.y;

  Fp2 x3 = lambda.square() - t.x - q.x;
  Fp2 y3 = lambda * (t.x - x3) - t.y;
  t      = {x3, y3};
  return l;
}

struct PairInput
{
  Fp      px, py;
  Affine2 q;
};

Fp12 miller_loop(std::vector<PairInput> const &in)
{
  Fp12                 f = Fp12::one();
  std::vector<Affine2> t;
  t.reserve(in.size());
  for (auto const &p : in)
  {
    t.push_back(p.q);
  }

  int top = 127;
  while (((kAteLoopCount >> top) & 1) == 0)
  {
    --top;
  }
  for (int i = top - 1; i >= 0; --i)
  {
    f = f.square();
    for (std::size_t k = 0; k < in.size(); ++k)
    {
      f *= line_and_step(t[k], t[k], in[k].px, in[k].py);
    }
    if ((kAteLoopCount >> i) & 1)
    {
      for (std::size_t k = 0; k < in.size(); ++k)
      {
        f *= line_and_step(t[k], in[k].q, in[k].px, in[k].py);
      }
    }
  }
  for (std::size_t k = 0; k < in.size(); ++k)
  {
    Affine2 q1 = frobenius(in[k].q);
    Affine2 q2 = frobenius(q1);
    q2.y       = -q2.y;
    f *= line_and_step(t[k], q1, in[k].px, in[k].py);
    f *= line_and_step(t[k], q2, in[k].px, in[k].py);
  }
  return f;
}

constexpr std::uint64_t kBnU = 4965661367192848881ULL;

Fp12 exp_by_u(Fp12 const &f)
{
  std::uint64_t const e[1] = {kBnU};
  return f.pow(e);
}

Fp12 easy_part(Fp12 const &f)
{
  Fp12 f1 = f.conjugate() * f.inverse();    // f^(p^6 - 1)
  return f1.frobenius().frobenius() * f1;  // ^(p^2 + 1)
}

// Hard part (p^4 - p^2 + 1) / r via the Devegili-Scott-Dahab addition chain in
// u. Inputs are in the cyclotomic subgroup, so conjugation is inversion.
Fp12 hard_part(Fp12 const &f)
{
  Fp12 fp   = f.frobenius();
  Fp12 fp2  = fp.frobenius();
  Fp12 fp3  = fp2.frobenius();
  Fp12 fu   = exp_by_u(f);
  Fp12 fu2  = exp_by_u(fu);
  Fp12 fu3  = exp_by_u(fu2);
  Fp12 fup  = fu.frobenius();
  Fp12 fu2p = fu2.frobenius();
  Fp12 fu3p = fu3.frobenius();
  Fp12 fu2pp = fu2p.frobenius();

  Fp12 y0 = fp * fp2 * fp3;
  Fp12 y1 = f.conjugate();
  Fp12 y2 = fu2pp;
  Fp12 y3 = fup.conjugate();
  Fp12 y4 = (fu * fu2p).conjugate();
  Fp12 y5 = fu2.conjugate();
  Fp12 y6 = (fu3 * fu3p).conjugate();

  Fp12 t0 = y6.square() * y4 * y5;
  Fp12 t1 = y3 * y5 * t0;
  t0      = t0 * y2;
  t1      = t1.square() * t0;
  t1      = t1.square();
  t0      = t1 * y1;
  t1      = t1 * y0;
  t0      = t0.square();
  return t0 * t1;
}

Fp12 final_exponentiation(Fp12 const &f)
{
  return hard_part(easy_part(f));
}

}  // namespace

namespace detail {

// Reference path with the plain (p^4 - p^2 + 1) / r exponent; test use only.
Fp12 final_exponentiation_reference(Fp12 const &f)
{
  return easy_part(f).pow(hard_exponent());
}

Fp12 final_exponentiation_fast(Fp12 const &f)
{
  return final_exponentiation(f);
}

Fp12 miller_loop_single(PointG1 const &p, PointG2 const &q);

}  // namespace detail

namespace {

std::vector<PairInput> collect(std::span<std::pair<PointG1, PointG2> const> pairs)
{
  std::vector<PairInput> in;
  in.reserve(pairs.size());
  for (auto const &[a, b] : pairs)
  {
    if (!a.on_curve() || !b.on_curve())
    {
      throw Error(ErrorCode::InvalidEncoding, "pairing input not on curve");
    }
    if (a.is_identity() || b.is_identity())
    {
      continue;
    }
    in.push_back(PairInput{a.x(), a.y(), Affine2{b.x(), b.y()}});
  }
  return in;
}

}  // namespace

Fp12 detail::miller_loop_single(PointG1 const &p, PointG2 const &q)
{
  std::pair<PointG1, PointG2> const pr{p, q};
  auto                              in = collect(std::span(&pr, 1));
  return in.empty() ? Fp12::one() : miller_loop(in);
}

Fp12 pairing(PointG1 const &p, PointG2 const &q)
{
  std::pair<PointG1, PointG2> const pr{p, q};
  auto                              in = collect(std::span(&pr, 1));
  if (in.empty())
  {
    return Fp12::one();
  }
  return final_exponentiation(miller_loop(in));
}

bool pairing_check(std::span<std::pair<PointG1, PointG2> const> pairs)
{
  if (pairs.empty())
  {
    throw Error(ErrorCode::InvalidArgument, "pairing check needs at least one pair");
  }
  auto in = collect(pairs);
  if (in.empty())
  {
    return true;
  }
  return final_exponentiation(miller_loop(in)) == Fp12::one();
}

}  // namespace ioracle
