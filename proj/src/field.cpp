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

#include "ioracle/field.hpp"

namespace ioracle::field {

namespace limbs {

Limbs from_be_bytes(std::span<std::uint8_t const, 32> in)
{
  Limbs out{};
  for (std::size_t i = 0; i < 32; ++i)
  {
    std::size_t limb = 3 - i / 8;
    out[limb]        = (out[limb] << 8) | in[i];
  }
  return out;
}

void to_be_bytes(Limbs const &a, std::span<std::uint8_t, 32> out)
{
  for (std::size_t i = 0; i < 32; ++i)
  {
    std::size_t limb = 3 - i / 8;
    int         sh   = static_cast<int>(8 * (7 - i % 8));
    out[i]           = static_cast<std::uint8_t>(a[limb] >> sh);
  }
}

}  // namespace limbs

namespace {

Limbs sub_small(Limbs a, std::uint64_t s)
{
  limbs::sub(a, Limbs{s, 0, 0, 0});
  return a;
}

Limbs add_small(Limbs a, std::uint64_t s)
{
  limbs::add(a, Limbs{s, 0, 0, 0});
  return a;
}

Limbs div_small(Limbs a, std::uint64_t d)
{
  u128 rem = 0;
  for (int i = 3; i >= 0; --i)
  {
    u128 cur                        = (rem << 64) | a[static_cast<std::size_t>(i)];
    a[static_cast<std::size_t>(i)]  = static_cast<std::uint64_t>(cur / d);
    rem                             = cur % d;
  }
  return a;
}

struct FrobeniusConstants
{
  // gamma[k] = xi^(k (p-1) / 6)
  std::array<Fp2, 6> gamma;

  FrobeniusConstants()
  {
    Fp2   xi{Fp::from_u64(9), Fp::one()};
    Limbs e  = div_small(sub_small(FpModulus::mod, 1), 6);
    gamma[0] = Fp2::one();
    gamma[1] = xi.pow(e);
    for (std::size_t k = 2; k < 6; ++k)
    {
      gamma[k] = gamma[k - 1] * gamma[1];
    }
  }
};

FrobeniusConstants const &frobenius_constants()
{
  static FrobeniusConstants const c;
  return c;
}

}  // namespace

bool sqrt(Fp const &a, Fp &out)
{
  // p = 3 (mod 4): candidate root is a^((p+1)/4).
  static Limbs const e = div_small(add_small(FpModulus::mod, 1), 4);
  Fp                 c = a.pow(e);
  if (c.square() != a)
  {
    return false;
  }
  out = c;
  return true;
}

Fp2 Fp2::pow(std::span<std::uint64_t const> e) const
{
  Fp2 r = one();
  for (std::size_t i = e.size() * 64; i-- > 0;)
  {
    r = r.square();
    if ((e[i / 64] >> (i % 64)) & 1)
    {
      r *= *this;
    }
  }
  return r;
}

bool sqrt(Fp2 const &a, Fp2 &out)
{
  if (a.is_zero())
  {
    out = a;
    return true;
  }
  static Limbs const e1 = div_small(sub_small(FpModulus::mod, 3), 4);
  static Limbs const e2 = div_small(sub_small(FpModulus::mod, 1), 2);

  Fp2 a1    = a.pow(e1);
  Fp2 alpha = a1 * (a1 * a);
  Fp2 a0    = alpha.conjugate() * alpha;
  Fp2 minus_one{-Fp::one(), Fp::zero()};
  if (a0 == minus_one)
  {
    return false;
  }
  Fp2 x0 = a1 * a;
  Fp2 x;
  if (alpha == minus_one)
  {
    x = Fp2{-x0.c1, x0.c0};  // u * x0
  }
  else
  {
    Fp2 b = (Fp2::one() + alpha).pow(e2);
    x     = b * x0;
  }
  if (x.square() != a)
  {
    return false;
  }
  out = x;
  return true;
}

Fp12 Fp12::frobenius() const
{
  auto const &g = frobenius_constants().gamma;
  Fp12        r;
  r.c0.c0 = c0.c0.conjugate() * g[0];
  r.c1.c0 = c1.c0.conjugate() * g[1];
  r.c0.c1 = c0.c1.conjugate() * g[2];
  r.c1.c1 = c1.c1.conjugate() * g[3];
  r.c0.c2 = c0.c2.conjugate() * g[4];
  r.c1.c2 = c1.c2.conjugate() * g[5];
  return r;
}

Fp12 Fp12::pow(std::span<std::uint64_t const> e) const
{
  // Fixed 4-bit window.
  std::array<Fp12, 16> table;
  table[0] = one();
  for (std::size_t i = 1; i < 16; ++i)
  {
    table[i] = table[i - 1] * *this;
  }
  Fp12        r     = one();
  std::size_t nbits = e.size() * 64;
  for (std::size_t i = nbits; i >= 4; i -= 4)
  {
    r = r.square().square().square().square();
    std::size_t lo  = i - 4;
    std::size_t win = (e[lo / 64] >> (lo % 64)) & 0xf;
    if (win != 0)
    {
      r *= table[win];
    }
  }
  return r;
}

}  // namespace ioracle::field
