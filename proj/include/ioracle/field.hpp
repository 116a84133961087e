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

// Prime-field and extension-field arithmetic for the alt_bn128 (BN254) curve.
//
// Elements are kept in Montgomery form over four 64-bit limbs. The tower is
//   Fp2  = Fp[u]  / (u^2 + 1)
//   Fp6  = Fp2[v] / (v^3 - xi),  xi = 9 + u
//   Fp12 = Fp6[w] / (w^2 - v)

#include "ioracle/error.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace ioracle::field {

using Limbs = std::array<std::uint64_t, 4>;
using u128  = unsigned __int128;

namespace limbs {

inline bool geq(Limbs const &a, Limbs const &b)
{
  for (int i = 3; i >= 0; --i)
  {
    if (a[i] != b[i])
    {
      return a[i] > b[i];
    }
  }
  return true;
}

inline std::uint64_t add(Limbs &a, Limbs const &b)
{
  std::uint64_t carry = 0;
  for (int i = 0; i < 4; ++i)
  {
    u128 s = static_cast<u128>(a[i]) + b[i] + carry;
    a[i]   = static_cast<std::uint64_t>(s);
    carry  = static_cast<std::uint64_t>(s >> 64);
  }
  return carry;
}

inline std::uint64_t sub(Limbs &a, Limbs const &b)
{
  std::uint64_t borrow = 0;
  for (int i = 0; i < 4; ++i)
  {
    u128 d = static_cast<u128>(a[i]) - b[i] - borrow;
    a[i]   = static_cast<std::uint64_t>(d);
    borrow = static_cast<std::uint64_t>(d >> 64) & 1;
  }
  return borrow;
}

inline bool is_zero(Limbs const &a)
{
  return (a[0] | a[1] | a[2] | a[3]) == 0;
}

inline bool bit(Limbs const &a, int i)
{
  return (a[static_cast<std::size_t>(i / 64)] >> (i % 64)) & 1;
}

inline int bit_length(Limbs const &a)
{
  for (int i = 3; i >= 0; --i)
  {
    if (a[i] != 0)
    {
      return 64 * i + 64 - __builtin_clzll(a[i]);
    }
  }
  return 0;
}

Limbs from_be_bytes(std::span<std::uint8_t const, 32> in);
void  to_be_bytes(Limbs const &a, std::span<std::uint8_t, 32> out);

}  // namespace limbs

struct FpModulus
{
  static constexpr Limbs mod{0x3c208c16d87cfd47ULL, 0x97816a916871ca8dULL, 0xb85045b68181585dULL,
                             0x30644e72e131a029ULL};
  static constexpr Limbs r2{0xf32cfc5b538afa89ULL, 0xb5e71911d44501fbULL, 0x47ab1eff0a417ff6ULL,
                            0x06d89f71cab8351fULL};
  static constexpr Limbs one{0xd35d438dc58f0d9dULL, 0x0a78eb28f5c70b3dULL, 0x666ea36f7879462cULL,
                             0x0e0a77c19a07df2fULL};
  static constexpr std::uint64_t inv = 0x87d20782e4866389ULL;
};

struct FrModulus
{
  static constexpr Limbs mod{0x43e1f593f0000001ULL, 0x2833e84879b97091ULL, 0xb85045b68181585dULL,
                             0x30644e72e131a029ULL};
  static constexpr Limbs r2{0x1bb8e645ae216da7ULL, 0x53fe3ab1e35c59e3ULL, 0x8c49833d53bb8085ULL,
                            0x0216d0b17f4e44a5ULL};
  static constexpr Limbs one{0xac96341c4ffffffbULL, 0x36fc76959f60cd29ULL, 0x666ea36f7879462eULL,
                             0x0e0a77c19a07df2fULL};
  static constexpr std::uint64_t inv = 0xc2e1f593efffffffULL;
};

template <class M>
class MontField
{
public:
  constexpr MontField() = default;

  static MontField zero()
  {
    return {};
  }

  static MontField one()
  {
    MontField r;
    r.v_ = M::one;
    return r;
  }

  static MontField from_u64(std::uint64_t x)
  {
    return from_canonical(Limbs{x, 0, 0, 0});
  }

  /// `x` must already be reduced (x < modulus).
  static MontField from_canonical(Limbs const &x)
  {
    MontField a;
    a.v_ = x;
    MontField r2;
    r2.v_ = M::r2;
    return a * r2;
  }

  /// Reduces arbitrary 256-bit input modulo the field prime.
  static MontField from_limbs_reduce(Limbs x)
  {
    while (limbs::geq(x, M::mod))
    {
      limbs::sub(x, M::mod);
    }
    return from_canonical(x);
  }

  static Limbs const &modulus()
  {
    return M::mod;
  }

  Limbs to_canonical() const
  {
    MontField one_raw;
    one_raw.v_ = Limbs{1, 0, 0, 0};
    return (*this * one_raw).v_;
  }

  bool is_zero() const
  {
    return limbs::is_zero(v_);
  }

  bool operator==(MontField const &o) const = default;

  MontField operator+(MontField const &o) const
  {
    MontField r = *this;
    limbs::add(r.v_, o.v_);
    if (limbs::geq(r.v_, M::mod))
    {
      limbs::sub(r.v_, M::mod);
    }
    return r;
  }

  MontField operator-(MontField const &o) const
  {
    MontField r = *this;
    if (limbs::sub(r.v_, o.v_))
    {
      limbs::add(r.v_, M::mod);
    }
    return r;
  }

  MontField operator-() const
  {
    if (is_zero())
    {
      return *this;
    }
    MontField r;
    r.v_ = M::mod;
    limbs::sub(r.v_, v_);
    return r;
  }

  MontField operator*(MontField const &o) const
  {
    // CIOS Montgomery multiplication; the modulus leaves two spare top bits so
    // the intermediate never exceeds five limbs plus a bit.
    std::uint64_t t[6] = {0, 0, 0, 0, 0, 0};
    for (int i = 0; i < 4; ++i)
    {
      std::uint64_t carry = 0;
      for (int j = 0; j < 4; ++j)
      {
        u128 s = static_cast<u128>(v_[j]) * o.v_[i] + t[j] + carry;
        t[j]   = static_cast<std::uint64_t>(s);
        carry  = static_cast<std::uint64_t>(s >> 64);
      }
      u128 s = static_cast<u128>(t[4]) + carry;
      t[4]   = static_cast<std::uint64_t>(s);
      t[5]   = static_cast<std::uint64_t>(s >> 64);

      std::uint64_t m = t[0] * M::inv;
      u128          c = static_cast<u128>(m) * M::mod[0] + t[0];
      carry           = static_cast<std::uint64_t>(c >> 64);
      for (int j = 1; j < 4; ++j)
      {
        c        = static_cast<u128>(m) * M::mod[j] + t[j] + carry;
        t[j - 1] = static_cast<std::uint64_t>(c);
        carry    = static_cast<std::uint64_t>(c >> 64);
      }
      c    = static_cast<u128>(t[4]) + carry;
      t[3] = static_cast<std::uint64_t>(c);
      t[4] = t[5] + static_cast<std::uint64_t>(c >> 64);
    }
    MontField r;
    r.v_ = Limbs{t[0], t[1], t[2], t[3]};
    if (t[4] != 0 || limbs::geq(r.v_, M::mod))
    {
      limbs::sub(r.v_, M::mod);
    }
    return r;
  }

  MontField &operator+=(MontField const &o)
  {
    return *this = *this + o;
  }
  MontField &operator-=(MontField const &o)
  {
    return *this = *this - o;
  }
  MontField &operator*=(MontField const &o)
  {
    return *this = *this * o;
  }

  MontField square() const
  {
    return *this * *this;
  }

  MontField dbl() const
  {
    return *this + *this;
  }

  MontField pow(Limbs const &e) const
  {
    MontField r = one();
    for (int i = limbs::bit_length(e) - 1; i >= 0; --i)
    {
      r = r.square();
      if (limbs::bit(e, i))
      {
        r *= *this;
      }
    }
    return r;
  }

  /// Fermat inverse; throws on zero.
  MontField inverse() const
  {
    if (is_zero())
    {
      throw Error(ErrorCode::DomainError, "inverse of zero");
    }
    Limbs e = M::mod;
    limbs::sub(e, Limbs{2, 0, 0, 0});
    return pow(e);
  }

  /// Euler criterion: true for zero and nonzero squares.
  bool is_square() const
  {
    if (is_zero())
    {
      return true;
    }
    Limbs e = M::mod;
    limbs::sub(e, Limbs{1, 0, 0, 0});
    // (p-1)/2
    for (int i = 0; i < 4; ++i)
    {
      e[static_cast<std::size_t>(i)] =
          (e[static_cast<std::size_t>(i)] >> 1) | (i < 3 ? (e[static_cast<std::size_t>(i + 1)] << 63) : 0);
    }
    return pow(e) == one();
  }

  Limbs const &raw() const
  {
    return v_;
  }

private:
  Limbs v_{0, 0, 0, 0};
};

using Fp = MontField<FpModulus>;
using Fr = MontField<FrModulus>;

/// Square root in Fp for p = 3 mod 4. Returns false if `a` is a non-residue.
bool sqrt(Fp const &a, Fp &out);

struct Fp2
{
  Fp c0, c1;

  static Fp2 zero()
  {
    return {};
  }
  static Fp2 one()
  {
    return {Fp::one(), Fp::zero()};
  }

  bool is_zero() const
  {
    return c0.is_zero() && c1.is_zero();
  }
  bool operator==(Fp2 const &) const = default;

  Fp2 operator+(Fp2 const &o) const
  {
    return {c0 + o.c0, c1 + o.c1};
  }
  Fp2 operator-(Fp2 const &o) const
  {
    return {c0 - o.c0, c1 - o.c1};
  }
  Fp2 operator-() const
  {
    return {-c0, -c1};
  }
  Fp2 operator*(Fp2 const &o) const
  {
    Fp t0 = c0 * o.c0;
    Fp t1 = c1 * o.c1;
    return {t0 - t1, (c0 + c1) * (o.c0 + o.c1) - t0 - t1};
  }
  Fp2 operator*(Fp const &s) const
  {
    return {c0 * s, c1 * s};
  }
  Fp2 &operator+=(Fp2 const &o)
  {
    return *this = *this + o;
  }
  Fp2 &operator-=(Fp2 const &o)
  {
    return *this = *this - o;
  }
  Fp2 &operator*=(Fp2 const &o)
  {
    return *this = *this * o;
  }

  Fp2 square() const
  {
    Fp a = c0 + c1;
    Fp b = c0 - c1;
    Fp c = c0 * c1;
    return {a * b, c + c};
  }
  Fp2 dbl() const
  {
    return *this + *this;
  }
  Fp2 conjugate() const
  {
    return {c0, -c1};
  }
  /// Multiply by xi = 9 + u.
  Fp2 mul_by_xi() const
  {
    Fp nine_c0 = c0.dbl().dbl().dbl() + c0;
    Fp nine_c1 = c1.dbl().dbl().dbl() + c1;
    return {nine_c0 - c1, c0 + nine_c1};
  }
  Fp2 inverse() const
  {
    Fp t = (c0.square() + c1.square()).inverse();
    return {c0 * t, -(c1 * t)};
  }
  Fp2 pow(std::span<std::uint64_t const> e) const;
};

/// Square root in Fp2; returns false for non-residues.
bool sqrt(Fp2 const &a, Fp2 &out);

struct Fp6
{
  Fp2 c0, c1, c2;

  static Fp6 zero()
  {
    return {};
  }
  static Fp6 one()
  {
    return {Fp2::one(), Fp2::zero(), Fp2::zero()};
  }
  bool is_zero() const
  {
    return c0.is_zero() && c1.is_zero() && c2.is_zero();
  }
  bool operator==(Fp6 const &) const = default;

  Fp6 operator+(Fp6 const &o) const
  {
    return {c0 + o.c0, c1 + o.c1, c2 + o.c2};
  }
  Fp6 operator-(Fp6 const &o) const
  {
    return {c0 - o.c0, c1 - o.c1, c2 - o.c2};
  }
  Fp6 operator-() const
  {
    return {-c0, -c1, -c2};
  }
  Fp6 operator*(Fp6 const &o) const
  {
    Fp2 t0 = c0 * o.c0;
    Fp2 t1 = c1 * o.c1;
    Fp2 t2 = c2 * o.c2;
    return {((c1 + c2) * (o.c1 + o.c2) - t1 - t2).mul_by_xi() + t0,
            (c0 + c1) * (o.c0 + o.c1) - t0 - t1 + t2.mul_by_xi(),
            (c0 + c2) * (o.c0 + o.c2) - t0 - t2 + t1};
  }
  Fp6 square() const
  {
    return *this * *this;
  }
  /// Multiply by v.
  Fp6 mul_by_v() const
  {
    return {c2.mul_by_xi(), c0, c1};
  }
  Fp6 inverse() const
  {
    Fp2 a = c0.square() - (c1 * c2).mul_by_xi();
    Fp2 b = c2.square().mul_by_xi() - c0 * c1;
    Fp2 c = c1.square() - c0 * c2;
    Fp2 f = c0 * a + (c2 * b + c1 * c).mul_by_xi();
    Fp2 fi = f.inverse();
    return {a * fi, b * fi, c * fi};
  }
};

struct Fp12
{
  Fp6 c0, c1;

  static Fp12 one()
  {
    return {Fp6::one(), Fp6::zero()};
  }
  bool operator==(Fp12 const &) const = default;

  Fp12 operator*(Fp12 const &o) const
  {
    Fp6 t0 = c0 * o.c0;
    Fp6 t1 = c1 * o.c1;
    return {t0 + t1.mul_by_v(), (c0 + c1) * (o.c0 + o.c1) - t0 - t1};
  }
  Fp12 &operator*=(Fp12 const &o)
  {
    return *this = *this * o;
  }
  Fp12 square() const
  {
    Fp6 ab = c0 * c1;
    Fp6 s  = (c0 + c1) * (c0 + c1.mul_by_v());
    return {s - ab - ab.mul_by_v(), ab + ab};
  }
  Fp12 conjugate() const
  {
    return {c0, -c1};
  }
  Fp12 inverse() const
  {
    Fp6 t = (c0.square() - c1.square().mul_by_v()).inverse();
    return {c0 * t, -(c1 * t)};
  }
  /// x -> x^p.
  Fp12 frobenius() const;
  Fp12 pow(std::span<std::uint64_t const> e) const;
};

}  // namespace ioracle::field
