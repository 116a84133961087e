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

#include "ioracle/group.hpp"
#include "ioracle/error.hpp"

#include <algorithm>

namespace ioracle {

using field::Fp;
using field::Fp2;
using field::Fp12;
using field::Fr;
using field::Limbs;

class detail_access
{
public:
  static PointG1 g1(Fp x, Fp y)
  {
    return PointG1{x, y, false};
  }
  static PointG2 g2(Fp2 x, Fp2 y)
  {
    return PointG2{x, y, false};
  }
};

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Fp fp_from_hex(std::string_view hex)
{
  Bytes b = from_hex(hex);
  return Fp::from_canonical(field::limbs::from_be_bytes(std::span<std::uint8_t const, 32>(b.data(), 32)));
}

Fp2 const &twist_b()
{
  static Fp2 const b = Fp2{Fp::from_u64(3), Fp::zero()} * Fp2{Fp::from_u64(9), Fp::one()}.inverse();
  return b;
}

// Jacobian coordinates (X/Z^2, Y/Z^3) over F for a curve y^2 = x^3 + b.
template <class F>
struct Jacobian
{
  F    x, y, z;
  bool inf = true;

  static Jacobian from_affine(F const &ax, F const &ay)
  {
    return {ax, ay, F::one(), false};
  }

  Jacobian dbl() const
  {
    if (inf || y.is_zero())
    {
      return {};
    }
    F a  = x.square();
    F b  = y.square();
    F c  = b.square();
    F d  = ((x + b).square() - a - c).dbl();
    F e  = a.dbl() + a;
    F f  = e.square();
    F x3 = f - d.dbl();
    F c8 = c.dbl().dbl().dbl();
    F y3 = e * (d - x3) - c8;
    F z3 = (y * z).dbl();
    return {x3, y3, z3, false};
  }

  Jacobian add(Jacobian const &o) const
  {
    if (inf)
    {
      return o;
    }
    if (o.inf)
    {
      return *this;
    }
    F z1z1 = z.square();
    F z2z2 = o.z.square();
    F u1   = x * z2z2;
    F u2   = o.x * z1z1;
    F s1   = y * o.z * z2z2;
    F s2   = o.y * z * z1z1;
    F h    = u2 - u1;
    F r    = (s2 - s1).dbl();
    if (h.is_zero())
    {
      if (r.is_zero())
      {
        return dbl();
      }
      return {};
    }
    F i  = h.dbl().square();
    F j  = h * i;
    F v  = u1 * i;
    F x3 = r.square() - j - v.dbl();
    F y3 = r * (v - x3) - (s1 * j).dbl();
    F z3 = ((z + o.z).square() - z1z1 - z2z2) * h;
    return {x3, y3, z3, false};
  }

  // Mixed addition with an affine point (Z = 1).
  Jacobian add_affine(F const &ax, F const &ay) const
  {
    if (inf)
    {
      return from_affine(ax, ay);
    }
    F z1z1 = z.square();
    F u2   = ax * z1z1;
    F s2   = ay * z * z1z1;
    F h    = u2 - x;
    F r    = (s2 - y).dbl();
    if (h.is_zero())
    {
      if (r.is_zero())
      {
        return dbl();
      }
      return {};
    }
    F hh = h.square();
    F i  = hh.dbl().dbl();
    F j  = h * i;
    F v  = x * i;
    F x3 = r.square() - j - v.dbl();
    F y3 = r * (v - x3) - (y * j).dbl();
    F z3 = (z + h).square() - z1z1 - hh;
    return {x3, y3, z3, false};
  }

  // Returns false for the identity.
  bool to_affine(F &ax, F &ay) const
  {
    if (inf || z.is_zero())
    {
      return false;
    }
    F zi  = z.inverse();
    F zi2 = zi.square();
    ax    = x * zi2;
    ay    = y * zi2 * zi;
    return true;
  }
};

template <class F>
Jacobian<F> mul_affine(F const &ax, F const &ay, Limbs const &k)
{
  Jacobian<F> acc;
  for (int i = field::limbs::bit_length(k) - 1; i >= 0; --i)
  {
    acc = acc.dbl();
    if (field::limbs::bit(k, i))
    {
      acc = acc.add_affine(ax, ay);
    }
  }
  return acc;
}

PointG1 g1_from_jacobian(Jacobian<Fp> const &j)
{
  Fp x, y;
  if (!j.to_affine(x, y))
  {
    return PointG1::identity();
  }
  return detail_access::g1(x, y);
}

PointG2 g2_from_jacobian(Jacobian<Fp2> const &j)
{
  Fp2 x, y;
  if (!j.to_affine(x, y))
  {
    return PointG2::identity();
  }
  return detail_access::g2(x, y);
}

bool less_than(Fp const &a, Fp const &b)
{
  Limbs x = a.to_canonical();
  Limbs y = b.to_canonical();
  for (int i = 3; i >= 0; --i)
  {
    if (x[static_cast<std::size_t>(i)] != y[static_cast<std::size_t>(i)])
    {
      return x[static_cast<std::size_t>(i)] < y[static_cast<std::size_t>(i)];
    }
  }
  return false;
}

void put_fp(Fp const &v, std::uint8_t *out)
{
  field::limbs::to_be_bytes(v.to_canonical(), std::span<std::uint8_t, 32>(out, 32));
}

// Strict: the encoded integer must be < p.
Fp get_fp(std::uint8_t const *in)
{
  Limbs l = field::limbs::from_be_bytes(std::span<std::uint8_t const, 32>(in, 32));
  if (field::limbs::geq(l, field::FpModulus::mod))
  {
    throw Error(ErrorCode::InvalidEncoding, "coordinate not reduced modulo p");
  }
  return Fp::from_canonical(l);
}

Fp fp_from_digest(Digest const &d)
{
  return Fp::from_limbs_reduce(field::limbs::from_be_bytes(std::span<std::uint8_t const, 32>(d.data(), 32)));
}

}  // namespace

// ---------------------------------------------------------------- Rng

std::uint64_t Rng::uniform(std::uint64_t bound)
{
  if (bound == 0)
  {
    throw Error(ErrorCode::InvalidArgument, "uniform bound must be positive");
  }
  // Standard distributions are implementation-defined; reject-and-reduce keeps
  // streams identical across standard libraries.
  std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  for (;;)
  {
    std::uint64_t v = engine_();
    if (v < limit)
    {
      return v % bound;
    }
  }
}

Rng Rng::fork(std::uint64_t salt) const
{
  return Rng{splitmix64(seed_ ^ splitmix64(salt))};
}

// ---------------------------------------------------------------- Scalar

Scalar Scalar::from_digest(Digest const &d)
{
  return Scalar{Fr::from_limbs_reduce(field::limbs::from_be_bytes(std::span<std::uint8_t const, 32>(d.data(), 32)))};
}

Scalar Scalar::from_bytes(std::span<std::uint8_t const> bytes)
{
  if (bytes.size() != kEncodedSize)
  {
    throw Error(ErrorCode::InvalidEncoding, "scalar encoding must be 32 bytes");
  }
  Limbs l = field::limbs::from_be_bytes(std::span<std::uint8_t const, 32>(bytes.data(), 32));
  if (field::limbs::geq(l, field::FrModulus::mod))
  {
    throw Error(ErrorCode::InvalidEncoding, "scalar not reduced modulo r");
  }
  return Scalar{Fr::from_canonical(l)};
}

Scalar Scalar::random(Rng &rng)
{
  for (;;)
  {
    Limbs l{rng.next(), rng.next(), rng.next(), rng.next()};
    l[3] &= (std::uint64_t{1} << 62) - 1;  // r < 2^254
    if (!field::limbs::geq(l, field::FrModulus::mod))
    {
      return Scalar{Fr::from_canonical(l)};
    }
  }
}

Scalar Scalar::pow(std::uint64_t e) const
{
  return Scalar{v_.pow(Limbs{e, 0, 0, 0})};
}

std::array<std::uint8_t, Scalar::kEncodedSize> Scalar::to_bytes() const
{
  std::array<std::uint8_t, kEncodedSize> out{};
  field::limbs::to_be_bytes(v_.to_canonical(), out);
  return out;
}

std::string Scalar::to_hex() const
{
  return ioracle::to_hex(to_bytes());
}

// ---------------------------------------------------------------- PointG1

PointG1 PointG1::generator()
{
  return detail_access::g1(Fp::from_u64(1), Fp::from_u64(2));
}

bool PointG1::on_curve() const
{
  if (infinity_)
  {
    return true;
  }
  return y_.square() == x_.square() * x_ + Fp::from_u64(3);
}

PointG1 PointG1::from_affine(Fp const &x, Fp const &y)
{
  PointG1 p{x, y, false};
  if (!p.on_curve())
  {
    throw Error(ErrorCode::InvalidEncoding, "point not on G1");
  }
  return p;
}

PointG1 PointG1::decode(std::span<std::uint8_t const> bytes)
{
  if (bytes.size() != kEncodedSize)
  {
    throw Error(ErrorCode::InvalidEncoding, "G1 encoding must be 64 bytes");
  }
  if (std::all_of(bytes.begin(), bytes.end(), [](std::uint8_t b) { return b == 0; }))
  {
    return identity();
  }
  return from_affine(get_fp(bytes.data()), get_fp(bytes.data() + 32));
}

PointG1 PointG1::random(Rng &rng)
{
  return generator() * Scalar::random(rng);
}

PointG1 PointG1::operator+(PointG1 const &o) const
{
  if (infinity_)
  {
    return o;
  }
  if (o.infinity_)
  {
    return *this;
  }
  return g1_from_jacobian(Jacobian<Fp>::from_affine(x_, y_).add_affine(o.x_, o.y_));
}

PointG1 PointG1::operator-() const
{
  if (infinity_)
  {
    return *this;
  }
  return PointG1{x_, -y_, false};
}

PointG1 PointG1::operator*(Scalar const &s) const
{
  if (infinity_)
  {
    return *this;
  }
  return g1_from_jacobian(mul_affine(x_, y_, s.to_limbs()));
}

std::array<std::uint8_t, PointG1::kEncodedSize> PointG1::encode() const
{
  std::array<std::uint8_t, kEncodedSize> out{};
  if (!infinity_)
  {
    put_fp(x_, out.data());
    put_fp(y_, out.data() + 32);
  }
  return out;
}

std::string PointG1::to_hex() const
{
  return ioracle::to_hex(encode());
}

// ---------------------------------------------------------------- PointG2

PointG2 PointG2::generator()
{
  static PointG2 const g = detail_access::g2(
      Fp2{fp_from_hex("1800deef121f1e76426a00665e5c4479674322d4f75edadd46debd5cd992f6ed"),
          fp_from_hex("198e9393920d483a7260bfb731fb5d25f1aa493335a9e71297e485b7aef312c2")},
      Fp2{fp_from_hex("12c85ea5db8c6deb4aab71808dcb408fe3d1e7690c43d37b4ce6cc0166fa7daa"),
          fp_from_hex("090689d0585ff075ec9e99ad690c3395bc4b313370b38ef355acdadcd122975b")});
  return g;
}

bool PointG2::on_curve() const
{
  if (infinity_)
  {
    return true;
  }
  return y_.square() == x_.square() * x_ + twist_b();
}

bool PointG2::in_subgroup() const
{
  if (infinity_)
  {
    return true;
  }
  return mul_affine(x_, y_, field::FrModulus::mod).inf;
}

PointG2 PointG2::from_affine(Fp2 const &x, Fp2 const &y)
{
  PointG2 p{x, y, false};
  if (!p.on_curve())
  {
    throw Error(ErrorCode::InvalidEncoding, "point not on the G2 twist");
  }
  if (!p.in_subgroup())
  {
    throw Error(ErrorCode::InvalidEncoding, "point not in the order-r subgroup of G2");
  }
  return p;
}

PointG2 PointG2::decode(std::span<std::uint8_t const> bytes)
{
  if (bytes.size() != kEncodedSize)
  {
    throw Error(ErrorCode::InvalidEncoding, "G2 encoding must be 128 bytes");
  }
  if (std::all_of(bytes.begin(), bytes.end(), [](std::uint8_t b) { return b == 0; }))
  {
    return identity();
  }
  Fp2 x{get_fp(bytes.data() + 32), get_fp(bytes.data())};
  Fp2 y{get_fp(bytes.data() + 96), get_fp(bytes.data() + 64)};
  return from_affine(x, y);
}

PointG2 PointG2::hash_to_curve(std::span<std::uint8_t const> message)
{
  Bytes buf(message.begin(), message.end());
  buf.push_back(0);
  Fp c0 = fp_from_digest(sha256(buf));
  buf.back() = 1;
  Fp c1      = fp_from_digest(sha256(buf));
  Fp2 x{c0, c1};

  // #E'(Fp2) = r * (2p - r)
  Limbs cofactor = field::FpModulus::mod;
  field::limbs::add(cofactor, field::FpModulus::mod);
  field::limbs::sub(cofactor, field::FrModulus::mod);

  for (std::uint32_t i = 0; i < kHashToCurveMaxIncrements; ++i)
  {
    Fp2 y;
    if (field::sqrt(x.square() * x + twist_b(), y))
    {
      PointG2 p = g2_from_jacobian(mul_affine(x, y, cofactor));
      if (!p.is_identity())
      {
        return p;
      }
    }
    x.c0 += Fp::one();
  }
  throw Error(ErrorCode::Internal, "hash to G2 exhausted its increment budget");
}

PointG2 PointG2::operator+(PointG2 const &o) const
{
  if (infinity_)
  {
    return o;
  }
  if (o.infinity_)
  {
    return *this;
  }
  return g2_from_jacobian(Jacobian<Fp2>::from_affine(x_, y_).add_affine(o.x_, o.y_));
}

PointG2 PointG2::operator-() const
{
  if (infinity_)
  {
    return *this;
  }
  return PointG2{x_, -y_, false};
}

PointG2 PointG2::operator*(Scalar const &s) const
{
  if (infinity_)
  {
    return *this;
  }
  return g2_from_jacobian(mul_affine(x_, y_, s.to_limbs()));
}

std::array<std::uint8_t, PointG2::kEncodedSize> PointG2::encode() const
{
  std::array<std::uint8_t, kEncodedSize> out{};
  if (!infinity_)
  {
    put_fp(x_.c1, out.data());
    put_fp(x_.c0, out.data() + 32);
    put_fp(y_.c1, out.data() + 64);
    put_fp(y_.c0, out.data() + 96);
  }
  return out;
}

std::string PointG2::to_hex() const
{
  return ioracle::to_hex(encode());
}

// ---------------------------------------------------------------- hashing

PointG1 hash_to_g1(std::span<std::uint8_t const> message)
{
  if (message.empty())
  {
    throw Error(ErrorCode::InvalidArgument, "cannot hash an empty message to G1");
  }
  Fp       x     = fp_from_digest(sha256(message));
  Fp const three = Fp::from_u64(3);
  for (std::uint32_t i = 0; i < kHashToCurveMaxIncrements; ++i)
  {
    Fp y;
    if (field::sqrt(x.square() * x + three, y))
    {
      Fp other = -y;
      return detail_access::g1(x, less_than(other, y) ? other : y);
    }
    x += Fp::one();
  }
  throw Error(ErrorCode::Internal, "hash to G1 exhausted its increment budget");
}

}  // namespace ioracle
