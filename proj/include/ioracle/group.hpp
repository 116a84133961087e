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

// Bilinear group over alt_bn128: Scalar (mod r), PointG1 on y^2 = x^3 + 3 over
// Fp, PointG2 on the D-type sextic twist over Fp2, and the optimal ate pairing.
// All types are immutable values.

#include "ioracle/bytes.hpp"
#include "ioracle/field.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ioracle {

/// Deterministic random source. Same seed, same sequence, on every platform.
class Rng
{
public:
  explicit Rng(std::uint64_t seed)
    : seed_(seed)
    , engine_(seed)
  {}

  std::uint64_t next()
  {
    return engine_();
  }

  /// Uniform integer in [0, bound).
  std::uint64_t uniform(std::uint64_t bound);

  /// Derive an independent stream, e.g. one per simulated node. Depends only
  /// on the construction seed and `salt`, not on how much has been drawn.
  Rng fork(std::uint64_t salt) const;

private:
  std::uint64_t   seed_;
  std::mt19937_64 engine_;
};

class Scalar
{
public:
  static constexpr std::size_t kEncodedSize = 32;

  Scalar() = default;

  static Scalar zero()
  {
    return Scalar{};
  }
  static Scalar one()
  {
    return Scalar{field::Fr::one()};
  }
  static Scalar from_u64(std::uint64_t v)
  {
    return Scalar{field::Fr::from_u64(v)};
  }
  /// Big-endian bytes interpreted as an integer and reduced modulo r.
  static Scalar from_digest(Digest const &d);
  /// Strict decoding: rejects values >= r.
  static Scalar from_bytes(std::span<std::uint8_t const> bytes);
  /// Uniform over [0, r) by rejection sampling.
  static Scalar random(Rng &rng);

  Scalar operator+(Scalar const &o) const
  {
    return Scalar{v_ + o.v_};
  }
  Scalar operator-(Scalar const &o) const
  {
    return Scalar{v_ - o.v_};
  }
  Scalar operator*(Scalar const &o) const
  {
    return Scalar{v_ * o.v_};
  }
  Scalar operator-() const
  {
    return Scalar{-v_};
  }
  Scalar &operator+=(Scalar const &o)
  {
    v_ += o.v_;
    return *this;
  }
  Scalar &operator*=(Scalar const &o)
  {
    v_ *= o.v_;
    return *this;
  }
  bool operator==(Scalar const &) const = default;

  /// Throws Error(DomainError) for zero.
  Scalar inverse() const
  {
    return Scalar{v_.inverse()};
  }
  Scalar pow(std::uint64_t e) const;

  bool is_zero() const
  {
    return v_.is_zero();
  }

  std::array<std::uint8_t, kEncodedSize> to_bytes() const;
  std::string                            to_hex() const;
  field::Limbs                           to_limbs() const
  {
    return v_.to_canonical();
  }

private:
  explicit Scalar(field::Fr v)
    : v_(v)
  {}

  field::Fr v_;
};

class PointG1
{
public:
  static constexpr std::size_t kEncodedSize = 64;

  /// Identity element.
  PointG1() = default;

  static PointG1 generator();
  static PointG1 identity()
  {
    return PointG1{};
  }
  /// Validates curve membership; throws Error(InvalidEncoding) otherwise.
  static PointG1 from_affine(field::Fp const &x, field::Fp const &y);
  /// 32-byte big-endian x || 32-byte big-endian y; 64 zero bytes = identity.
  static PointG1 decode(std::span<std::uint8_t const> bytes);
  /// Uniform random point (random multiple of the generator).
  static PointG1 random(Rng &rng);

  PointG1 operator+(PointG1 const &o) const;
  PointG1 operator-() const;
  PointG1 operator-(PointG1 const &o) const
  {
    return *this + (-o);
  }
  PointG1 operator*(Scalar const &s) const;
  bool    operator==(PointG1 const &) const = default;

  bool is_identity() const
  {
    return infinity_;
  }
  bool on_curve() const;

  field::Fp const &x() const
  {
    return x_;
  }
  field::Fp const &y() const
  {
    return y_;
  }

  std::array<std::uint8_t, kEncodedSize> encode() const;
  std::string                            to_hex() const;

private:
  friend class detail_access;
  PointG1(field::Fp x, field::Fp y, bool inf)
    : x_(x)
    , y_(y)
    , infinity_(inf)
  {}

  field::Fp x_;
  field::Fp y_;
  bool      infinity_{true};
};

class PointG2
{
public:
  static constexpr std::size_t kEncodedSize = 128;

  PointG2() = default;

  static PointG2 generator();
  static PointG2 identity()
  {
    return PointG2{};
  }
  /// Validates twist-curve membership and the order-r subgroup.
  static PointG2 from_affine(field::Fp2 const &x, field::Fp2 const &y);
  /// x.c1 || x.c0 || y.c1 || y.c0, each 32-byte big-endian (EIP-197 order);
  /// 128 zero bytes = identity. Subgroup membership is enforced.
  static PointG2 decode(std::span<std::uint8_t const> bytes);
  /// Try-and-increment onto the twist followed by cofactor clearing; the
  /// discrete log of the result relative to the generator is unknown.
  static PointG2 hash_to_curve(std::span<std::uint8_t const> message);

  PointG2 operator+(PointG2 const &o) const;
  PointG2 operator-() const;
  PointG2 operator-(PointG2 const &o) const
  {
    return *this + (-o);
  }
  PointG2 operator*(Scalar const &s) const;
  bool    operator==(PointG2 const &) const = default;

  bool is_identity() const
  {
    return infinity_;
  }
  bool on_curve() const;
  bool in_subgroup() const;

  field::Fp2 const &x() const
  {
    return x_;
  }
  field::Fp2 const &y() const
  {
    return y_;
  }

  std::array<std::uint8_t, kEncodedSize> encode() const;
  std::string                            to_hex() const;

private:
  friend class detail_access;
  PointG2(field::Fp2 x, field::Fp2 y, bool inf)
    : x_(x)
    , y_(y)
    , infinity_(inf)
  {}

  field::Fp2 x_;
  field::Fp2 y_;
  bool       infinity_{true};
};

/// Maximum number of increments before hash_to_g1 gives up.
constexpr std::uint32_t kHashToCurveMaxIncrements = 1u << 16;

/// x = SHA-256(message) mod p; increment x until x^3 + 3 is a square; take the
/// numerically smaller root as y. Throws Error(InvalidArgument) for an empty
/// message and Error(Internal) if the increment budget is exhausted.
PointG1 hash_to_g1(std::span<std::uint8_t const> message);

inline PointG1 hash_to_g1(std::string_view message)
{
  auto const *p = reinterpret_cast<std::uint8_t const *>(message.data());
  return hash_to_g1(std::span<std::uint8_t const>(p, message.size()));
}

/// True iff prod e(a_i, b_i) == 1 in the target group. Throws
/// Error(InvalidArgument) for an empty list.
bool pairing_check(std::span<std::pair<PointG1, PointG2> const> pairs);

inline bool pairing_check(std::initializer_list<std::pair<PointG1, PointG2>> pairs)
{
  return pairing_check(std::span<std::pair<PointG1, PointG2> const>(pairs.begin(), pairs.size()));
}

/// Full reduced pairing value, exposed for bilinearity tests.
field::Fp12 pairing(PointG1 const &p, PointG2 const &q);

}  // namespace ioracle
