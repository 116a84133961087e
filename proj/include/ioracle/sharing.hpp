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

// Shamir secret sharing over the scalar field, with Feldman and Pedersen
// commitments in G2. Evaluation points are 1..n.

#include "ioracle/group.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace ioracle::sharing {

/// f(x) = a_0 + a_1 x + ... + a_{t-1} x^{t-1}; a_0 is the secret.
class Polynomial
{
public:
  explicit Polynomial(std::vector<Scalar> coefficients);

  /// Random polynomial of degree t-1 with the given constant term.
  static Polynomial random(Scalar const &secret, std::size_t t, Rng &rng);

  Scalar evaluate(std::uint64_t x) const;
  Scalar evaluate(Scalar const &x) const;

  std::size_t threshold() const
  {
    return coefficients_.size();
  }
  Scalar const &secret() const
  {
    return coefficients_.front();
  }
  std::vector<Scalar> const &coefficients() const
  {
    return coefficients_;
  }

private:
  std::vector<Scalar> coefficients_;
};

struct Share
{
  std::uint64_t index{0};
  Scalar        value;

  bool operator==(Share const &) const = default;
};

struct FeldmanCommitment
{
  std::vector<PointG2> points;  // A_k = a_k * G

  bool operator==(FeldmanCommitment const &) const = default;

  /// sum_k A_k * x^k: the public image of f(x).
  PointG2 evaluate(std::uint64_t x) const;
  Bytes   encode() const;
};

struct PedersenCommitment
{
  std::vector<PointG2> points;  // C_k = a_k * G + b_k * H

  bool operator==(PedersenCommitment const &) const = default;
};

/// Splits `secret` into n shares with threshold t. Throws
/// Error(InvalidArgument) unless 1 <= t <= n.
std::pair<Polynomial, std::vector<Share>> deal(Scalar const &secret, std::size_t t, std::size_t n,
                                               Rng &rng);

/// Lagrange coefficients at x = 0 for the given distinct nonzero indices.
std::vector<Scalar> lagrange_coefficients(std::span<std::uint64_t const> indices);

/// Recovers f(0) from the t lowest-index shares. Throws Error(Threshold) for
/// fewer than t shares and Error(DuplicateIndex) for repeated indices.
Scalar recover_secret(std::span<Share const> shares, std::size_t t);

FeldmanCommitment feldman_commit(Polynomial const &poly);
bool              feldman_verify(Share const &share, FeldmanCommitment const &com);

/// Fixed second generator; derived by hashing a domain tag onto G2.
PointG2 const &pedersen_generator();

PedersenCommitment pedersen_commit(Polynomial const &poly, Polynomial const &blinding);
bool pedersen_verify(Share const &share, Share const &blind_share, PedersenCommitment const &com);

}  // namespace ioracle::sharing
