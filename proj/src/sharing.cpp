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

#include "ioracle/sharing.hpp"
#include "ioracle/error.hpp"

#include <algorithm>
#include <set>

namespace ioracle::sharing {

Polynomial::Polynomial(std::vector<Scalar> coefficients)
  : coefficients_(std::move(coefficients))
{
  if (coefficients_.empty())
  {
    throw Error(ErrorCode::InvalidArgument, "polynomial needs at least one coefficient");
  }
}

Polynomial Polynomial::random(Scalar const &secret, std::size_t t, Rng &rng)
{
  if (t == 0)
  {
    throw Error(ErrorCode::InvalidArgument, "threshold must be at least 1");
  }
  std::vector<Scalar> c;
  c.reserve(t);
  c.push_back(secret);
  for (std::size_t k = 1; k < t; ++k)
  {
    c.push_back(Scalar::random(rng));
  }
  return Polynomial{std::move(c)};
}

Scalar Polynomial::evaluate(Scalar const &x) const
{
  // Horner
  Scalar acc = coefficients_.back();
  for (std::size_t k = coefficients_.size() - 1; k-- > 0;)
  {
    acc = acc * x + coefficients_[k];
  }
  return acc;
}

Scalar Polynomial::evaluate(std::uint64_t x) const
{
  return evaluate(Scalar::from_u64(x));
}

PointG2 FeldmanCommitment::evaluate(std::uint64_t x) const
{
  PointG2 acc;
  Scalar  xs = Scalar::from_u64(x);
  Scalar  xk = Scalar::one();
  for (auto const &a : points)
  {
    acc = acc + a * xk;
    xk  = xk * xs;
  }
  return acc;
}

Bytes FeldmanCommitment::encode() const
{
  Bytes out;
  out.reserve(points.size() * PointG2::kEncodedSize);
  for (auto const &p : points)
  {
    auto e = p.encode();
    append(out, e);
  }
  return out;
}

std::pair<Polynomial, std::vector<Share>> deal(Scalar const &secret, std::size_t t, std::size_t n,
                                               Rng &rng)
{
  if (t == 0 || t > n)
  {
    throw Error(ErrorCode::InvalidArgument, "deal requires 1 <= t <= n");
  }
  Polynomial         f = Polynomial::random(secret, t, rng);
  std::vector<Share> shares;
  shares.reserve(n);
  for (std::uint64_t i = 1; i <= n; ++i)
  {
    shares.push_back(Share{i, f.evaluate(i)});
  }
  return {std::move(f), std::move(shares)};
}

std::vector<Scalar> lagrange_coefficients(std::span<std::uint64_t const> indices)
{
  std::set<std::uint64_t> seen;
  for (auto i : indices)
  {
    if (i == 0)
    {
      throw Error(ErrorCode::InvalidArgument, "share index 0 is reserved for the secret");
    }
    if (!seen.insert(i).second)
    {
      throw Error(ErrorCode::DuplicateIndex, "duplicate share index " + std::to_string(i));
    }
  }
  // lambda_i = prod_{j != i} x_j / (x_j - x_i)
  std::vector<Scalar> out;
  out.reserve(indices.size());
  for (auto i : indices)
  {
    Scalar num = Scalar::one();
    Scalar den = Scalar::one();
    Scalar xi  = Scalar::from_u64(i);
    for (auto j : indices)
    {
      if (j == i)
      {
        continue;
      }
      Scalar xj = Scalar::from_u64(j);
      num *= xj;
      den *= xj - xi;
    }
    out.push_back(num * den.inverse());
  }
  return out;
}

Scalar recover_secret(std::span<Share const> shares, std::size_t t)
{
  if (t == 0)
  {
    throw Error(ErrorCode::InvalidArgument, "threshold must be at least 1");
  }
  std::vector<Share> sorted(shares.begin(), shares.end());
  std::sort(sorted.begin(), sorted.end(), [](Share const &a, Share const &b) { return a.index < b.index; });
  for (std::size_t k = 1; k < sorted.size(); ++k)
  {
    if (sorted[k].index == sorted[k - 1].index)
    {
      throw Error(ErrorCode::DuplicateIndex, "duplicate share index " + std::to_string(sorted[k].index));
    }
  }
  if (sorted.size() < t)
  {
    throw Error(ErrorCode::Threshold, "need " + std::to_string(t) + " shares, got " + std::to_string(sorted.size()));
  }
  sorted.resize(t);

  std::vector<std::uint64_t> idx;
  idx.reserve(t);
  for (auto const &s : sorted)
  {
    idx.push_back(s.index);
  }
  auto   lambda = lagrange_coefficients(idx);
  Scalar acc;
  for (std::size_t k = 0; k < t; ++k)
  {
    acc += lambda[k] * sorted[k].value;
  }
  return acc;
}

FeldmanCommitment feldman_commit(Polynomial const &poly)
{
  FeldmanCommitment com;
  com.points.reserve(poly.threshold());
  PointG2 const g = PointG2::generator();
  for (auto const &a : poly.coefficients())
  {
    com.points.push_back(g * a);
  }
  return com;
}

bool feldman_verify(Share const &share, FeldmanCommitment const &com)
{
  if (com.points.empty() || share.index == 0)
  {
    return false;
  }
  return PointG2::generator() * share.value == com.evaluate(share.index);
}

PointG2 const &pedersen_generator()
{
  static PointG2 const h = [] {
    std::string_view tag = "pedersen-H";
    return PointG2::hash_to_curve(std::span(reinterpret_cast<std::uint8_t const *>(tag.data()), tag.size()));
  }();
  return h;
}

PedersenCommitment pedersen_commit(Polynomial const &poly, Polynomial const &blinding)
{
  if (poly.threshold() != blinding.threshold())
  {
    throw Error(ErrorCode::InvalidArgument, "blinding polynomial must have the same degree");
  }
  PedersenCommitment com;
  PointG2 const      g = PointG2::generator();
  PointG2 const     &h = pedersen_generator();
  for (std::size_t k = 0; k < poly.threshold(); ++k)
  {
    com.points.push_back(g * poly.coefficients()[k] + h * blinding.coefficients()[k]);
  }
  return com;
}

bool pedersen_verify(Share const &share, Share const &blind_share, PedersenCommitment const &com)
{
  if (com.points.empty() || share.index == 0 || share.index != blind_share.index)
  {
    return false;
  }
  PointG2 rhs;
  Scalar  xs = Scalar::from_u64(share.index);
  Scalar  xk = Scalar::one();
  for (auto const &c : com.points)
  {
    rhs = rhs + c * xk;
    xk  = xk * xs;
  }
  return PointG2::generator() * share.value + pedersen_generator() * blind_share.value == rhs;
}

}  // namespace ioracle::sharing
