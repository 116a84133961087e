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

#include "ioracle/tbls.hpp"
#include "ioracle/error.hpp"
#include "ioracle/sharing.hpp"

#include <algorithm>

namespace ioracle::tbls {

SignatureShare sign_share(dkg::KeyShare const &key, std::span<std::uint8_t const> message)
{
  return sign_share(key.index, key.secret, message);
}

SignatureShare sign_share(std::uint64_t index, Scalar const &secret, std::span<std::uint8_t const> message)
{
  if (message.empty())
  {
    throw Error(ErrorCode::InvalidArgument, "cannot sign an empty message");
  }
  return SignatureShare{index, hash_to_g1(message) * secret};
}

bool verify_share(SignatureShare const &share, std::span<std::uint8_t const> message,
                  PointG2 const &verification_key)
{
  if (share.index == 0 || !share.point.on_curve())
  {
    return false;
  }
  return bls::verify(bls::Signature{share.point}, message, verification_key);
}

Signature recover(std::span<SignatureShare const> shares, std::size_t t)
{
  if (t == 0)
  {
    throw Error(ErrorCode::InvalidArgument, "threshold must be at least 1");
  }
  std::vector<SignatureShare> sorted(shares.begin(), shares.end());
  std::sort(sorted.begin(), sorted.end(),
            [](SignatureShare const &a, SignatureShare const &b) { return a.index < b.index; });
  for (std::size_t k = 1; k < sorted.size(); ++k)
  {
    if (sorted[k].index == sorted[k - 1].index)
    {
      throw Error(ErrorCode::DuplicateIndex, "duplicate signature share index " + std::to_string(sorted[k].index));
    }
  }
  if (sorted.size() < t)
  {
    throw Error(ErrorCode::Threshold,
                "need " + std::to_string(t) + " signature shares, got " + std::to_string(sorted.size()));
  }
  sorted.resize(t);

  std::vector<std::uint64_t> idx;
  for (auto const &s : sorted)
  {
    idx.push_back(s.index);
  }
  auto    lambda = sharing::lagrange_coefficients(idx);
  PointG1 acc;
  for (std::size_t k = 0; k < t; ++k)
  {
    acc = acc + sorted[k].point * lambda[k];
  }
  return Signature{acc};
}

}  // namespace ioracle::tbls
