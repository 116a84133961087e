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

// Threshold BLS on top of DKG key shares. A share is x_i * H(m); any t shares
// with distinct indices interpolate to x * H(m) in the exponent.

#include "ioracle/bls.hpp"
#include "ioracle/dkg.hpp"

#include <cstdint>
#include <span>

namespace ioracle::tbls {

struct SignatureShare
{
  std::uint64_t index{0};
  PointG1       point;

  bool operator==(SignatureShare const &) const = default;
};

using Signature = bls::Signature;

SignatureShare sign_share(dkg::KeyShare const &key, std::span<std::uint8_t const> message);
SignatureShare sign_share(std::uint64_t index, Scalar const &secret, std::span<std::uint8_t const> message);

bool verify_share(SignatureShare const &share, std::span<std::uint8_t const> message,
                  PointG2 const &verification_key);

/// Interpolates the lowest-index t shares. Callers filter with verify_share
/// first. Throws Error(Threshold) / Error(DuplicateIndex).
Signature recover(std::span<SignatureShare const> shares, std::size_t t);

/// e(sigma, -G) * e(H(m), PK) == 1; the same check as a single-signer key.
using bls::verify;

}  // namespace ioracle::tbls
