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

// Single-signer BLS: signatures in G1, public keys in G2.
//   verify: e(sigma, -G) * e(H(m), PK) == 1

#include "ioracle/group.hpp"

namespace ioracle::bls {

struct Signature
{
  PointG1 point;

  bool operator==(Signature const &) const = default;
};

Signature sign(Scalar const &secret, std::span<std::uint8_t const> message);
bool      verify(Signature const &sig, std::span<std::uint8_t const> message, PointG2 const &public_key);

/// Long-lived node identity, registered on-chain and used to authenticate DKG
/// traffic.
struct IdentityKey
{
  Scalar  secret;
  PointG2 public_key;

  static IdentityKey generate(Rng &rng);

  Signature sign(std::span<std::uint8_t const> message) const
  {
    return bls::sign(secret, message);
  }
};

}  // namespace ioracle::bls
