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

#include "ioracle/bls.hpp"

namespace ioracle::bls {

Signature sign(Scalar const &secret, std::span<std::uint8_t const> message)
{
  return Signature{hash_to_g1(message) * secret};
}

bool verify(Signature const &sig, std::span<std::uint8_t const> message, PointG2 const &public_key)
{
  if (message.empty())
  {
    return false;
  }
  return pairing_check({{sig.point, -PointG2::generator()}, {hash_to_g1(message), public_key}});
}

IdentityKey IdentityKey::generate(Rng &rng)
{
  Scalar sk = Scalar::random(rng);
  return IdentityKey{sk, PointG2::generator() * sk};
}

}  // namespace ioracle::bls
