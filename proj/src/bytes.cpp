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

#include "ioracle/bytes.hpp"
#include "ioracle/error.hpp"

#include <openssl/sha.h>

namespace ioracle {

char const *to_string(ErrorCode code)
{
  switch (code)
  {
  case ErrorCode::InvalidArgument:
    return "invalid argument";
  case ErrorCode::InvalidEncoding:
    return "invalid encoding";
  case ErrorCode::DomainError:
    return "domain error";
  case ErrorCode::Threshold:
    return "threshold not met";
  case ErrorCode::DuplicateIndex:
    return "duplicate index";
  case ErrorCode::NotParticipant:
    return "not a participant";
  case ErrorCode::DuplicateDealer:
    return "duplicate dealer";
  case ErrorCode::SessionFailed:
    return "session failed";
  case ErrorCode::Scenario:
    return "scenario error";
  case ErrorCode::Infeasible:
    return "infeasible";
  case ErrorCode::UnknownMechanism:
    return "unknown mechanism";
  case ErrorCode::Io:
    return "i/o error";
  case ErrorCode::Internal:
    return "internal error";
  }
  return "unknown error";
}

Digest sha256(std::span<std::uint8_t const> data)
{
  Digest out{};
  SHA256(data.data(), data.size(), out.data());
  return out;
}

Digest sha256(std::string_view data)
{
  Digest out{};
  SHA256(reinterpret_cast<unsigned char const *>(data.data()), data.size(), out.data());
  return out;
}

std::string to_hex(std::span<std::uint8_t const> data)
{
  static constexpr char digits[] = "0123456789abcdef";
  std::string           out;
  out.reserve(data.size() * 2);
  for (auto b : data)
  {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0x0f]);
  }
  return out;
}

namespace {

int nibble(char c)
{
  if (c >= '0' && c <= '9')
  {
    return c - '0';
  }
  if (c >= 'a' && c <= 'f')
  {
    return c - 'a' + 10;
  }
  if (c >= 'A' && c <= 'F')
  {
    return c - 'A' + 10;
  }
  return -1;
}

}  // namespace

Bytes from_hex(std::string_view hex)
{
  if (hex.starts_with("0x") || hex.starts_with("0X"))
  {
    hex.remove_prefix(2);
  }
  if (hex.size() % 2 != 0)
  {
    throw Error(ErrorCode::InvalidArgument, "hex string must have even length");
  }
  Bytes out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2)
  {
    int hi = nibble(hex[i]);
    int lo = nibble(hex[i + 1]);
    if (hi < 0 || lo < 0)
    {
      throw Error(ErrorCode::InvalidArgument, "invalid hex digit");
    }
    out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
  }
  return out;
}

Bytes to_bytes(std::string_view s)
{
  return Bytes(s.begin(), s.end());
}

void append_u64_be(Bytes &out, std::uint64_t v)
{
  for (int i = 7; i >= 0; --i)
  {
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
}

void append(Bytes &out, std::span<std::uint8_t const> data)
{
  out.insert(out.end(), data.begin(), data.end());
}

std::uint64_t read_u64_be(std::span<std::uint8_t const> data)
{
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < 8 && i < data.size(); ++i)
  {
    v = (v << 8) | data[i];
  }
  return v;
}

}  // namespace ioracle
