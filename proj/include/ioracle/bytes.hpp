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

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ioracle {

using Bytes  = std::vector<std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;

Digest sha256(std::span<std::uint8_t const> data);
Digest sha256(std::string_view data);

std::string to_hex(std::span<std::uint8_t const> data);
Bytes       from_hex(std::string_view hex);  // throws Error(InvalidArgument)

Bytes to_bytes(std::string_view s);

void append_u64_be(Bytes &out, std::uint64_t v);
void append(Bytes &out, std::span<std::uint8_t const> data);

std::uint64_t read_u64_be(std::span<std::uint8_t const> data);

}  // namespace ioracle
