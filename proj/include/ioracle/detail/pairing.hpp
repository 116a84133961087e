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

// Internal pairing stages, exposed so tests can cross-check the optimised
// final exponentiation against the plain one.

#include "ioracle/group.hpp"

namespace ioracle::detail {

field::Fp12 miller_loop_single(PointG1 const &p, PointG2 const &q);
field::Fp12 final_exponentiation_fast(field::Fp12 const &f);
field::Fp12 final_exponentiation_reference(field::Fp12 const &f);

}  // namespace ioracle::detail
