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

#include <stdexcept>
#include <string>

namespace ioracle {

enum class ErrorCode
{
  InvalidArgument = 1,  // parameter outside its documented domain
  InvalidEncoding,      // bytes do not decode to a valid group element
  DomainError,          // arithmetic undefined (e.g. inverse of zero)
  Threshold,            // too few shares / participants
  DuplicateIndex,
  NotParticipant,
  DuplicateDealer,
  SessionFailed,        // DKG qualified set below the validator threshold
  Scenario,             // scenario file missing, unparsable or inconsistent
  Infeasible,           // cost calibration constraints have no solution
  UnknownMechanism,
  Io,
  Internal,
};

char const *to_string(ErrorCode code);

class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, std::string const &what)
    : std::runtime_error(what)
    , code_(code)
  {}

  ErrorCode code() const noexcept
  {
    return code_;
  }

private:
  ErrorCode code_;
};

}  // namespace ioracle
