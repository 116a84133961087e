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

// Gas model for comparing result-submission mechanisms. On-chain voting and
// ECDSA multi-signature verification grow linearly with the number of oracle
// nodes; a threshold BLS submission costs the same for any n; the relay
// baseline pays per block header.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ioracle::cost {

using Gas = std::int64_t;

enum class Mechanism
{
  OnChain,
  Ecdsa,
  Bls,
  Relay,
};

char const *to_string(Mechanism m);
/// Accepts "on-chain", "onchain", "ecdsa", "bls", "relay". Throws
/// Error(UnknownMechanism).
Mechanism parse_mechanism(std::string_view name);

struct BoxPlot
{
  double median{255779};
  double lower_quartile{245712.5};
  double upper_quartile{270834.5};
  double lower_whisker{230979};
  double upper_whisker{357977};
};

struct CostParams
{
  Gas     bls_submit_mean{257607};
  double  bls_submit_sd{21671};
  BoxPlot bls_box;
  Gas     relay_header_mean{284041};
  double  relay_header_sd{3679};

  // Calibration outputs, not measured values.
  Gas onchain_base{40000};
  Gas onchain_per_node{70000};
  Gas ecdsa_base{30000};
  Gas ecdsa_per_signature{15000};

  /// Throws Error(InvalidArgument) for negative constants.
  void validate() const;
};

/// Gas for one result with `n` oracle nodes (for Relay: `n` block headers).
/// Throws Error(InvalidArgument) for n == 0.
Gas cost(CostParams const &p, Mechanism m, std::uint64_t n);

/// Smallest n >= 1 with cost(a, n) < cost(b, n); nullopt if a is never
/// cheaper.
std::optional<std::uint64_t> breakeven(CostParams const &p, Mechanism a, Mechanism b);

struct Constraints
{
  // BLS becomes strictly cheaper at exactly this n; unset means unconstrained.
  std::optional<std::uint64_t> onchain_crossover{4};
  std::optional<std::uint64_t> ecdsa_crossover{16};

  std::optional<Gas> onchain_base;
  std::optional<Gas> onchain_per_node;
  std::optional<Gas> ecdsa_base;
  std::optional<Gas> ecdsa_per_signature;
};

/// Fills in the linear model constants. Defaults are kept whenever they
/// satisfy the constraints; otherwise the smallest feasible integer is used.
/// Throws Error(Infeasible) when anchors and crossovers contradict.
CostParams calibrate(Constraints const &c, CostParams base = {});

/// Reads a calibration override file (YAML mapping). Recognised keys:
/// bls_submit_mean, bls_submit_sd, relay_header_mean, relay_header_sd,
/// onchain_base, onchain_per_node, ecdsa_base, ecdsa_per_signature,
/// onchain_crossover, ecdsa_crossover. A model whose base and slope are both
/// given is taken as-is unless its crossover is also given.
/// Throws Error(Io) / Error(Scenario) / Error(Infeasible).
CostParams load_calibration(std::string const &path);
CostParams parse_calibration(std::string const &yaml_text);

struct Row
{
  std::uint64_t n{0};
  Gas           onchain{0};
  Gas           ecdsa{0};
  Gas           bls{0};
};

std::vector<Row> table(CostParams const &p, std::uint64_t max_nodes);
std::string      to_csv(std::vector<Row> const &rows);
std::string      to_text_table(std::vector<Row> const &rows);

}  // namespace ioracle::cost
