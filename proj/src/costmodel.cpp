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

#include "ioracle/costmodel.hpp"
#include "ioracle/error.hpp"

#include <yaml-cpp/yaml.h>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ioracle::cost {

namespace {

struct Affine
{
  Gas base{0};
  Gas slope{0};
};

Affine model(CostParams const &p, Mechanism m)
{
  switch (m)
  {
  case Mechanism::OnChain:
    return {p.onchain_base, p.onchain_per_node};
  case Mechanism::Ecdsa:
    return {p.ecdsa_base, p.ecdsa_per_signature};
  case Mechanism::Bls:
    return {p.bls_submit_mean, 0};
  case Mechanism::Relay:
    return {0, p.relay_header_mean};
  }
  throw Error(ErrorCode::UnknownMechanism, "unknown mechanism");
}

// Solves for the linear model (base, slope) such that BLS (constant `bls`) is
// strictly cheaper exactly from n = k on:
//   base + (k-1) * slope <= bls   and   base + k * slope > bls.
Affine fit(std::optional<std::uint64_t> k, std::optional<Gas> base, std::optional<Gas> slope, Affine def, Gas bls,
           char const *what)
{
  auto ok = [&](Gas b, Gas s) {
    if (b < 0 || s < 0)
    {
      return false;
    }
    if (!k)
    {
      return true;
    }
    Gas const kk = static_cast<Gas>(*k);
    // n = 0 is not a deployment size: a crossover at 1 only needs BLS cheaper at n = 1
    return (kk == 1 || b + (kk - 1) * s <= bls) && b + kk * s > bls;
  };
  auto fail = [&] {
    throw Error(ErrorCode::Infeasible, std::string("no ") + what + " model satisfies the calibration constraints");
  };

  if (k && *k == 0)
  {
    fail();
  }
  if (base && slope)
  {
    if (!ok(*base, *slope))
    {
      fail();
    }
    return {*base, *slope};
  }
  if (base)
  {
    if (ok(*base, def.slope))
    {
      return {*base, def.slope};
    }
    // base + k*s > bls  =>  s > (bls - base) / k
    Gas const kk = static_cast<Gas>(k.value_or(1));
    Gas       s  = bls - *base < 0 ? 0 : (bls - *base) / kk + 1;
    if (!ok(*base, s))
    {
      fail();
    }
    return {*base, s};
  }
  if (slope)
  {
    if (ok(def.base, *slope))
    {
      return {def.base, *slope};
    }
    Gas const kk = static_cast<Gas>(k.value_or(1));
    Gas       b  = bls - kk * *slope + 1;
    b            = b < 0 ? 0 : b;
    if (!ok(b, *slope))
    {
      fail();
    }
    return {b, *slope};
  }
  if (ok(def.base, def.slope))
  {
    return def;
  }
  // Keep the default base and search for a slope.
  return fit(k, def.base, std::nullopt, def, bls, what);
}

template <typename T>
std::optional<T> opt(YAML::Node const &n, char const *key)
{
  if (!n[key])
  {
    return std::nullopt;
  }
  try
  {
    return n[key].as<T>();
  }
  catch (YAML::Exception const &e)
  {
    throw Error(ErrorCode::Scenario, std::string("calibration key '") + key + "': " + e.what());
  }
}

}  // namespace

char const *to_string(Mechanism m)
{
  switch (m)
  {
  case Mechanism::OnChain:
    return "on-chain";
  case Mechanism::Ecdsa:
    return "ecdsa";
  case Mechanism::Bls:
    return "bls";
  case Mechanism::Relay:
    return "relay";
  }
  return "?";
}

Mechanism parse_mechanism(std::string_view name)
{
  if (name == "on-chain" || name == "onchain")
  {
    return Mechanism::OnChain;
  }
  if (name == "ecdsa")
  {
    return Mechanism::Ecdsa;
  }
  if (name == "bls")
  {
    return Mechanism::Bls;
  }
  if (name == "relay")
  {
    return Mechanism::Relay;
  }
  throw Error(ErrorCode::UnknownMechanism, "unknown mechanism '" + std::string(name) + "'");
}

void CostParams::validate() const
{
  if (bls_submit_mean < 0 || bls_submit_sd < 0 || relay_header_mean < 0 || relay_header_sd < 0 ||
      onchain_base < 0 || onchain_per_node < 0 || ecdsa_base < 0 || ecdsa_per_signature < 0)
  {
    throw Error(ErrorCode::InvalidArgument, "cost parameters must be non-negative");
  }
}

Gas cost(CostParams const &p, Mechanism m, std::uint64_t n)
{
  if (n == 0)
  {
    throw Error(ErrorCode::InvalidArgument, "cost needs n >= 1");
  }
  Affine a = model(p, m);
  return a.base + a.slope * static_cast<Gas>(n);
}

std::optional<std::uint64_t> breakeven(CostParams const &p, Mechanism a, Mechanism b)
{
  Affine const ma = model(p, a), mb = model(p, b);
  // a cheaper iff d0 + d1 * n < 0
  Gas const d0 = ma.base - mb.base;
  Gas const d1 = ma.slope - mb.slope;
  if (d0 + d1 < 0)
  {
    return 1;
  }
  if (d1 >= 0)
  {
    return std::nullopt;
  }
  // smallest n with n * (-d1) > d0
  return static_cast<std::uint64_t>(d0 / -d1 + 1);
}

CostParams calibrate(Constraints const &c, CostParams base)
{
  base.validate();
  Affine on = fit(c.onchain_crossover, c.onchain_base, c.onchain_per_node,
                  {base.onchain_base, base.onchain_per_node}, base.bls_submit_mean, "on-chain");
  Affine ec = fit(c.ecdsa_crossover, c.ecdsa_base, c.ecdsa_per_signature,
                  {base.ecdsa_base, base.ecdsa_per_signature}, base.bls_submit_mean, "ECDSA");
  base.onchain_base        = on.base;
  base.onchain_per_node    = on.slope;
  base.ecdsa_base          = ec.base;
  base.ecdsa_per_signature = ec.slope;
  return base;
}

CostParams parse_calibration(std::string const &yaml_text)
{
  YAML::Node root;
  try
  {
    root = YAML::Load(yaml_text);
  }
  catch (YAML::Exception const &e)
  {
    throw Error(ErrorCode::Scenario, std::string("calibration file: ") + e.what());
  }
  if (root.IsNull())
  {
    return calibrate(Constraints{});
  }
  if (!root.IsMap())
  {
    throw Error(ErrorCode::Scenario, "calibration file must be a mapping");
  }
  static char const *const known[] = {"bls_submit_mean",   "bls_submit_sd",   "relay_header_mean",
                                      "relay_header_sd",   "onchain_base",    "onchain_per_node",
                                      "ecdsa_base",        "ecdsa_per_signature", "onchain_crossover",
                                      "ecdsa_crossover"};
  for (auto const &kv : root)
  {
    auto key   = kv.first.as<std::string>();
    bool found = false;
    for (auto const *k : known)
    {
      found = found || key == k;
    }
    if (!found)
    {
      throw Error(ErrorCode::Scenario, "calibration file: unknown key '" + key + "'");
    }
  }

  CostParams p;
  p.bls_submit_mean   = opt<Gas>(root, "bls_submit_mean").value_or(p.bls_submit_mean);
  p.bls_submit_sd     = opt<double>(root, "bls_submit_sd").value_or(p.bls_submit_sd);
  p.relay_header_mean = opt<Gas>(root, "relay_header_mean").value_or(p.relay_header_mean);
  p.relay_header_sd   = opt<double>(root, "relay_header_sd").value_or(p.relay_header_sd);

  Constraints c;
  c.onchain_base        = opt<Gas>(root, "onchain_base");
  c.onchain_per_node    = opt<Gas>(root, "onchain_per_node");
  c.ecdsa_base          = opt<Gas>(root, "ecdsa_base");
  c.ecdsa_per_signature = opt<Gas>(root, "ecdsa_per_signature");
  auto on_x             = opt<std::uint64_t>(root, "onchain_crossover");
  auto ec_x             = opt<std::uint64_t>(root, "ecdsa_crossover");
  c.onchain_crossover   = on_x ? on_x : (c.onchain_base && c.onchain_per_node ? std::nullopt : c.onchain_crossover);
  c.ecdsa_crossover     = ec_x ? ec_x : (c.ecdsa_base && c.ecdsa_per_signature ? std::nullopt : c.ecdsa_crossover);
  return calibrate(c, p);
}

CostParams load_calibration(std::string const &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw Error(ErrorCode::Io, "cannot open calibration file '" + path + "'");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_calibration(ss.str());
}

std::vector<Row> table(CostParams const &p, std::uint64_t max_nodes)
{
  if (max_nodes == 0)
  {
    throw Error(ErrorCode::InvalidArgument, "cost table needs at least one row");
  }
  std::vector<Row> rows;
  for (std::uint64_t n = 1; n <= max_nodes; ++n)
  {
    rows.push_back({n, cost(p, Mechanism::OnChain, n), cost(p, Mechanism::Ecdsa, n), cost(p, Mechanism::Bls, n)});
  }
  return rows;
}

std::string to_csv(std::vector<Row> const &rows)
{
  std::string out = "n,on_chain,ecdsa,bls\n";
  for (auto const &r : rows)
  {
    out += std::to_string(r.n) + "," + std::to_string(r.onchain) + "," + std::to_string(r.ecdsa) + "," +
           std::to_string(r.bls) + "\n";
  }
  return out;
}

std::string to_text_table(std::vector<Row> const &rows)
{
  std::string out;
  char        line[128];
  std::snprintf(line, sizeof line, "%6s %14s %14s %14s\n", "n", "on-chain", "ecdsa", "bls");
  out += line;
  for (auto const &r : rows)
  {
    std::snprintf(line, sizeof line, "%6llu %14lld %14lld %14lld\n", static_cast<unsigned long long>(r.n),
                  static_cast<long long>(r.onchain), static_cast<long long>(r.ecdsa), static_cast<long long>(r.bls));
    out += line;
  }
  return out;
}

}  // namespace ioracle::cost
