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

#include "ioracle/ioracle.h"

#include "ioracle/costmodel.hpp"
#include "ioracle/dkg.hpp"
#include "ioracle/error.hpp"
#include "ioracle/simulator.hpp"
#include "ioracle/tbls.hpp"

#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <string>

struct ior_scenario
{
  ioracle::sim::Scenario scenario;
};

struct ior_run
{
  ioracle::sim::RunResult result;
};

struct ior_dkg
{
  ioracle::dkg::DkgConfig config;
  ioracle::dkg::LocalRun  run;
};

struct ior_cost
{
  ioracle::cost::CostParams params;
};

namespace {

thread_local std::string last_error;

ior_status fail(ior_status s, std::string msg)
{
  last_error = std::move(msg);
  return s;
}

// Runs `f`, mapping library exceptions onto status codes.
template <typename F>
ior_status guard(F &&f)
{
  try
  {
    last_error.clear();
    f();
    return IOR_OK;
  }
  catch (ioracle::Error const &e)
  {
    return fail(static_cast<ior_status>(static_cast<int>(e.code())), e.what());
  }
  catch (std::bad_alloc const &)
  {
    return fail(IOR_ERR_INTERNAL, "out of memory");
  }
  catch (std::exception const &e)
  {
    return fail(IOR_ERR_INTERNAL, e.what());
  }
}

char *dup(std::string const &s)
{
  auto *p = static_cast<char *>(std::malloc(s.size() + 1));
  if (p == nullptr)
  {
    throw std::bad_alloc();
  }
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void need(bool ok, char const *what)
{
  if (!ok)
  {
    throw ioracle::Error(ioracle::ErrorCode::InvalidArgument, what);
  }
}

}  // namespace

extern "C" {

const char *ior_version(void)
{
  return "0.1.0";
}

const char *ior_status_name(ior_status status)
{
  if (status == IOR_OK)
  {
    return "ok";
  }
  if (status < IOR_ERR_INVALID_ARGUMENT || status > IOR_ERR_INTERNAL)
  {
    return "unknown";
  }
  return ioracle::to_string(static_cast<ioracle::ErrorCode>(static_cast<int>(status)));
}

const char *ior_last_error(void)
{
  return last_error.c_str();
}

void ior_string_free(char *s)
{
  std::free(s);
}

// ---------------------------------------------------------------- simulator

ior_status ior_scenario_load(const char *path, ior_scenario **out)
{
  return guard([&] {
    need(path != nullptr && out != nullptr, "null argument");
    *out = new ior_scenario{ioracle::sim::load_scenario(path)};
  });
}

ior_status ior_scenario_parse(const char *yaml_text, const char *source_name, ior_scenario **out)
{
  return guard([&] {
    need(yaml_text != nullptr && out != nullptr, "null argument");
    *out = new ior_scenario{ioracle::sim::parse_scenario(yaml_text, source_name ? source_name : "<scenario>")};
  });
}

ior_status ior_scenario_set_seed(ior_scenario *scenario, uint64_t seed)
{
  return guard([&] {
    need(scenario != nullptr, "null scenario");
    scenario->scenario.seed = seed;
  });
}

uint64_t ior_scenario_seed(const ior_scenario *scenario)
{
  return scenario ? scenario->scenario.seed : 0;
}

void ior_scenario_free(ior_scenario *scenario)
{
  delete scenario;
}

ior_status ior_sim_run(const ior_scenario *scenario, ior_run **out)
{
  return guard([&] {
    need(scenario != nullptr && out != nullptr, "null argument");
    *out = new ior_run{ioracle::sim::run(scenario->scenario)};
  });
}

ior_status ior_run_report(const ior_run *run, ior_format format, char **out)
{
  return guard([&] {
    need(run != nullptr && out != nullptr, "null argument");
    auto const &m = run->result.metrics;
    switch (format)
    {
    case IOR_FORMAT_JSON:
      *out = dup(ioracle::sim::report_json(m));
      return;
    case IOR_FORMAT_TABLE:
      *out = dup(ioracle::sim::report_table(m));
      return;
    case IOR_FORMAT_CSV:
      *out = dup(ioracle::sim::report_csv(m));
      return;
    }
    need(false, "unknown report format");
  });
}

ior_status ior_run_transcript(const ior_run *run, char **out)
{
  return guard([&] {
    need(run != nullptr && out != nullptr, "null argument");
    *out = dup(run->result.transcript());
  });
}

ior_status ior_run_fulfilled(const ior_run *run, uint64_t *fulfilled, uint64_t *requested)
{
  return guard([&] {
    need(run != nullptr && fulfilled != nullptr && requested != nullptr, "null argument");
    *fulfilled = run->result.metrics.fulfilled();
    *requested = run->result.metrics.requests.size();
  });
}

void ior_run_free(ior_run *run)
{
  delete run;
}

// ---------------------------------------------------------------- dkg

ior_status ior_dkg_run(uint32_t n, uint32_t t, uint64_t seed, ior_dkg **out)
{
  return guard([&] {
    need(out != nullptr, "null argument");
    need(n >= 1 && n <= 64, "node count must be between 1 and 64");
    need(t >= 1 && t <= n, "threshold must satisfy 1 <= t <= n");
    ioracle::dkg::DkgConfig config;
    for (uint32_t i = 1; i <= n; ++i)
    {
      config.participants.push_back(i);
    }
    config.threshold = t;
    config.session   = 1;
    ioracle::Rng rng(seed);
    auto         run = ioracle::dkg::run_local(config, rng, t);
    if (run.keys.size() != n)
    {
      throw ioracle::Error(ioracle::ErrorCode::Internal, "honest run left a node without a key share");
    }
    *out = new ior_dkg{std::move(config), std::move(run)};
  });
}

uint32_t ior_dkg_node_count(const ior_dkg *dkg)
{
  return dkg ? static_cast<uint32_t>(dkg->config.participants.size()) : 0;
}

uint32_t ior_dkg_threshold(const ior_dkg *dkg)
{
  return dkg ? static_cast<uint32_t>(dkg->config.threshold) : 0;
}

ior_status ior_dkg_public_key(const ior_dkg *dkg, char **hex_out)
{
  return guard([&] {
    need(dkg != nullptr && hex_out != nullptr, "null argument");
    *hex_out = dup(dkg->run.keys.begin()->second.public_key.to_hex());
  });
}

ior_status ior_dkg_share_index(const ior_dkg *dkg, uint32_t pos, uint64_t *index_out)
{
  return guard([&] {
    need(dkg != nullptr && index_out != nullptr, "null argument");
    need(pos < dkg->config.participants.size(), "node position out of range");
    *index_out = dkg->run.keys.at(dkg->config.participants[pos]).index;
  });
}

ior_status ior_dkg_threshold_sign(const ior_dkg *dkg, const uint8_t *msg, size_t len, const uint32_t *signers,
                                  size_t signer_count, char **signature_hex, int *verified)
{
  return guard([&] {
    need(dkg != nullptr && msg != nullptr && signature_hex != nullptr && verified != nullptr, "null argument");
    need(len > 0, "message must not be empty");
    need(signers != nullptr || signer_count == 0, "null signer list");
    std::span<std::uint8_t const>             m(msg, len);
    std::vector<ioracle::tbls::SignatureShare> shares;
    for (size_t i = 0; i < signer_count; ++i)
    {
      need(signers[i] < dkg->config.participants.size(), "signer position out of range");
      auto const &key = dkg->run.keys.at(dkg->config.participants[signers[i]]);
      shares.push_back(ioracle::tbls::sign_share(key, m));
    }
    auto sig       = ioracle::tbls::recover(shares, dkg->config.threshold);
    auto const &pk = dkg->run.keys.begin()->second.public_key;
    *verified      = ioracle::tbls::verify(sig, m, pk) ? 1 : 0;
    *signature_hex = dup(sig.point.to_hex());
  });
}

ior_status ior_dkg_check_secret(const ior_dkg *dkg, int *matches)
{
  return guard([&] {
    need(dkg != nullptr && matches != nullptr, "null argument");
    std::vector<ioracle::sharing::Share> shares;
    for (auto const &[id, key] : dkg->run.keys)
    {
      shares.push_back({key.index, key.secret});
    }
    auto secret = ioracle::sharing::recover_secret(shares, dkg->config.threshold);
    *matches    = ioracle::PointG2::generator() * secret == dkg->run.keys.begin()->second.public_key ? 1 : 0;
  });
}

ior_status ior_dkg_transcript(const ior_dkg *dkg, char **out)
{
  return guard([&] {
    need(dkg != nullptr && out != nullptr, "null argument");
    ioracle::dkg::Transcript tr(dkg->config);
    for (auto const &d : dkg->run.deals)
    {
      tr.add_deal(d.record);
    }
    for (auto const &c : dkg->run.complaints)
    {
      tr.add_complaint(c);
    }
    *out = dup(tr.dump_json_lines(dkg->run.keys.begin()->second.public_key, dkg->run.qualified));
  });
}

void ior_dkg_free(ior_dkg *dkg)
{
  delete dkg;
}

// ---------------------------------------------------------------- cost

ior_status ior_cost_default(ior_cost **out)
{
  return guard([&] {
    need(out != nullptr, "null argument");
    *out = new ior_cost{ioracle::cost::calibrate(ioracle::cost::Constraints{})};
  });
}

ior_status ior_cost_load(const char *path, ior_cost **out)
{
  return guard([&] {
    need(path != nullptr && out != nullptr, "null argument");
    *out = new ior_cost{ioracle::cost::load_calibration(path)};
  });
}

ior_status ior_cost_gas(const ior_cost *cost, const char *mechanism, uint64_t n, int64_t *gas_out)
{
  return guard([&] {
    need(cost != nullptr && mechanism != nullptr && gas_out != nullptr, "null argument");
    *gas_out = ioracle::cost::cost(cost->params, ioracle::cost::parse_mechanism(mechanism), n);
  });
}

ior_status ior_cost_breakeven(const ior_cost *cost, const char *a, const char *b, uint64_t *n_out, int *never)
{
  return guard([&] {
    need(cost != nullptr && a != nullptr && b != nullptr && n_out != nullptr && never != nullptr, "null argument");
    auto r = ioracle::cost::breakeven(cost->params, ioracle::cost::parse_mechanism(a),
                                      ioracle::cost::parse_mechanism(b));
    *never = r ? 0 : 1;
    *n_out = r.value_or(0);
  });
}

ior_status ior_cost_table(const ior_cost *cost, uint64_t max_nodes, ior_format format, char **out)
{
  return guard([&] {
    need(cost != nullptr && out != nullptr, "null argument");
    auto rows = ioracle::cost::table(cost->params, max_nodes);
    switch (format)
    {
    case IOR_FORMAT_CSV:
      *out = dup(ioracle::cost::to_csv(rows));
      return;
    case IOR_FORMAT_TABLE:
      *out = dup(ioracle::cost::to_text_table(rows));
      return;
    case IOR_FORMAT_JSON: {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (auto const &r : rows)
      {
        arr.push_back({{"n", r.n}, {"on_chain", r.onchain}, {"ecdsa", r.ecdsa}, {"bls", r.bls}});
      }
      *out = dup(nlohmann::ordered_json{{"rows", arr}}.dump(2) + "\n");
      return;
    }
    }
    need(false, "unknown table format");
  });
}

void ior_cost_free(ior_cost *cost)
{
  delete cost;
}

}  // extern "C"
