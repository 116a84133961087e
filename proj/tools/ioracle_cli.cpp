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

// Command-line front end. Talks to the library only through the C API.
// Exit codes: 0 success, 2 bad input (usage, scenario, calibration), 1 other
// failures. Diagnostics go to stderr; data to stdout or --out.

#include "ioracle/ioracle.h"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kOk       = 0;
constexpr int kInternal = 1;
constexpr int kInput    = 2;

struct Failure
{
  int         code;
  std::string message;
};

int exit_code_for(ior_status s)
{
  switch (s)
  {
  case IOR_OK:
    return kOk;
  case IOR_ERR_INVALID_ARGUMENT:
  case IOR_ERR_SCENARIO:
  case IOR_ERR_INFEASIBLE:
  case IOR_ERR_UNKNOWN_MECHANISM:
  case IOR_ERR_IO:
  case IOR_ERR_THRESHOLD:
    return kInput;
  default:
    return kInternal;
  }
}

void check(ior_status s)
{
  if (s != IOR_OK)
  {
    throw Failure{exit_code_for(s), std::string(ior_status_name(s)) + ": " + ior_last_error()};
  }
}

struct CString
{
  char *p{nullptr};
  ~CString()
  {
    ior_string_free(p);
  }
  std::string str() const
  {
    return p ? std::string(p) : std::string();
  }
};

template <typename T, void (*Free)(T *)>
struct Handle
{
  T *p{nullptr};
  ~Handle()
  {
    Free(p);
  }
};

ior_format parse_format(std::string const &f)
{
  if (f == "json")
  {
    return IOR_FORMAT_JSON;
  }
  if (f == "table")
  {
    return IOR_FORMAT_TABLE;
  }
  return IOR_FORMAT_CSV;
}

void emit(std::string const &data, std::string const &out)
{
  if (out.empty())
  {
    std::cout << data;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f || !(f << data))
  {
    throw Failure{kInput, "cannot write '" + out + "'"};
  }
}

// A bare name is looked up in $IORACLE_SCENARIO_DIR when it is not a file.
std::string resolve_scenario(std::string const &arg)
{
  namespace fs = std::filesystem;
  if (fs::exists(arg))
  {
    return arg;
  }
  if (char const *dir = std::getenv("IORACLE_SCENARIO_DIR"))
  {
    for (auto const &candidate : {fs::path(dir) / arg, fs::path(dir) / (arg + ".yaml")})
    {
      if (fs::exists(candidate))
      {
        return candidate.string();
      }
    }
  }
  return arg;
}

std::string json_escape(std::string const &s)
{
  std::string out;
  for (char c : s)
  {
    switch (c)
    {
    case '"':
      out += "\\\"";
      break;
    case '\\':
      out += "\\\\";
      break;
    case '\n':
      out += "\\n";
      break;
    default:
      if (static_cast<unsigned char>(c) < 0x20)
      {
        char buf[8];
        std::snprintf(buf, sizeof buf, "\\u%04x", c);
        out += buf;
      }
      else
      {
        out += c;
      }
    }
  }
  return out;
}

struct SimArgs
{
  std::string                scenario;
  std::optional<std::uint64_t> seed;
  std::string                out;
  std::string                format{"json"};
  std::string                transcript;
};

int sim_run(SimArgs const &a)
{
  auto path = resolve_scenario(a.scenario);
  Handle<ior_scenario, ior_scenario_free> sc;
  check(ior_scenario_load(path.c_str(), &sc.p));
  if (a.seed)
  {
    check(ior_scenario_set_seed(sc.p, *a.seed));
  }
  Handle<ior_run, ior_run_free> run;
  check(ior_sim_run(sc.p, &run.p));
  CString report;
  check(ior_run_report(run.p, parse_format(a.format), &report.p));
  emit(report.str(), a.out);
  if (!a.transcript.empty())
  {
    CString tr;
    check(ior_run_transcript(run.p, &tr.p));
    emit(tr.str(), a.transcript);
  }
  return kOk;
}

struct DkgArgs
{
  std::uint32_t nodes{5};
  std::uint32_t threshold{3};
  std::uint64_t seed{1};
  std::string   message{"ioracle demo message"};
  std::string   format{"table"};
  std::string   transcript;
};

int dkg_demo(DkgArgs const &a)
{
  if (a.threshold < 1 || a.threshold > a.nodes || a.nodes > 64)
  {
    throw Failure{kInput, "need 1 <= threshold <= nodes <= 64"};
  }
  Handle<ior_dkg, ior_dkg_free> dkg;
  check(ior_dkg_run(a.nodes, a.threshold, a.seed, &dkg.p));
  CString pk;
  check(ior_dkg_public_key(dkg.p, &pk.p));
  std::vector<std::uint64_t> indices(a.nodes);
  for (std::uint32_t i = 0; i < a.nodes; ++i)
  {
    check(ior_dkg_share_index(dkg.p, i, &indices[i]));
  }
  // Sign with the last t nodes so the demo does not always use the same
  // subset the secret check interpolates from.
  std::vector<std::uint32_t> signers;
  for (std::uint32_t i = a.nodes - a.threshold; i < a.nodes; ++i)
  {
    signers.push_back(i);
  }
  CString sig;
  int     verified = 0;
  check(ior_dkg_threshold_sign(dkg.p, reinterpret_cast<std::uint8_t const *>(a.message.data()), a.message.size(),
                               signers.data(), signers.size(), &sig.p, &verified));
  int matches = 0;
  check(ior_dkg_check_secret(dkg.p, &matches));

  std::string out;
  if (a.format == "json")
  {
    out += "{\n  \"nodes\": " + std::to_string(a.nodes) + ",\n  \"threshold\": " + std::to_string(a.threshold) +
           ",\n  \"public_key\": \"" + pk.str() + "\",\n  \"shares\": [";
    for (std::uint32_t i = 0; i < a.nodes; ++i)
    {
      out += std::string(i ? ", " : "") + "{\"node\": " + std::to_string(i + 1) +
             ", \"index\": " + std::to_string(indices[i]) + "}";
    }
    out += "],\n  \"message\": \"" + json_escape(a.message) + "\",\n  \"signers\": [";
    for (std::size_t i = 0; i < signers.size(); ++i)
    {
      out += std::string(i ? ", " : "") + std::to_string(signers[i] + 1);
    }
    out += "],\n  \"signature\": \"" + sig.str() + "\",\n  \"verified\": " + (verified ? "true" : "false") +
           ",\n  \"secret_matches_public_key\": " + (matches ? "true" : "false") + "\n}\n";
  }
  else
  {
    out += "nodes " + std::to_string(a.nodes) + "  threshold " + std::to_string(a.threshold) + "\n";
    out += "public key " + pk.str() + "\n";
    for (std::uint32_t i = 0; i < a.nodes; ++i)
    {
      out += "  node " + std::to_string(i + 1) + "  share index " + std::to_string(indices[i]) + "\n";
    }
    out += "message \"" + a.message + "\" signed by nodes";
    for (auto s : signers)
    {
      out += " " + std::to_string(s + 1);
    }
    out += "\nsignature " + sig.str() + "\n";
    out += std::string("verification ") + (verified ? "succeeded" : "FAILED") + "\n";
    out += std::string("interpolated secret * G equals public key: ") + (matches ? "yes" : "NO") + "\n";
  }
  emit(out, "");
  if (!a.transcript.empty())
  {
    CString tr;
    check(ior_dkg_transcript(dkg.p, &tr.p));
    emit(tr.str(), a.transcript);
  }
  return verified && matches ? kOk : kInternal;
}

struct CostArgs
{
  std::uint64_t max_nodes{20};
  std::string   calibration;
  std::string   format{"csv"};
  std::string   out;
};

void load_cost(CostArgs const &a, Handle<ior_cost, ior_cost_free> &c)
{
  if (a.calibration.empty())
  {
    check(ior_cost_default(&c.p));
  }
  else
  {
    check(ior_cost_load(a.calibration.c_str(), &c.p));
  }
}

int cost_table(CostArgs const &a)
{
  Handle<ior_cost, ior_cost_free> c;
  load_cost(a, c);
  CString t;
  check(ior_cost_table(c.p, a.max_nodes, parse_format(a.format), &t.p));
  emit(t.str(), a.out);
  return kOk;
}

int cost_breakeven(CostArgs const &a)
{
  Handle<ior_cost, ior_cost_free> c;
  load_cost(a, c);
  std::vector<std::pair<std::string, std::string>> pairs = {{"on-chain", "on_chain"}, {"ecdsa", "ecdsa"}};
  std::string out = a.format == "json" ? "{\n  \"breakeven\": {" : (a.format == "csv" ? "versus,n\n" : "");
  for (std::size_t i = 0; i < pairs.size(); ++i)
  {
    std::uint64_t n     = 0;
    int           never = 0;
    check(ior_cost_breakeven(c.p, "bls", pairs[i].first.c_str(), &n, &never));
    std::string v = never ? "never" : std::to_string(n);
    if (a.format == "json")
    {
      out += std::string(i ? ", " : "") + "\"" + pairs[i].second + "\": " + (never ? "null" : v);
    }
    else if (a.format == "csv")
    {
      out += pairs[i].first + "," + v + "\n";
    }
    else
    {
      out += "bls cheaper than " + pairs[i].first + " from n = " + v + "\n";
    }
  }
  if (a.format == "json")
  {
    out += "}\n}\n";
  }
  emit(out, a.out);
  return kOk;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"ioracle: threshold-signature oracle simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ior_version()));

  auto *sim = app.add_subcommand("sim", "run simulation scenarios");
  sim->require_subcommand(1);
  SimArgs sim_args;
  auto   *sim_run_cmd = sim->add_subcommand("run", "run a scenario and print its report");
  sim_run_cmd->add_option("scenario", sim_args.scenario, "scenario file or name in $IORACLE_SCENARIO_DIR")
      ->required();
  sim_run_cmd->add_option("--seed", sim_args.seed, "override the scenario seed");
  sim_run_cmd->add_option("--out", sim_args.out, "write the report here instead of stdout");
  sim_run_cmd->add_option("--format", sim_args.format, "report format")
      ->check(CLI::IsMember({"json", "table", "csv"}));
  sim_run_cmd->add_option("--transcript", sim_args.transcript, "also write the JSON-lines transcript here");

  auto *dkg = app.add_subcommand("dkg", "distributed key generation");
  dkg->require_subcommand(1);
  DkgArgs dkg_args;
  auto   *demo = dkg->add_subcommand("demo", "generate a key and threshold-sign one message");
  demo->add_option("--nodes,-n", dkg_args.nodes, "number of nodes (1..64)");
  demo->add_option("--threshold,-t", dkg_args.threshold, "signature threshold (1..nodes)");
  demo->add_option("--seed", dkg_args.seed, "random seed");
  demo->add_option("--message", dkg_args.message, "message to sign");
  demo->add_option("--format", dkg_args.format, "output format")->check(CLI::IsMember({"json", "table"}));
  demo->add_option("--transcript", dkg_args.transcript, "write the DKG transcript (JSON lines) here");

  auto *cost = app.add_subcommand("cost", "gas cost model");
  cost->require_subcommand(1);
  CostArgs cost_args;
  auto    *table = cost->add_subcommand("table", "gas per result for n = 1..N");
  table->add_option("--max-nodes", cost_args.max_nodes, "largest n")->check(CLI::PositiveNumber);
  table->add_option("--calibration", cost_args.calibration, "calibration override file");
  table->add_option("--format", cost_args.format, "output format")->check(CLI::IsMember({"json", "table", "csv"}));
  table->add_option("--out", cost_args.out, "write here instead of stdout");
  auto *be = cost->add_subcommand("breakeven", "smallest n at which BLS is cheaper");
  be->add_option("--calibration", cost_args.calibration, "calibration override file");
  be->add_option("--format", cost_args.format, "output format")->check(CLI::IsMember({"json", "table", "csv"}));
  be->add_option("--out", cost_args.out, "write here instead of stdout");
  cost_args.format = "csv";

  try
  {
    app.parse(argc, argv);
  }
  catch (CLI::CallForHelp const &e)
  {
    return app.exit(e);
  }
  catch (CLI::CallForVersion const &e)
  {
    return app.exit(e);
  }
  catch (CLI::ParseError const &e)
  {
    app.exit(e);
    return kInput;
  }

  try
  {
    if (sim_run_cmd->parsed())
    {
      return sim_run(sim_args);
    }
    if (demo->parsed())
    {
      return dkg_demo(dkg_args);
    }
    if (table->parsed())
    {
      return cost_table(cost_args);
    }
    if (be->parsed())
    {
      if (be->count("--format") == 0)
      {
        cost_args.format = "table";
      }
      return cost_breakeven(cost_args);
    }
  }
  catch (Failure const &f)
  {
    std::cerr << "ioracle: " << f.message << "\n";
    return f.code;
  }
  catch (std::exception const &e)
  {
    std::cerr << "ioracle: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
