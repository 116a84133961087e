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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

using ioracle::Error;
using ioracle::ErrorCode;
using namespace ioracle::cost;

namespace {

// Linear scan; independent of the closed form in breakeven().
std::optional<std::uint64_t> scan_breakeven(CostParams const &p, Mechanism a, Mechanism b,
                                            std::uint64_t limit = 200000)
{
  for (std::uint64_t n = 1; n <= limit; ++n)
  {
    if (cost(p, a, n) < cost(p, b, n))
    {
      return n;
    }
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("measured anchors")
{
  CostParams p;
  CHECK(cost(p, Mechanism::Bls, 1) == 257607);
  for (std::uint64_t n : {2, 3, 4, 15, 16, 100, 1000})
  {
    CHECK(cost(p, Mechanism::Bls, n) == 257607);
  }
  CHECK(cost(p, Mechanism::Bls, 3) == cost(p, Mechanism::Bls, 100));
  CHECK(cost(p, Mechanism::Relay, 100) == 28404100);

  double const bls110 = 110.0 * static_cast<double>(cost(p, Mechanism::Bls, 1));
  CHECK(bls110 == 28336770.0);
  CHECK(std::abs(bls110 - 28404100.0) / 28404100.0 < 0.005);

  CHECK(p.bls_submit_sd == 21671);
  CHECK(p.relay_header_sd == 3679);
  CHECK(p.bls_box.median == 255779);
  CHECK(p.bls_box.lower_quartile == 245712.5);
  CHECK(p.bls_box.upper_quartile == 270834.5);
  CHECK(p.bls_box.lower_whisker == 230979);
  CHECK(p.bls_box.upper_whisker == 357977);
}

TEST_CASE("default calibration reproduces the crossovers")
{
  CostParams p = calibrate(Constraints{});
  CHECK(breakeven(p, Mechanism::Bls, Mechanism::OnChain) == std::optional<std::uint64_t>(4));
  CHECK(breakeven(p, Mechanism::Bls, Mechanism::Ecdsa) == std::optional<std::uint64_t>(16));
  CHECK(scan_breakeven(p, Mechanism::Bls, Mechanism::OnChain) == std::optional<std::uint64_t>(4));
  CHECK(scan_breakeven(p, Mechanism::Bls, Mechanism::Ecdsa) == std::optional<std::uint64_t>(16));

  // strictly cheaper from the crossover on, never below it
  for (std::uint64_t n = 1; n <= 500; ++n)
  {
    CHECK((cost(p, Mechanism::Bls, n) < cost(p, Mechanism::OnChain, n)) == (n >= 4));
    CHECK((cost(p, Mechanism::Bls, n) < cost(p, Mechanism::Ecdsa, n)) == (n >= 16));
  }
  CHECK(p.onchain_base + 4 * p.onchain_per_node > 257607);
  CHECK(p.onchain_base + 3 * p.onchain_per_node < 257607);
  CHECK(p.ecdsa_base + 16 * p.ecdsa_per_signature > 257607);
  CHECK(p.ecdsa_base + 15 * p.ecdsa_per_signature < 257607);
}

TEST_CASE("breakeven agrees with a linear scan")
{
  std::mt19937_64 gen(99);
  std::uniform_int_distribution<Gas> base(0, 400000), slope(0, 90000);
  Mechanism const all[] = {Mechanism::OnChain, Mechanism::Ecdsa, Mechanism::Bls, Mechanism::Relay};
  for (int trial = 0; trial < 200; ++trial)
  {
    CostParams p;
    p.onchain_base        = base(gen);
    p.onchain_per_node    = slope(gen);
    p.ecdsa_base          = base(gen);
    p.ecdsa_per_signature = slope(gen);
    p.bls_submit_mean     = base(gen);
    p.relay_header_mean   = slope(gen);
    for (auto a : all)
    {
      for (auto b : all)
      {
        INFO(to_string(a) << " vs " << to_string(b));
        CHECK(breakeven(p, a, b) == scan_breakeven(p, a, b));
      }
    }
  }
}

TEST_CASE("never cheaper is explicit")
{
  CostParams p;
  CHECK_FALSE(breakeven(p, Mechanism::OnChain, Mechanism::OnChain).has_value());
  CHECK_FALSE(breakeven(p, Mechanism::Bls, Mechanism::Bls).has_value());
  // on-chain grows faster and starts above BLS only later: never cheaper
  // than BLS once BLS has overtaken it
  CHECK(breakeven(p, Mechanism::OnChain, Mechanism::Bls) == std::optional<std::uint64_t>(1));
  CHECK_FALSE(breakeven(p, Mechanism::Relay, Mechanism::Relay).has_value());
}

TEST_CASE("cost errors")
{
  CostParams p;
  CHECK_THROWS_MATCHES(cost(p, Mechanism::Bls, 0), Error, Catch::Matchers::Predicate<Error>([](Error const &e) {
                         return e.code() == ErrorCode::InvalidArgument;
                       }));
  CHECK_THROWS_AS(parse_mechanism("quantum"), Error);
  CHECK(parse_mechanism("onchain") == Mechanism::OnChain);
  CHECK(parse_mechanism("on-chain") == Mechanism::OnChain);
  CHECK(parse_mechanism("relay") == Mechanism::Relay);
  CHECK_THROWS_AS(table(p, 0), Error);
  p.ecdsa_base = -1;
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("calibration with anchors")
{
  SECTION("ECDSA base above the BLS mean, crossover at one")
  {
    Constraints c;
    c.ecdsa_crossover = 1;
    c.ecdsa_base      = 300000;
    CostParams p      = calibrate(c);
    CHECK(p.ecdsa_base == 300000);
    CHECK(scan_breakeven(p, Mechanism::Bls, Mechanism::Ecdsa) == std::optional<std::uint64_t>(1));
  }
  SECTION("anchor that rules out the default slope")
  {
    Constraints c;
    c.onchain_base = 100000;
    CostParams p   = calibrate(c);
    CHECK(p.onchain_base == 100000);
    CHECK(p.onchain_per_node != 70000);
    CHECK(scan_breakeven(p, Mechanism::Bls, Mechanism::OnChain) == std::optional<std::uint64_t>(4));
    CHECK(scan_breakeven(p, Mechanism::Bls, Mechanism::Ecdsa) == std::optional<std::uint64_t>(16));
  }
  SECTION("slope anchor moves the base")
  {
    Constraints c;
    c.ecdsa_per_signature = 10000;
    CostParams p          = calibrate(c);
    CHECK(p.ecdsa_per_signature == 10000);
    CHECK(scan_breakeven(p, Mechanism::Bls, Mechanism::Ecdsa) == std::optional<std::uint64_t>(16));
  }
  SECTION("contradictory anchors")
  {
    Constraints c;
    c.onchain_base     = 300000;  // above BLS already at n = 1
    c.onchain_per_node = 1000;
    CHECK_THROWS_MATCHES(calibrate(c), Error, Catch::Matchers::Predicate<Error>([](Error const &e) {
                           return e.code() == ErrorCode::Infeasible;
                         }));
    Constraints d;
    d.onchain_base = 300000;  // cannot leave BLS more expensive at n = 3
    CHECK_THROWS_AS(calibrate(d), Error);
    Constraints z;
    z.ecdsa_crossover = 0;
    CHECK_THROWS_AS(calibrate(z), Error);
  }
}

TEST_CASE("calibration file")
{
  SECTION("empty file keeps the defaults")
  {
    auto p = parse_calibration("");
    CHECK(breakeven(p, Mechanism::Bls, Mechanism::OnChain) == std::optional<std::uint64_t>(4));
  }
  SECTION("pinned model recomputes the crossover")
  {
    auto p = parse_calibration("onchain_base: 0\nonchain_per_node: 100000\n");
    CHECK(p.onchain_per_node == 100000);
    CHECK(breakeven(p, Mechanism::Bls, Mechanism::OnChain) == scan_breakeven(p, Mechanism::Bls, Mechanism::OnChain));
    CHECK(breakeven(p, Mechanism::Bls, Mechanism::OnChain) == std::optional<std::uint64_t>(3));
    CHECK(breakeven(p, Mechanism::Bls, Mechanism::Ecdsa) == std::optional<std::uint64_t>(16));
  }
  SECTION("new crossover target")
  {
    auto p = parse_calibration("ecdsa_crossover: 10\n");
    CHECK(scan_breakeven(p, Mechanism::Bls, Mechanism::Ecdsa) == std::optional<std::uint64_t>(10));
  }
  SECTION("bad input")
  {
    CHECK_THROWS_AS(parse_calibration("onchain_slope: 3\n"), Error);
    CHECK_THROWS_AS(parse_calibration("- 1\n- 2\n"), Error);
    CHECK_THROWS_AS(parse_calibration("ecdsa_base: lots\n"), Error);
    CHECK_THROWS_AS(load_calibration("/nonexistent/calibration.yaml"), Error);
  }
}

TEST_CASE("table output")
{
  CostParams p;
  auto       rows = table(p, 1);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].n == 1);
  CHECK(rows[0].onchain == p.onchain_base + p.onchain_per_node);

  rows     = table(p, 20);
  auto csv = to_csv(rows);
  CHECK(csv.rfind("n,on_chain,ecdsa,bls\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 21);
  CHECK(csv.find("\n16,1160000,270000,257607\n") != std::string::npos);
  auto txt = to_text_table(rows);
  CHECK(std::count(txt.begin(), txt.end(), '\n') == 21);
}
