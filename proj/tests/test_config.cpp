// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#include <string>

#include "config.hpp"
#include "doctest.h"

using maxtev::cli::ConfigError;
using maxtev::cli::ParseConfig;
using nlohmann::json;

namespace
{

std::string ErrorOf(const json &j)
{
  try
  {
    ParseConfig(j);
  }
  catch (const ConfigError &e)
  {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("n lists")
{
  using maxtev::cli::ParseNList;
  CHECK(ParseNList("6..11") == std::vector<int>{6, 7, 8, 9, 10, 11});
  CHECK(ParseNList("3,4,7") == std::vector<int>{3, 4, 7});
  CHECK(ParseNList("5") == std::vector<int>{5});
  CHECK_THROWS_AS(ParseNList("9..4"), ConfigError);
  CHECK_THROWS_AS(ParseNList("a"), ConfigError);
  CHECK_THROWS_AS(ParseNList(""), ConfigError);
}

TEST_CASE("presets fill the experiment and explicit keys override")
{
  const auto c = ParseConfig(json{{"command", "converge"}, {"preset", "table2-case3"}});
  CHECK(c.domain == "thickL");
  CHECK(c.order == 0);
  CHECK(c.A == "F4");
  CHECK(c.N == "F3");
  CHECK(c.ns == std::vector<int>{4, 5, 6, 7, 8, 9});
  REQUIRE(c.k_window.has_value());
  CHECK(c.k_window->first == 2.4);
  CHECK(c.format == "csv");

  const auto o = ParseConfig(json{{"command", "converge"}, {"preset", "table2-case3"}, {"n_list", "4..5"}});
  CHECK(o.ns == std::vector<int>{4, 5});
}

TEST_CASE("defaults per command")
{
  const auto s = ParseConfig(json{{"command", "solve"}, {"domain", "cube"}, {"n", 2}});
  CHECK(s.A == "two_I");
  CHECK(s.N == "sixteen_I");
  CHECK(s.format == "text");
  CHECK(s.nev == 8);
  const auto e = ParseConfig(json{{"command", "export"}, {"domain", "cube"}, {"n", 2}});
  CHECK(e.format == "vtk");
  const auto v = ParseConfig(json{{"command", "verify"}, {"all", true}});
  CHECK(v.all);
}

TEST_CASE("errors name the offending key")
{
  CHECK(ErrorOf(json{{"command", "solve"}, {"n", 2}}).find("missing required key 'domain'") != std::string::npos);
  CHECK(ErrorOf(json{{"command", "solve"}, {"domain", "cube"}, {"n", 2}, {"colour", 1}}).find("$.colour") !=
        std::string::npos);
  CHECK(ErrorOf(json{{"command", "solve"}, {"domain", "sphere"}, {"n", 2}}).find("$.domain") != std::string::npos);
  CHECK(ErrorOf(json{{"command", "solve"}, {"domain", "cube"}, {"n", 2}, {"k_window", {2.0, 1.0}}})
            .find("$.k_window[1]") != std::string::npos);
  CHECK(ErrorOf(json{{"command", "solve"}, {"domain", "cube"}, {"n", 2}, {"format", "vtk"}}).find("$.format") !=
        std::string::npos);
  CHECK(ErrorOf(json{{"command", "converge"}, {"preset", "table7-case1"}}).find("$.preset") != std::string::npos);
  CHECK(ErrorOf(json{{"command", "launch"}}).find("$.command") != std::string::npos);
}

TEST_CASE("inline coefficient matrices must be Hermitian")
{
  const json ok = {{1, 0, 0}, {0, 2, 0.5}, {0, 0.5, 3}};
  const auto c = ParseConfig(json{{"command", "solve"}, {"domain", "cube"}, {"n", 1}, {"A", ok}});
  CHECK(c.A.find(',') != std::string::npos);
  const json bad = {{1, 0, 0}, {0, 2, 0.5}, {0, 0.4, 3}};
  CHECK(ErrorOf(json{{"command", "solve"}, {"domain", "cube"}, {"n", 1}, {"A", bad}}).find("$.A") !=
        std::string::npos);
  CHECK(ErrorOf(json{{"command", "solve"}, {"domain", "cube"}, {"n", 1}, {"N", "F7"}}).find("$.N") !=
        std::string::npos);
}

TEST_CASE("merge replaces top-level keys")
{
  const json base = {{"command", "solve"}, {"domain", "cube"}, {"n", 2}, {"nev", 12}};
  const json merged = maxtev::cli::MergeConfig(base, json{{"n", 3}});
  CHECK(merged["n"] == 3);
  CHECK(merged["nev"] == 12);
}
