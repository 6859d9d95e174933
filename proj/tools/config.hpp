// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace maxtev::cli
{

class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct RunConfig
{
  std::string command;  // mesh | solve | converge | verify | export
  std::string preset;
  std::string domain;
  std::vector<int> ns;  // one entry except for converge / verify
  int order = 0;
  std::string A = "two_I";
  std::string N = "sixteen_I";
  std::optional<std::pair<double, double>> k_window;
  std::optional<std::complex<double>> shift;
  int nev = 8;
  int count = 4;
  double tol = 1e-10;
  std::string out;  // empty: stdout
  std::string format;
  bool all = false;
  int max_n = 3;
  std::vector<std::string> properties;
  int index = 0;
  std::vector<std::string> matrices{"K", "M"};
  int pinned_vertex = -1;
  int threads = 0;
};

std::vector<std::string> CommandNames();
std::vector<std::string> PropertyNames();

nlohmann::json LoadConfigFile(const std::string &path);

// Top-level keys of `overrides` replace those of `base`.
nlohmann::json MergeConfig(nlohmann::json base, const nlohmann::json &overrides);

// Validates every key (unknown keys rejected) and resolves presets. Errors
// name the offending key path, e.g. "$.k_window[1]".
RunConfig ParseConfig(const nlohmann::json &j);

// "6..11", "6,7,9" or a single integer.
std::vector<int> ParseNList(const std::string &text);

}  // namespace maxtev::cli
