// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "maxtev/maxtev.h"

namespace maxtev::cli
{

using nlohmann::json;

namespace
{

const std::set<std::string> kKeys = {
    "command", "preset",    "domain", "n",          "n_list", "order",      "A",          "N",
    "k_window", "shift",    "nev",    "count",      "tol",    "out",        "format",     "all",
    "max_n",   "properties", "index", "matrices",   "pinned_vertex", "threads"};

[[noreturn]] void Fail(const std::string &path, const std::string &what)
{
  throw ConfigError(path + ": " + what);
}

int GetInt(const json &v, const std::string &path, int lo, int hi)
{
  if (!v.is_number_integer())
  {
    Fail(path, "expected an integer");
  }
  const long long x = v.get<long long>();
  if (x < lo || x > hi)
  {
    Fail(path, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return static_cast<int>(x);
}

double GetNumber(const json &v, const std::string &path)
{
  if (!v.is_number())
  {
    Fail(path, "expected a number");
  }
  const double x = v.get<double>();
  if (!std::isfinite(x))
  {
    Fail(path, "must be finite");
  }
  return x;
}

std::string GetString(const json &v, const std::string &path)
{
  if (!v.is_string())
  {
    Fail(path, "expected a string");
  }
  return v.get<std::string>();
}

std::string Choice(const json &v, const std::string &path, const std::vector<std::string> &allowed)
{
  const std::string s = GetString(v, path);
  if (std::find(allowed.begin(), allowed.end(), s) == allowed.end())
  {
    std::string list;
    for (const auto &a : allowed)
    {
      list += (list.empty() ? "" : ", ") + a;
    }
    Fail(path, "'" + s + "' is not one of " + list);
  }
  return s;
}

// String spec, or a 3x3 array of reals.
std::string GetCoefficient(const json &v, const std::string &path)
{
  std::string spec;
  if (v.is_string())
  {
    spec = v.get<std::string>();
  }
  else if (v.is_array())
  {
    if (v.size() != 3)
    {
      Fail(path, "expected 3 rows");
    }
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < 3; ++i)
    {
      const std::string row = path + "[" + std::to_string(i) + "]";
      if (!v[i].is_array() || v[i].size() != 3)
      {
        Fail(row, "expected 3 entries");
      }
      for (std::size_t k = 0; k < 3; ++k)
      {
        os << (i + k ? "," : "") << GetNumber(v[i][k], row + "[" + std::to_string(k) + "]");
      }
    }
    spec = os.str();
  }
  else
  {
    Fail(path, "expected a coefficient name or a 3x3 array");
  }
  if (maxtev_coefficient_validate(spec.c_str()) != MAXTEV_OK)
  {
    Fail(path, maxtev_last_error());
  }
  return spec;
}

std::vector<int> GetNList(const json &v, const std::string &path)
{
  std::vector<int> ns;
  if (v.is_string())
  {
    try
    {
      ns = ParseNList(v.get<std::string>());
    }
    catch (const ConfigError &e)
    {
      Fail(path, e.what());
    }
  }
  else if (v.is_array())
  {
    for (std::size_t i = 0; i < v.size(); ++i)
    {
      ns.push_back(GetInt(v[i], path + "[" + std::to_string(i) + "]", 1, 256));
    }
  }
  else
  {
    Fail(path, "expected an array of integers or a range string like \"6..11\"");
  }
  if (ns.empty())
  {
    Fail(path, "must not be empty");
  }
  if (ns.size() > MAXTEV_MAX_NS)
  {
    Fail(path, "too many entries");
  }
  for (std::size_t i = 1; i < ns.size(); ++i)
  {
    if (ns[i] <= ns[i - 1])
    {
      Fail(path, "must be strictly increasing");
    }
  }
  return ns;
}

std::pair<double, double> GetWindow(const json &v, const std::string &path)
{
  if (!v.is_array() || v.size() != 2)
  {
    Fail(path, "expected [lo, hi]");
  }
  const double lo = GetNumber(v[0], path + "[0]");
  const double hi = GetNumber(v[1], path + "[1]");
  if (lo < 0.0)
  {
    Fail(path + "[0]", "must be >= 0");
  }
  if (hi <= lo)
  {
    Fail(path + "[1]", "must exceed the lower bound");
  }
  return {lo, hi};
}

std::complex<double> GetShift(const json &v, const std::string &path)
{
  if (v.is_number())
  {
    return {GetNumber(v, path), 0.0};
  }
  if (v.is_array() && v.size() == 2)
  {
    return {GetNumber(v[0], path + "[0]"), GetNumber(v[1], path + "[1]")};
  }
  if (v.is_string())
  {
    std::string s = v.get<std::string>();
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream is(s);
    double re = 0.0, im = 0.0;
    if (!(is >> re))
    {
      Fail(path, "expected \"re\" or \"re,im\"");
    }
    is >> im;
    std::string rest;
    if (is >> rest)
    {
      Fail(path, "expected \"re\" or \"re,im\"");
    }
    return {re, im};
  }
  Fail(path, "expected a number, [re, im] or \"re,im\"");
}

std::vector<std::string> GetStringList(const json &v, const std::string &path, const std::vector<std::string> &allowed)
{
  std::vector<std::string> out;
  if (v.is_string())
  {
    std::string s = v.get<std::string>();
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream is(s);
    std::string item;
    while (is >> item)
    {
      out.push_back(Choice(json(item), path, allowed));
    }
  }
  else if (v.is_array())
  {
    for (std::size_t i = 0; i < v.size(); ++i)
    {
      out.push_back(Choice(v[i], path + "[" + std::to_string(i) + "]", allowed));
    }
  }
  else
  {
    Fail(path, "expected a list");
  }
  if (out.empty())
  {
    Fail(path, "must not be empty");
  }
  return out;
}

}  // namespace

std::vector<std::string> CommandNames() { return {"mesh", "solve", "converge", "verify", "export"}; }

std::vector<std::string> PropertyNames()
{
  return {"t_coercivity_a", "t_coercivity_c", "discrete_poincare", "source_consistency", "matrix_identities"};
}

json LoadConfigFile(const std::string &path)
{
  std::ifstream is(path);
  if (!is)
  {
    throw ConfigError(path + ": cannot open config file");
  }
  try
  {
    json j = json::parse(is);
    if (!j.is_object())
    {
      throw ConfigError(path + ": $: expected a JSON object");
    }
    return j;
  }
  catch (const json::parse_error &e)
  {
    throw ConfigError(path + ": " + e.what());
  }
}

json MergeConfig(json base, const json &overrides)
{
  if (base.is_null())
  {
    base = json::object();
  }
  for (const auto &[key, value] : overrides.items())
  {
    base[key] = value;
  }
  return base;
}

std::vector<int> ParseNList(const std::string &text)
{
  std::vector<int> ns;
  auto to_int = [&](const std::string &s) {
    std::size_t used = 0;
    int v = 0;
    try
    {
      v = std::stoi(s, &used);
    }
    catch (const std::exception &)
    {
      throw ConfigError("invalid integer '" + s + "'");
    }
    if (used != s.size() || v < 1 || v > 256)
    {
      throw ConfigError("invalid mesh size '" + s + "'");
    }
    return v;
  };
  const auto dots = text.find("..");
  if (dots != std::string::npos)
  {
    const int a = to_int(text.substr(0, dots));
    const int b = to_int(text.substr(dots + 2));
    if (b < a)
    {
      throw ConfigError("empty range '" + text + "'");
    }
    for (int n = a; n <= b; ++n)
    {
      ns.push_back(n);
    }
    return ns;
  }
  std::string s = text;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream is(s);
  std::string item;
  while (is >> item)
  {
    ns.push_back(to_int(item));
  }
  if (ns.empty())
  {
    throw ConfigError("empty n list");
  }
  return ns;
}

RunConfig ParseConfig(const json &j)
{
  if (!j.is_object())
  {
    Fail("$", "expected a JSON object");
  }
  for (const auto &[key, value] : j.items())
  {
    if (!kKeys.count(key))
    {
      Fail("$." + key, "unknown key");
    }
  }
  RunConfig c;
  if (!j.contains("command"))
  {
    Fail("$", "missing required key 'command'");
  }
  c.command = Choice(j["command"], "$.command", CommandNames());

  bool have_domain = false;
  if (j.contains("preset"))
  {
    c.preset = GetString(j["preset"], "$.preset");
    maxtev_experiment e;
    if (maxtev_experiment_preset(c.preset.c_str(), &e) != MAXTEV_OK)
    {
      Fail("$.preset", maxtev_last_error());
    }
    c.domain = e.domain;
    c.order = e.order;
    c.A = e.A;
    c.N = e.N;
    c.ns.assign(e.ns, e.ns + e.n_count);
    c.k_window = std::make_pair(e.k_lo, e.k_hi);
    have_domain = true;
  }
  if (j.contains("domain"))
  {
    c.domain = Choice(j["domain"], "$.domain", {"cube", "thickL"});
    have_domain = true;
  }
  if (j.contains("n") && j.contains("n_list"))
  {
    Fail("$.n", "give either 'n' or 'n_list', not both");
  }
  if (j.contains("n"))
  {
    c.ns = {GetInt(j["n"], "$.n", 1, 256)};
  }
  if (j.contains("n_list"))
  {
    c.ns = GetNList(j["n_list"], "$.n_list");
  }
  if (j.contains("order"))
  {
    c.order = GetInt(j["order"], "$.order", 0, 1);
  }
  if (j.contains("A"))
  {
    c.A = GetCoefficient(j["A"], "$.A");
  }
  if (j.contains("N"))
  {
    c.N = GetCoefficient(j["N"], "$.N");
  }
  if (j.contains("k_window"))
  {
    c.k_window = GetWindow(j["k_window"], "$.k_window");
  }
  if (j.contains("shift"))
  {
    c.shift = GetShift(j["shift"], "$.shift");
  }
  if (j.contains("nev"))
  {
    c.nev = GetInt(j["nev"], "$.nev", 1, 512);
  }
  if (j.contains("count"))
  {
    c.count = GetInt(j["count"], "$.count", 1, MAXTEV_MAX_COUNT);
  }
  if (j.contains("tol"))
  {
    c.tol = GetNumber(j["tol"], "$.tol");
    if (!(c.tol > 0.0 && c.tol < 1.0))
    {
      Fail("$.tol", "must be in (0, 1)");
    }
  }
  if (j.contains("out"))
  {
    c.out = GetString(j["out"], "$.out");
  }
  if (j.contains("all"))
  {
    if (!j["all"].is_boolean())
    {
      Fail("$.all", "expected true or false");
    }
    c.all = j["all"].get<bool>();
  }
  if (j.contains("max_n"))
  {
    c.max_n = GetInt(j["max_n"], "$.max_n", 1, 16);
  }
  if (j.contains("properties"))
  {
    c.properties = GetStringList(j["properties"], "$.properties", PropertyNames());
  }
  if (j.contains("index"))
  {
    c.index = GetInt(j["index"], "$.index", 0, MAXTEV_MAX_COUNT - 1);
  }
  if (j.contains("matrices"))
  {
    c.matrices = GetStringList(j["matrices"], "$.matrices", {"K", "M", "A", "B", "C", "G"});
  }
  if (j.contains("pinned_vertex"))
  {
    c.pinned_vertex = GetInt(j["pinned_vertex"], "$.pinned_vertex", -1, 1 << 30);
  }
  if (j.contains("threads"))
  {
    c.threads = GetInt(j["threads"], "$.threads", 0, 1024);
  }

  const std::string &cmd = c.command;
  std::vector<std::string> formats;
  if (cmd == "mesh")
  {
    formats = {"text", "vtk"};
  }
  else if (cmd == "solve")
  {
    formats = {"text", "csv"};
  }
  else if (cmd == "converge")
  {
    formats = {"csv", "text"};
  }
  else if (cmd == "verify")
  {
    formats = {"text", "csv"};
  }
  else
  {
    formats = {"vtk", "mm", "csv"};
  }
  c.format = j.contains("format") ? Choice(j["format"], "$.format", formats) : formats.front();

  if (cmd == "verify" && c.all)
  {
    return c;
  }
  if (!have_domain)
  {
    Fail("$", "missing required key 'domain'");
  }
  if (cmd == "verify")
  {
    if (c.ns.empty())
    {
      for (int n = 1; n <= c.max_n; ++n)
      {
        c.ns.push_back(n);
      }
    }
    return c;
  }
  if (cmd == "converge")
  {
    if (c.ns.empty())
    {
      Fail("$", "missing required key 'n_list'");
    }
    if (!c.k_window)
    {
      Fail("$", "missing required key 'k_window'");
    }
    return c;
  }
  if (!j.contains("n") && !(c.ns.size() == 1 && j.contains("n_list")))
  {
    Fail("$", "missing required key 'n'");
  }
  if (cmd == "export" && c.format == "vtk" && c.index >= c.count)
  {
    Fail("$.index", "must be smaller than 'count'");
  }
  return c;
}

}  // namespace maxtev::cli
