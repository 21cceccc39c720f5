#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gelfree/errors.hpp"
#include "gelfree/measure.hpp"

// Flat key=value run configuration.  Precedence is defaults, then file, then
// command-line flags (applied by the CLI layer).  Parsing is strict: unknown
// keys, duplicate keys, and malformed numbers are errors (exit code 2), each
// reported with the offending key and line.

namespace gelfree {

struct RunConfig {
  std::string subcommand;
  double k = 1.0;
  std::string measure = "mono";  // mono | atomic | exp | powertail | triangle
  double rate = 1.0;             // exp family parameter
  double cut = 1.0;              // powertail support start
  std::vector<double> t_grid = {0.1, 0.5, 1.0, 2.0, 5.0};
  std::vector<double> s_grid = {0.2, 0.5, 1.0, 2.0, 5.0};
  std::vector<double> x_grid = {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0};
  std::vector<double> observe_at = {0.5, 1.0, 2.0};
  std::size_t n_particles = 100000;
  std::uint64_t seed = 1;
  int replicates = 1;
  double t_end = 2.0;
  std::uint64_t event_cap = 100000000;
  int inversion_order = 12;
  double root_tol = 1e-12;
  double residual_step = 1e-4;
  double dt = 1e-4;  // oracle integration step
  std::string output_dir = "out";
};

namespace detail {

inline std::string_view trim(std::string_view sv) {
  while (!sv.empty() && (sv.front() == ' ' || sv.front() == '\t')) sv.remove_prefix(1);
  while (!sv.empty() && (sv.back() == ' ' || sv.back() == '\t' || sv.back() == '\r'))
    sv.remove_suffix(1);
  return sv;
}

inline double parse_double(std::string_view sv, const std::string& key, int line) {
  double v = 0.0;
  const auto res = std::from_chars(sv.data(), sv.data() + sv.size(), v);
  if (res.ec != std::errc() || res.ptr != sv.data() + sv.size())
    throw ConfigError("config line " + std::to_string(line) + ": key '" + key +
                      "' has malformed number '" + std::string(sv) + "'");
  return v;
}

inline std::uint64_t parse_u64(std::string_view sv, const std::string& key, int line) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(sv.data(), sv.data() + sv.size(), v);
  if (res.ec != std::errc() || res.ptr != sv.data() + sv.size())
    throw ConfigError("config line " + std::to_string(line) + ": key '" + key +
                      "' has malformed integer '" + std::string(sv) + "'");
  return v;
}

inline std::vector<double> parse_list(std::string_view sv, const std::string& key,
                                      int line) {
  std::vector<double> out;
  std::size_t start = 0;
  const std::string s(sv);
  while (start <= s.size()) {
    std::size_t comma = s.find(',', start);
    if (comma == std::string::npos) comma = s.size();
    const std::string_view item = trim(std::string_view(s).substr(start, comma - start));
    if (item.empty())
      throw ConfigError("config line " + std::to_string(line) + ": key '" + key +
                        "' has an empty list element");
    out.push_back(parse_double(item, key, line));
    start = comma + 1;
  }
  return out;
}

}  // namespace detail

// Post-parse invariants shared by file and flag input.
inline void check_config(const RunConfig& cfg) {
  if (!(cfg.k >= 0.0)) throw ConfigError("k must be nonnegative");
  if (cfg.subcommand != "simulate" && !cfg.subcommand.empty() && !(cfg.k > 0.0))
    throw ConfigError("k must be strictly positive for subcommand '" +
                      cfg.subcommand + "' (k = 0 is only meaningful for simulate)");
  if (cfg.measure != "mono" && cfg.measure != "atomic" && cfg.measure != "exp" &&
      cfg.measure != "powertail" && cfg.measure != "triangle")
    throw ConfigError("unknown measure family '" + cfg.measure + "'");
  if (!(cfg.rate > 0.0)) throw ConfigError("rate must be positive");
  if (!(cfg.cut > 0.0)) throw ConfigError("cut must be positive");
  if (cfg.n_particles < 1) throw ConfigError("n_particles must be at least 1");
  if (cfg.replicates < 1) throw ConfigError("replicates must be at least 1");
  if (!(cfg.t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (!(cfg.root_tol > 0.0) || !(cfg.residual_step > 0.0) || !(cfg.dt > 0.0))
    throw ConfigError("tolerances and steps must be positive");
  if (cfg.inversion_order < 8 || cfg.inversion_order > 18 ||
      cfg.inversion_order % 2 != 0)
    throw ConfigError("inversion_order must be an even integer in [8,18]");
  const auto check_grid = [](const std::vector<double>& g, const char* name) {
    if (g.empty()) throw ConfigError(std::string(name) + " must be nonempty");
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (i > 0 && !(g[i] > g[i - 1]))
        throw ConfigError(std::string(name) + " must be sorted strictly ascending");
    }
  };
  check_grid(cfg.t_grid, "t_grid");
  check_grid(cfg.s_grid, "s_grid");
  check_grid(cfg.x_grid, "x_grid");
  check_grid(cfg.observe_at, "observe_at");
  for (double s : cfg.s_grid)
    if (!(s >= 0.0)) throw ConfigError("s_grid entries must be nonnegative");
  for (double t : cfg.t_grid)
    if (!(t > 0.0)) throw ConfigError("t_grid entries must be positive");
}

// Parses key=value text into cfg (already holding defaults).  '#' starts a
// comment; blank lines are skipped.
inline void parse_config_text(const std::string& text, const std::string& source,
                              RunConfig& cfg) {
  std::istringstream in(text);
  std::string raw;
  std::set<std::string> seen;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(source + " line " + std::to_string(line_no) +
                        ": expected key=value, got '" + std::string(line) + "'");
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string_view value = detail::trim(line.substr(eq + 1));
    if (!seen.insert(key).second)
      throw ConfigError(source + " line " + std::to_string(line_no) +
                        ": duplicate key '" + key + "'");
    if (key == "k") cfg.k = detail::parse_double(value, key, line_no);
    else if (key == "measure") cfg.measure = std::string(value);
    else if (key == "rate") cfg.rate = detail::parse_double(value, key, line_no);
    else if (key == "cut") cfg.cut = detail::parse_double(value, key, line_no);
    else if (key == "t_grid") cfg.t_grid = detail::parse_list(value, key, line_no);
    else if (key == "s_grid") cfg.s_grid = detail::parse_list(value, key, line_no);
    else if (key == "x_grid") cfg.x_grid = detail::parse_list(value, key, line_no);
    else if (key == "observe_at") cfg.observe_at = detail::parse_list(value, key, line_no);
    else if (key == "n_particles")
      cfg.n_particles = static_cast<std::size_t>(detail::parse_u64(value, key, line_no));
    else if (key == "seed") cfg.seed = detail::parse_u64(value, key, line_no);
    else if (key == "replicates")
      cfg.replicates = static_cast<int>(detail::parse_u64(value, key, line_no));
    else if (key == "t_end") cfg.t_end = detail::parse_double(value, key, line_no);
    else if (key == "event_cap") cfg.event_cap = detail::parse_u64(value, key, line_no);
    else if (key == "inversion_order")
      cfg.inversion_order = static_cast<int>(detail::parse_u64(value, key, line_no));
    else if (key == "root_tol") cfg.root_tol = detail::parse_double(value, key, line_no);
    else if (key == "residual_step")
      cfg.residual_step = detail::parse_double(value, key, line_no);
    else if (key == "dt") cfg.dt = detail::parse_double(value, key, line_no);
    else if (key == "output_dir") cfg.output_dir = std::string(value);
    else
      throw ConfigError(source + " line " + std::to_string(line_no) +
                        ": unknown key '" + key + "'");
  }
}

inline RunConfig parse_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << f.rdbuf();
  RunConfig cfg;
  parse_config_text(buf.str(), path, cfg);
  return cfg;
}

// Family dispatch shared by all subcommands.  "triangle" is the bundled
// generic-density example (hat function on [0,2], unit mass).
inline MeasureSpec make_measure(const RunConfig& cfg) {
  if (cfg.measure == "mono") return MeasureSpec::monodisperse();
  if (cfg.measure == "atomic")
    return MeasureSpec::atomic({{0.5, 0.5}, {2.0, 0.5}});
  if (cfg.measure == "exp") return MeasureSpec::exponential(cfg.rate);
  if (cfg.measure == "powertail") return MeasureSpec::power_tail(cfg.cut);
  if (cfg.measure == "triangle")
    return MeasureSpec::generic(
        {[](double x) { return x < 1.0 ? x : 2.0 - x; }, 0.0, 2.0});
  throw ConfigError("unknown measure family '" + cfg.measure + "'");
}

}  // namespace gelfree
