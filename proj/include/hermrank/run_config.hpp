#pragma once

// Serializable description of one CLI run. Values are kept in canonical JSON
// form (grids resolved to explicit lists, defaults filled in), so the echo of
// a config re-runs the same computation.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hermrank/experiments.hpp"

namespace hermrank {

/// Malformed or inconsistent run configuration (a usage error).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ValueKind { text, choice, uint, real, grid, uint_list, real_list };

struct KeySpec {
  std::string_view key;
  ValueKind kind;
  std::string_view help;
  std::vector<std::string_view> choices{};
};

inline const std::vector<KeySpec>& config_keys() {
  static const std::vector<KeySpec> keys{
      {"poly", ValueKind::text, "polynomial, e.g. \"x^3 - 3*x\" or \"2*H2 + 1\""},
      {"p", ValueKind::text, "inner polynomial P"},
      {"q", ValueKind::text, "outer polynomial Q (monomial grammar)"},
      {"model", ValueKind::choice, "covariance family", {"fgn", "power_law", "white_noise"}},
      {"hurst", ValueKind::real, "Hurst parameter H in (1/2, 1)"},
      {"sv", ValueKind::choice, "slowly varying factor of power_law", {"constant", "log"}},
      {"sv_scale", ValueKind::real, "scale c of the slowly varying factor"},
      {"grid", ValueKind::grid, "N grid, start:stop:points (geometric) or a comma list"},
      {"n", ValueKind::uint, "path length N"},
      {"reps", ValueKind::uint, "Monte Carlo replications"},
      {"seed", ValueKind::uint, "master seed"},
      {"mode", ValueKind::choice, "variance computation", {"exact", "monte_carlo"}},
      {"case", ValueKind::choice, "counterexample case", {"a", "b"}},
      {"m", ValueKind::uint, "Hermite index of P = H_m"},
      {"ms", ValueKind::uint_list, "ranks to scan, lo:hi or a comma list"},
      {"hursts", ValueKind::real_list, "Hurst values to scan, lo:hi:step or a comma list"},
      {"max_power", ValueKind::uint, "largest power x^j tried for Q"},
      {"paths", ValueKind::text, "file receiving the simulated paths"},
      {"paths_format", ValueKind::choice, "path file format", {"csv", "binary"}},
      {"plot_data", ValueKind::text, "prefix of the plot-data CSV files"},
      {"slope_tol", ValueKind::real, "tolerance on fitted growth exponents"},
      {"ks_tol", ValueKind::real, "tolerance on the KS distance"},
  };
  return keys;
}

inline const KeySpec& key_spec(std::string_view key) {
  for (const auto& k : config_keys())
    if (k.key == key) return k;
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

struct CommandSpec {
  std::string_view name;
  std::string_view help;
  std::vector<std::string_view> keys;
  std::map<std::string_view, std::string_view> defaults;
};

inline const std::vector<CommandSpec>& command_specs() {
  static const std::map<std::string_view, std::string_view> model_defaults{
      {"model", "fgn"}, {"sv", "constant"}, {"sv_scale", "1"}};
  auto with = [](std::map<std::string_view, std::string_view> a, std::map<std::string_view, std::string_view> b) {
    a.insert(b.begin(), b.end());
    return a;
  };
  static const std::vector<CommandSpec> specs{
      {"expand", "Hermite expansion, Gaussian mean and variance of a polynomial", {"poly"}, {}},
      {"rank", "Hermite rank of a polynomial", {"poly"}, {}},
      {"compose", "Hermite expansion of Q(P)", {"p", "q"}, {}},
      {"classify", "SRD/LRD classification of a polynomial at a Hurst index", {"poly", "hurst"}, {}},
      {"find-q", "search x^j for a composition that turns SRD into LRD", {"poly", "hurst", "max_power"},
       {{"max_power", "6"}}},
      {"simulate",
       "simulate stationary Gaussian paths (optionally subordinated)",
       {"poly", "model", "hurst", "sv", "sv_scale", "n", "reps", "seed", "paths", "paths_format"},
       with(model_defaults, {{"reps", "1"}, {"paths_format", "csv"}})},
      {"variance-growth",
       "fit the growth exponent of Var(sum p(Z_i))",
       {"poly", "model", "hurst", "sv", "sv_scale", "grid", "mode", "reps", "seed", "plot_data", "slope_tol"},
       with(model_defaults, {{"grid", "256:65536:9"}, {"mode", "exact"}, {"reps", "500"}, {"slope_tol", "0.05"}})},
      {"clt-check",
       "KS test of standardized partial sums against N(0,1)",
       {"poly", "model", "hurst", "sv", "sv_scale", "n", "reps", "seed", "ks_tol"},
       with(model_defaults, {{"reps", "1000"}, {"ks_tol", "0.06"}})},
      {"counterexample",
       "SRD P = H_m whose composition Q(P) is LRD",
       {"case", "m", "hurst", "grid", "mode", "reps", "seed", "plot_data", "slope_tol"},
       {{"grid", "256:65536:9"}, {"mode", "exact"}, {"reps", "500"}, {"slope_tol", "0.05"}}},
      {"scan",
       "rank, dependence class and Q search over a grid of (m, H)",
       {"ms", "hursts", "max_power"},
       {{"ms", "1:6"}, {"hursts", "0.55:0.95:0.05"}, {"max_power", "6"}}},
  };
  return specs;
}

inline const CommandSpec& command_spec(std::string_view name) {
  for (const auto& c : command_specs())
    if (c.name == name) return c;
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

inline std::uint64_t parse_uint(std::string_view key, const std::string& s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    throw ConfigError(std::string(key) + ": expected a nonnegative integer, got '" + s + "'");
  return v;
}

inline double parse_real(std::string_view key, const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size() || !std::isfinite(v))
    throw ConfigError(std::string(key) + ": expected a number, got '" + s + "'");
  return v;
}

inline std::string scalar_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v.get<double>());
    return std::string(buf, r.ptr);
  }
  throw ConfigError("config values must be strings, numbers or arrays");
}

}  // namespace detail

/// Converts a textual (flag or key=value) value into its canonical JSON form.
inline nlohmann::json canonical_value(const KeySpec& spec, const std::string& raw) {
  using detail::parse_real;
  using detail::parse_uint;
  const std::string text = detail::trim(raw);
  switch (spec.kind) {
    case ValueKind::text:
      return text;
    case ValueKind::choice:
      if (std::find(spec.choices.begin(), spec.choices.end(), text) == spec.choices.end()) {
        std::string allowed;
        for (auto c : spec.choices) allowed += (allowed.empty() ? "" : ", ") + std::string(c);
        throw ConfigError(std::string(spec.key) + ": '" + text + "' is not one of " + allowed);
      }
      return text;
    case ValueKind::uint:
      return parse_uint(spec.key, text);
    case ValueKind::real:
      return parse_real(spec.key, text);
    case ValueKind::grid: {
      std::vector<std::uint64_t> g;
      if (text.find(':') != std::string::npos) {
        const auto parts = detail::split(text, ':');
        if (parts.size() != 3) throw ConfigError("grid: expected start:stop:points, got '" + text + "'");
        try {
          g = geometric_grid(parse_uint("grid", parts[0]), parse_uint("grid", parts[1]),
                             parse_uint("grid", parts[2]));
        } catch (const DomainError& e) {
          throw ConfigError(std::string("grid: ") + e.what());
        }
      } else {
        for (const auto& part : detail::split(text, ',')) g.push_back(parse_uint("grid", part));
      }
      return g;
    }
    case ValueKind::uint_list: {
      std::vector<std::uint64_t> v;
      if (text.find(':') != std::string::npos) {
        const auto parts = detail::split(text, ':');
        if (parts.size() != 2) throw ConfigError(std::string(spec.key) + ": expected lo:hi, got '" + text + "'");
        const auto lo = parse_uint(spec.key, parts[0]), hi = parse_uint(spec.key, parts[1]);
        if (hi < lo || hi - lo > 10000) throw ConfigError(std::string(spec.key) + ": bad range '" + text + "'");
        for (auto k = lo; k <= hi; ++k) v.push_back(k);
      } else {
        for (const auto& part : detail::split(text, ',')) v.push_back(parse_uint(spec.key, part));
      }
      return v;
    }
    case ValueKind::real_list: {
      std::vector<double> v;
      if (text.find(':') != std::string::npos) {
        const auto parts = detail::split(text, ':');
        if (parts.size() != 3) throw ConfigError(std::string(spec.key) + ": expected lo:hi:step, got '" + text + "'");
        const double lo = parse_real(spec.key, parts[0]), hi = parse_real(spec.key, parts[1]),
                     step = parse_real(spec.key, parts[2]);
        if (!(step > 0) || hi < lo || (hi - lo) / step > 10000)
          throw ConfigError(std::string(spec.key) + ": bad range '" + text + "'");
        const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
        // Rounded to 12 decimals so 0.55:0.95:0.05 yields 0.6, not 0.6000000000000001.
        for (std::size_t i = 0; i <= count; ++i) v.push_back(std::round((lo + step * i) * 1e12) / 1e12);
      } else {
        for (const auto& part : detail::split(text, ',')) v.push_back(parse_real(spec.key, part));
      }
      return v;
    }
  }
  throw std::logic_error("unhandled value kind");
}

/// Canonical form of a value read from a JSON config.
inline nlohmann::json canonical_value(const KeySpec& spec, const nlohmann::json& v) {
  if (!v.is_array()) return canonical_value(spec, detail::scalar_text(v));
  if (spec.kind != ValueKind::grid && spec.kind != ValueKind::uint_list && spec.kind != ValueKind::real_list)
    throw ConfigError(std::string(spec.key) + ": a list is not allowed here");
  std::string joined;
  for (const auto& e : v) joined += (joined.empty() ? "" : ",") + detail::scalar_text(e);
  return canonical_value(spec, joined);
}

class RunConfig {
 public:
  RunConfig() = default;

  const std::string& command() const noexcept { return command_; }
  void set_command(const std::string& name) {
    command_spec(name);
    if (!command_.empty() && command_ != name)
      throw ConfigError("config is for command '" + command_ + "', not '" + name + "'");
    command_ = name;
  }

  void set(const std::string& key, const std::string& text) { values_[key] = canonical_value(key_spec(key), text); }
  void set(const std::string& key, const nlohmann::json& v) { values_[key] = canonical_value(key_spec(key), v); }

  bool has(const std::string& key) const { return values_.contains(key); }
  const nlohmann::json& at(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing required option --" + flag_name(key));
    return it->second;
  }
  template <class T>
  T get(const std::string& key) const {
    return at(key).get<T>();
  }

  /// Drops keys the command does not use and fills in its defaults.
  void finalize() {
    if (command_.empty()) throw ConfigError("no command given");
    const auto& spec = command_spec(command_);
    std::map<std::string, nlohmann::json> kept;
    for (auto key : spec.keys) {
      const std::string k(key);
      if (auto it = values_.find(k); it != values_.end())
        kept[k] = it->second;
      else if (auto d = spec.defaults.find(key); d != spec.defaults.end())
        kept[k] = canonical_value(key_spec(key), std::string(d->second));
    }
    values_ = std::move(kept);
  }

  /// Echo of the resolved config; feeding it back through from_json
  /// reproduces the run.
  nlohmann::json to_json() const {
    nlohmann::json j = nlohmann::json::object();
    j["command"] = command_;
    for (const auto& [k, v] : values_) j[k] = v;
    return j;
  }

  /// Reads a JSON object; a report with an echoed "config" field is accepted.
  static RunConfig from_json(const nlohmann::json& input) {
    const nlohmann::json& j = input.is_object() && input.contains("config") ? input.at("config") : input;
    if (!j.is_object()) throw ConfigError("JSON config must be an object");
    RunConfig c;
    for (const auto& [k, v] : j.items()) {
      if (k == "command")
        c.set_command(v.is_string() ? v.get<std::string>() : throw ConfigError("command must be a string"));
      else
        c.set(k, v);
    }
    return c;
  }

  /// Reads "key = value" lines; '#' starts a comment.
  static RunConfig from_text(std::string_view text) {
    RunConfig c;
    std::size_t line_no = 0;
    for (const auto& raw : detail::split(text, '\n')) {
      ++line_no;
      const std::string line = detail::trim(raw.substr(0, raw.find('#')));
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
      const std::string key = detail::trim(line.substr(0, eq));
      const std::string value = detail::trim(line.substr(eq + 1));
      try {
        if (key == "command")
          c.set_command(value);
        else
          c.set(key, value);
      } catch (const ConfigError& e) {
        throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    return c;
  }

  /// JSON if the content starts with '{', key = value text otherwise.
  static RunConfig from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string content = ss.str();
    if (detail::trim(content).starts_with("{")) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(content);
      } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
      }
      return from_json(j);
    }
    return from_text(content);
  }

  static std::string flag_name(std::string key) {
    std::replace(key.begin(), key.end(), '_', '-');
    return key;
  }

 private:
  std::string command_;
  std::map<std::string, nlohmann::json> values_;
};

}  // namespace hermrank
