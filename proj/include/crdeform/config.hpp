#pragma once

// Run configuration: line-oriented key=value text with '#' comments.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace crdeform {

/// Thrown for anything that should end the run with exit code 2.
class ConfigError : public std::runtime_error
{
 public:
  explicit ConfigError(const std::string& msg, std::string key = {}) : std::runtime_error(msg), key_(std::move(key)) {}
  const std::string& key() const { return key_; }  // offending key when known

 private:
  std::string key_;
};

struct RunConfig
{
  int degree = 6;  // N
  int order = 3;   // M
  int samples = 50;
  std::uint64_t seed = 42;
  double kernel_threshold = 1e-9;
  double identity_tolerance = 1e-8;
  double projector_tolerance = 1e-10;
  double commutator_tolerance = 1e-6;
  double angle_tolerance = 1e-6;
  double estimate_floor = 1e-6;
  mpq_class majorant_b = 1, majorant_c = 1;
  int majorant_r = 2;
  int majorant_order = 12;
  int kuranishi_params = 2;  // r = min(dim H, this)
  std::string out;           // empty: stdout
  std::string format = "json";
  std::vector<std::string> checks;  // id filters; empty runs everything

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

namespace detail {

inline std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

template <class T>
T parse_integer(const std::string& v, const std::string& what)
{
  std::size_t pos = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &pos, 10);
  } catch (const std::exception&) {
    throw ConfigError(what + ": expected an integer, got '" + v + "'");
  }
  if (pos != v.size()) throw ConfigError(what + ": expected an integer, got '" + v + "'");
  if constexpr (std::is_unsigned_v<T>)
    if (x < 0) throw ConfigError(what + ": expected a nonnegative integer, got '" + v + "'");
  return static_cast<T>(x);
}

inline double parse_real(const std::string& v, const std::string& what)
{
  std::size_t pos = 0;
  double x = 0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError(what + ": expected a number, got '" + v + "'");
  }
  if (pos != v.size()) throw ConfigError(what + ": expected a number, got '" + v + "'");
  return x;
}

/// "3", "-2/5"; decimals are not accepted so the majorant stays exact.
inline mpq_class parse_rational(const std::string& v, const std::string& what)
{
  mpq_class q;
  if (v.empty() || v.find_first_not_of("+-0123456789/") != std::string::npos || q.set_str(v, 10) != 0 ||
      v.back() == '/')
    throw ConfigError(what + ": expected a rational like 3 or 3/2, got '" + v + "'");
  if (q.get_den() == 0) throw ConfigError(what + ": zero denominator");
  q.canonicalize();
  return q;
}

}  // namespace detail

inline void RunConfig::validate() const
{
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg, msg.substr(0, msg.find(' ')));
  };
  need(degree >= 2, "degree must be at least 2");
  need(order >= 1, "order must be at least 1");
  need(samples >= 1, "samples must be at least 1");
  for (auto [name, v] : {std::pair<const char*, double>{"kernel_threshold", kernel_threshold},
                         {"identity_tolerance", identity_tolerance},
                         {"projector_tolerance", projector_tolerance},
                         {"commutator_tolerance", commutator_tolerance},
                         {"angle_tolerance", angle_tolerance},
                         {"estimate_floor", estimate_floor}})
    need(v > 0 && std::isfinite(v), std::string(name) + " must be positive");
  need(sgn(majorant_b) > 0, "majorant_b must be positive");
  need(sgn(majorant_c) > 0, "majorant_c must be positive");
  need(majorant_r >= 1, "majorant_r must be at least 1");
  need(majorant_order >= 1, "majorant_order must be at least 1");
  need(kuranishi_params >= 0, "kuranishi_params must be nonnegative");
  need(format == "json" || format == "csv", "format must be json or csv");
}

/// Assigns one key; returns false for an unknown key.
inline bool set_config_value(RunConfig& c, const std::string& key, const std::string& v)
{
  using namespace detail;
  if (key == "degree") c.degree = parse_integer<int>(v, key);
  else if (key == "order") c.order = parse_integer<int>(v, key);
  else if (key == "samples") c.samples = parse_integer<int>(v, key);
  else if (key == "seed") c.seed = parse_integer<std::uint64_t>(v, key);
  else if (key == "kernel_threshold") c.kernel_threshold = parse_real(v, key);
  else if (key == "identity_tolerance") c.identity_tolerance = parse_real(v, key);
  else if (key == "projector_tolerance") c.projector_tolerance = parse_real(v, key);
  else if (key == "commutator_tolerance") c.commutator_tolerance = parse_real(v, key);
  else if (key == "angle_tolerance") c.angle_tolerance = parse_real(v, key);
  else if (key == "estimate_floor") c.estimate_floor = parse_real(v, key);
  else if (key == "majorant_b") c.majorant_b = parse_rational(v, key);
  else if (key == "majorant_c") c.majorant_c = parse_rational(v, key);
  else if (key == "majorant_r") c.majorant_r = parse_integer<int>(v, key);
  else if (key == "majorant_order") c.majorant_order = parse_integer<int>(v, key);
  else if (key == "kuranishi_params") c.kuranishi_params = parse_integer<int>(v, key);
  else if (key == "out") c.out = v;
  else if (key == "format") c.format = v;
  else if (key == "check") c.checks.push_back(v);
  else return false;
  return true;
}

/// Parses config text. `origin` prefixes diagnostics ("origin:line: ...").
/// "check" may repeat; every other key at most once.
inline RunConfig parse_config(const std::string& text, const std::string& origin = "config")
{
  RunConfig c;
  std::map<std::string, int> seen;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string where = origin + ":" + std::to_string(lineno) + ": ";
    const std::string line = detail::trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "malformed line, expected key=value");
    const std::string key = detail::trim(line.substr(0, eq)), value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + "missing key before '='");
    if (key != "check") {
      auto [it, fresh] = seen.emplace(key, lineno);
      if (!fresh) throw ConfigError(where + "duplicate key '" + key + "' (first set on line " + std::to_string(it->second) + ")");
    }
    try {
      if (!set_config_value(c, key, value)) throw ConfigError("unknown key '" + key + "'");
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  try {
    c.validate();
  } catch (const ConfigError& e) {
    auto it = seen.find(e.key());
    const std::string where = it == seen.end() ? origin : origin + ":" + std::to_string(it->second);
    throw ConfigError(where + ": " + e.what(), e.key());
  }
  return c;
}

inline RunConfig load_config(const std::string& path)
{
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError(path + ": cannot open config file");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace crdeform
