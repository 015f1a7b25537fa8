#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hyperhardy/errors.hpp"

namespace hyperhardy {

/// Malformed configuration text or a value of the wrong type.
class ConfigError : public ArgumentError {
 public:
  ConfigError(const std::string& msg, int line)
      : ArgumentError(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  /// 1-based source line, or 0 when the key was not read from text.
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Flat key = value configuration. "[section]" headers prefix the keys that
/// follow them ("section.key"); '#' starts a comment.
class Config {
 public:
  static Config parse(std::istream& in) {
    Config c;
    std::string raw, section;
    int line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      const auto hash = raw.find('#');
      std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') throw ConfigError("unterminated section header", line_no);
        section = trim(line.substr(1, line.size() - 2));
        if (section.empty() || !valid_name(section)) throw ConfigError("bad section name '" + section + "'", line_no);
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no);
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty() || !valid_name(key)) throw ConfigError("bad key '" + key + "'", line_no);
      const std::string full = section.empty() ? key : section + "." + key;
      if (c.lines_.count(full)) throw ConfigError("duplicate key '" + full + "'", line_no);
      c.values_[full] = value;
      c.lines_[full] = line_no;
    }
    return c;
  }

  static Config parse_string(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
  }

  static Config load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    return parse(in);
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  void set(const std::string& key, const std::string& value) {
    values_[key] = value;
    lines_.erase(key);
  }

  /// Keys of `other` replace ours, keeping their source lines.
  void merge(const Config& other) {
    for (const auto& [k, v] : other.values_) {
      values_[k] = v;
      auto it = other.lines_.find(k);
      if (it != other.lines_.end()) lines_[k] = it->second;
    }
  }

  std::string get_string(const std::string& key, const std::string& fallback = "") const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    return to_double(key, it->second);
  }

  int get_int(const std::string& key, int fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    int out = 0;
    if (!parse_integral(it->second, out)) throw type_error(key, "an integer");
    return out;
  }

  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::uint64_t out = 0;
    if (!parse_integral(it->second, out)) throw type_error(key, "an unsigned integer");
    return out;
  }

  /// Comma-separated list of numbers.
  std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
    if (out.empty()) throw type_error(key, "a list of numbers");
    return out;
  }

  const std::map<std::string, std::string>& entries() const noexcept { return values_; }

  /// Source line of a key, 0 if it was set programmatically.
  int line_of(const std::string& key) const {
    auto it = lines_.find(key);
    return it == lines_.end() ? 0 : it->second;
  }

  /// Canonical text: sections in key order, one "key = value" per line.
  std::string render() const {
    std::ostringstream out;
    std::string current;
    bool first = true;
    for (const auto& [k, v] : values_) {
      const auto dot = k.rfind('.');
      const std::string section = dot == std::string::npos ? "" : k.substr(0, dot);
      const std::string name = dot == std::string::npos ? k : k.substr(dot + 1);
      if (first || section != current) {
        if (!section.empty()) out << (first ? "" : "\n") << '[' << section << "]\n";
        current = section;
        first = false;
      }
      out << name << " = " << v << '\n';
    }
    return out.str();
  }

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, int> lines_;

  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  static bool valid_name(const std::string& s) {
    for (char ch : s)
      if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.')) return false;
    return true;
  }

  template <class T>
  static bool parse_integral(const std::string& s, T& out) {
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && p == end;
  }

  ConfigError type_error(const std::string& key, const std::string& what) const {
    auto it = lines_.find(key);
    return ConfigError("'" + key + "' must be " + what + ", got '" + get_string(key) + "'",
                       it == lines_.end() ? 0 : it->second);
  }

  double to_double(const std::string& key, const std::string& s) const {
    double out = 0.0;
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, out);
    if (ec != std::errc() || p != end || s.empty()) throw type_error(key, "a number");
    return out;
  }
};

/// Every tunable of the verification suites with its default.
inline Config default_config() {
  return Config::parse_string(R"(
[run]
seed = 20240601
tol_scale = 1
workers = 0

[tolerances]
identity_rel = 1e-8
margin_rel = 1e-8
ball_identity_rel = 1e-6
halfspace_identity_rel = 1e-4
reduced_form_rel = 1e-5
laplacian_transfer = 1e-10
poincare_gap_rel = 1e-2
slope_abs = 1e-3
optimality_floor_abs = 1e-3

[identities]
dimensions = 3, 4, 5, 7, 10
superexp_a = 2, 1.5
integer_identity_max_N = 50
coeff_min_N = 5, 12
coeff_n_max = 50

[hardy]
N = 3
r_min = 1e-6
r_max = 100
M = 8192
sharp_low = 0.249
sharp_high = 0.30
bumps = 50
lambda_M = 8192
lambda_r_min = 1e-12
lambda_r_max = 1e26
lambda_points = 17

[rellich]
N = 5
r_min = 1e-3
r_max = 60
M = 4096
r2_floor = 1.99
euclidean_target = 1.5625
euclidean_tol = 5e-2
one_dim_target = 0.5625
one_dim_tol = 1e-2
bumps = 50

[euclid]
N = 5
bumps = 50
identity_bumps = 20
panels = 24

[asymptotics]
N = 5
r_near = 8
r_far = 12
consistency_max_N = 30
)");
}

}  // namespace hyperhardy
