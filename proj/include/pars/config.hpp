#pragma once

#include <istream>
#include <map>
#include <string>
#include <vector>

namespace pars {

/// Plain-text configuration: one `key = value` per line, `#` starts a
/// comment, blank lines ignored. Keys are case-sensitive.
class Config {
 public:
  Config() = default;

  static Config parse(std::istream& in);
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Whitespace- or comma-separated list of numbers.
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;

  void set(const std::string& key, const std::string& value) { kv_[key] = value; }

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace pars
