#pragma once

// Flat key-value configuration: one `key = value` per line, `#` starts a
// comment, blank lines are ignored. Later assignments override earlier ones.

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gbo {

/// Parses a real number or a fraction such as "1/6400". Throws
/// std::invalid_argument on malformed input.
double parse_real(const std::string& text);

/// Parses a comma- or whitespace-separated list of reals (fractions allowed).
std::vector<double> parse_real_list(const std::string& text);

class Config {
 public:
  /// Throws std::invalid_argument with the offending line number.
  static Config parse(std::istream& in, const std::string& source = "<input>");
  /// Throws std::runtime_error if the file cannot be read.
  static Config load(const std::string& path);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_real(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::vector<double> get_real_list(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const noexcept { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace gbo
