#ifndef CI2D_CONFIG_HPP
#define CI2D_CONFIG_HPP

#include <map>
#include <string>
#include <vector>

#include "ci2d/types.hpp"

namespace ci2d {

struct ConfigError : std::runtime_error {
  int line = 0;
  int column = 0;
  ConfigError(const std::string& msg, int l, int c)
      : std::runtime_error(msg + " at line " + std::to_string(l) + ", column " +
                           std::to_string(c)),
        line(l),
        column(c) {}
};

/// Flat key-value configuration with [section] headers.
/// Grammar (one entry per line):
///   [section]        starts a section; keys below belong to it
///   key = value      entry; full key is "section.key" ("" section allowed)
///   # comment        comments and blank lines are ignored
/// Keys are validated by the consumer; unknown keys are hard errors.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  Real get_real(const std::string& key, Real fallback) const;
  int get_int(const std::string& key, int fallback) const;
  uint64_t get_u64(const std::string& key, uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<Real> get_list(const std::string& key) const;

  /// Every key must appear in `known`, otherwise throws ConfigError.
  void require_known(const std::vector<std::string>& known) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
  std::map<std::string, int> lines_;
};

}  // namespace ci2d

#endif  // CI2D_CONFIG_HPP
