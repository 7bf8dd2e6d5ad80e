// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

// Raised for anything that should end the process with exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using KeyValues = std::map<std::string, std::string>;

const std::vector<std::string>& known_keys();
std::string normalize_key(std::string key);
// Flat key=value file, '#' starts a comment.
KeyValues parse_config_file(const std::string& path);

class JobConfig {
public:
  JobConfig(std::string subcommand, KeyValues values) : subcommand_(std::move(subcommand)), kv_(std::move(values)) {}

  const std::string& subcommand() const { return subcommand_; }
  bool has(const std::string& key) const { return kv_.count(key) > 0; }
  void require_keys(const std::vector<std::string>& keys) const;

  double real(const std::string& key, double fallback) const;
  long integer(const std::string& key, long fallback) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  std::vector<int> int_list(const std::string& key, const std::vector<int>& fallback) const;

private:
  std::string subcommand_;
  KeyValues kv_;
};

}  // namespace cli
