// SPDX-License-Identifier: Apache-2.0
#include "config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cli {

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{
      "lambda", "alpha",  "n",   "runs", "dt",    "steps", "tau-max",    "points",     "seed",     "ensemble",
      "rho",    "contour-points", "d", "psi1", "psi2", "ridge", "activation", "output-dir", "emit-svg", "threads"};
  return keys;
}

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

KeyValues parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  KeyValues kv;
  std::string line;
  int lineno = 0;
  const auto& keys = known_keys();
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = normalize_key(trim(line.substr(0, eq)));
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError("unknown key: " + key);
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

void JobConfig::require_keys(const std::vector<std::string>& keys) const {
  for (const auto& k : keys)
    if (!has(k)) throw ConfigError(subcommand_ + ": missing required key: " + k);
}

double JobConfig::real(const std::string& key, double fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  const char* s = it->second.c_str();
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(s, &end);
  if (end == s || *end != '\0' || errno == ERANGE || !std::isfinite(v))
    throw ConfigError("invalid number for " + key + ": " + it->second);
  return v;
}

long JobConfig::integer(const std::string& key, long fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  const char* s = it->second.c_str();
  char* end = nullptr;
  errno = 0;
  long v = std::strtol(s, &end, 10);
  if (end == s || *end != '\0' || errno == ERANGE) throw ConfigError("invalid integer for " + key + ": " + it->second);
  return v;
}

std::string JobConfig::text(const std::string& key, const std::string& fallback) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

bool JobConfig::flag(const std::string& key, bool fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  const std::string& v = it->second;
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("invalid boolean for " + key + ": " + v);
}

std::vector<int> JobConfig::int_list(const std::string& key, const std::vector<int>& fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  std::vector<int> out;
  std::stringstream ss(it->second);
  std::string item;
  while (std::getline(ss, item, ',')) {
    JobConfig one(subcommand_, {{key, trim(item)}});
    long v = one.integer(key, 0);
    out.push_back(int(v));
  }
  if (out.empty()) throw ConfigError("empty list for " + key);
  return out;
}

}  // namespace cli
