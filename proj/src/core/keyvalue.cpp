// SPDX-License-Identifier: Apache-2.0
#include "turbonoc/keyvalue.hpp"

#include <fstream>
#include <istream>

#include "turbonoc/error.hpp"

namespace turbonoc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::map<std::string, std::string> parse_key_values(std::istream& in, const std::string& origin) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw Error(ErrorCode::config_error, origin + ":" + std::to_string(lineno) + ": unterminated section header");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::config_error, origin + ":" + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw Error(ErrorCode::config_error, origin + ":" + std::to_string(lineno) + ": empty key");
    if (auto dot = key.rfind('.'); dot != std::string::npos) key = key.substr(dot + 1);
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

std::map<std::string, std::string> load_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open config file " + path.string());
  return parse_key_values(in, path.string());
}

}  // namespace turbonoc
