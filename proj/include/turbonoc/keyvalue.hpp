// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

namespace turbonoc {

/// Flat `key = value` text with optional `[section]` headers and `#` comments.
/// Sections only group keys for readers; a key may also be written as
/// `section.key`. Later assignments override earlier ones.
std::map<std::string, std::string> parse_key_values(std::istream& in, const std::string& origin = "<input>");
std::map<std::string, std::string> load_key_values(const std::filesystem::path& path);

}  // namespace turbonoc
