#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace kalpha::io {

/// Decimal text with 17 significant digits; round-trips every double exactly.
std::string fmt17(double value);

double parse_double(const std::string& text);

/// Flat `key = value` text. Blank lines and lines starting with '#' are skipped.
using KeyValues = std::map<std::string, std::string>;
KeyValues read_key_values(const std::filesystem::path& path);
void write_key_values(const std::filesystem::path& path, const KeyValues& values);

/// Comma separated numbers, e.g. "20,40,80".
std::vector<double> parse_list(const std::string& text);
std::string join_list(const std::vector<double>& values);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace kalpha::io
