#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <string>

namespace sdseg {

/// Parses `key = value` lines. Blank lines and lines starting with '#' are
/// ignored; keys may be written with or without a leading "--". Throws
/// ConfigError (with the line number) on malformed lines or duplicate keys.
std::map<std::string, std::string> parse_key_values(std::istream& in);

/// Throws IoError if the file cannot be opened.
std::map<std::string, std::string> read_config_file(
    const std::filesystem::path& path);

}  // namespace sdseg
