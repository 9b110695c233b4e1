#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace kgx {

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);
std::vector<std::string> split_ws(const std::string& s);
std::string join(const std::vector<std::string>& parts, const std::string& sep);
std::string replace_all(std::string s, const std::string& from, const std::string& to);

std::string read_file(const std::filesystem::path& path);

// Writes via a temp file in the same directory plus a rename, so a failed run
// never leaves a partial output behind.
void atomic_write(const std::filesystem::path& path, const std::string& content);

}  // namespace kgx
