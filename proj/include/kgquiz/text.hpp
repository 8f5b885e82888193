#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace kgq::text {

std::vector<std::string_view> split(std::string_view s, char sep);
std::vector<std::string_view> split_whitespace(std::string_view s);
std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string replace_all(std::string_view s, char from, char to);

// Reads a UTF-8 text file line by line, stripping a trailing '\r'. The
// callback receives the 1-based line number. Throws IoError if the file
// cannot be opened.
void for_each_line(const std::filesystem::path& path,
                   const std::function<void(std::string_view, std::size_t)>& fn);

// Writes `content` to `path` atomically (temp file then rename).
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

}  // namespace kgq::text
