#pragma once

#include <string>
#include <vector>

namespace faultkb {

// Reads a whole UTF-8 text file into lines (universal newlines). Throws
// FormatError when the file cannot be opened.
std::vector<std::string> read_lines(const std::string& path);

std::vector<std::string> split(const std::string& s, char delim);

// Splits on runs of blanks; no empty fields.
std::vector<std::string> split_ws(const std::string& s);

std::string trim(const std::string& s);

std::string join(const std::vector<std::string>& parts, const std::string& sep);

bool is_comment_or_blank(const std::string& line);

// Writes text to `path` via a temp file + rename so a failed stage never
// leaves a partial artifact behind.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace faultkb
