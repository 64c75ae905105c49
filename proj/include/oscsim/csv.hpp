#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace oscsim {

// Shortest decimal string that round-trips the double (std::to_chars).
std::string format_double(double v);
void append_double(std::string& out, double v);

// One CSV row: values joined by ',' plus trailing newline.
void append_csv_row(std::string& out, std::span<const double> values);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

// Minimal CSV splitting (no quoting; the formats used here never need it).
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace oscsim
