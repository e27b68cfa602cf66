#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace pathlinks::io {

// Opens a file for reading; throws Error(missing_file) if it cannot be opened.
std::ifstream open_input(const std::filesystem::path& file);
std::ofstream open_output(const std::filesystem::path& file);

std::string read_file(const std::filesystem::path& file);

// Calls `fn(line_number, line)` for every line that is neither empty nor a
// `#` comment. Line numbers are 1-based. A trailing '\r' is stripped.
void for_each_data_line(
    const std::filesystem::path& file,
    const std::function<void(std::size_t, std::string_view)>& fn);

std::vector<std::string_view> split(std::string_view line, char sep);

// RFC 4180 style field handling.
std::vector<std::string> parse_csv_line(std::string_view line);
std::string csv_quote(std::string_view field);

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

std::int64_t parse_int(std::string_view text);
double parse_double(std::string_view text);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& file);

// Provenance block written at the top of every output file. CSV outputs carry
// it as `# key=value` lines, JSON outputs embed it under "metadata".
struct Metadata {
  std::string tool = "pathlinks";
  std::string version;
  std::string command;
  std::map<std::string, std::string> config;
  std::map<std::string, std::string> input_checksums;

  std::string config_hash() const;
  void write_comment_block(std::ostream& out) const;
};

// Reads the `# key=value` lines preceding the first data line of a CSV file.
std::map<std::string, std::string> read_comment_block(const std::filesystem::path& file);

}  // namespace pathlinks::io
