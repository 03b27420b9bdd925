#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace dataless::io {

/// Opens for reading or throws a validation error naming the path.
std::ifstream open_input(const std::filesystem::path& path);
std::ofstream open_output(const std::filesystem::path& path);

std::vector<std::string> split(std::string_view line, char sep);

/// One RFC 4180 record; quoted fields may contain separators and doubled quotes.
/// Returns false on an unterminated quote.
bool split_csv(std::string_view line, std::vector<std::string>& fields);

/// Quotes a CSV field only when it contains a comma, quote or line break.
std::string csv_field(std::string_view value);

/// Strips a trailing '\r' left by CRLF files.
void chomp(std::string& line);

bool parse_int(std::string_view s, long long& out);
bool parse_double(std::string_view s, double& out);

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

}  // namespace dataless::io
