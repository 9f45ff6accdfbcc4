#pragma once

// Internal helpers for the small comma-separated formats used by the file
// interfaces. None of the schemas need quoting or escapes.

#include <cstddef>
#include <string>
#include <vector>

#include "mwsense/errors.hpp"

namespace mwsense::detail {

struct CsvRow {
    std::vector<std::string> fields;
    std::size_t line = 0;  // 1-based
};

/// Split text into rows of trimmed comma-separated fields. Blank lines and
/// lines starting with '#' are skipped.
std::vector<CsvRow> parse_csv(const std::string& text);

std::string trim(const std::string& s);
std::string to_lower(std::string s);

/// Whole-token numeric parse; throws ParseError naming the line on failure.
double parse_double(const std::string& field, std::size_t line, const std::string& what);

/// Throws ParseError(line 1) unless the row matches the expected header
/// (case-insensitive). When allow_trailing_source is set, one extra trailing
/// "source" column is tolerated; returns true when it is present.
bool require_header(const CsvRow& row, const std::vector<std::string>& expected,
                    bool allow_trailing_source = false);

/// Read a whole file; throws Error when it cannot be opened.
std::string slurp_file(const std::string& path);

}  // namespace mwsense::detail
