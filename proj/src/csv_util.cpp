#include "csv_util.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace mwsense::detail {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string to_lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::vector<CsvRow> parse_csv(const std::string& text) {
    std::vector<CsvRow> rows;
    std::size_t line_no = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        CsvRow row;
        row.line = line_no;
        std::size_t start = 0;
        while (true) {
            std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                row.fields.push_back(trim(line.substr(start)));
                break;
            }
            row.fields.push_back(trim(line.substr(start, comma - start)));
            start = comma + 1;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

double parse_double(const std::string& field, std::size_t line, const std::string& what) {
    const std::string t = trim(field);
    if (t.empty()) throw ParseError(line, "empty " + what);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size())
        throw ParseError(line, "malformed " + what + " '" + field + "'");
    return v;
}

bool require_header(const CsvRow& row, const std::vector<std::string>& expected,
                    bool allow_trailing_source) {
    bool has_source = false;
    std::size_t n = row.fields.size();
    if (allow_trailing_source && n == expected.size() + 1 &&
        to_lower(row.fields.back()) == "source") {
        has_source = true;
        n = expected.size();
    }
    if (n != expected.size()) {
        throw ParseError(row.line, "unexpected header: got " + std::to_string(row.fields.size()) +
                                       " columns, expected " + std::to_string(expected.size()));
    }
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (to_lower(row.fields[i]) != expected[i])
            throw ParseError(row.line, "unexpected header column '" + row.fields[i] +
                                           "' (expected '" + expected[i] + "')");
    }
    return has_source;
}

std::string slurp_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace mwsense::detail
