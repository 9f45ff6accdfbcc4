#include "mwsense/fixtures.hpp"

#include <cstdlib>

#include "csv_util.hpp"

#ifndef MWSENSE_DEFAULT_FIXTURE_DIR
#define MWSENSE_DEFAULT_FIXTURE_DIR "fixtures"
#endif

namespace mwsense {

namespace {

using detail::parse_csv;
using detail::parse_double;
using detail::require_header;
using detail::slurp_file;

std::string join(const std::string& dir, const char* file) {
    if (dir.empty()) return file;
    return dir.back() == '/' ? dir + file : dir + "/" + file;
}

}  // namespace

std::string default_fixture_dir() {
    if (const char* env = std::getenv("MWSENSE_FIXTURE_DIR"); env && *env) return env;
    return MWSENSE_DEFAULT_FIXTURE_DIR;
}

FixtureSet load_fixtures(const std::string& dir) {
    FixtureSet fx;

    {
        const auto rows = parse_csv(slurp_file(join(dir, "table2_thickness_sweep.csv")));
        if (rows.empty()) throw Error("table2 fixture is empty");
        require_header(rows[0], {"thickness_mm", "s21_freq_ghz", "s21_depth_db", "s11_freq_ghz",
                                 "s11_depth_db", "source"});
        for (std::size_t r = 1; r < rows.size(); ++r) {
            const auto& f = rows[r].fields;
            if (f.size() != 6) throw ParseError(rows[r].line, "table2 row needs 6 columns");
            fx.table2.push_back({parse_double(f[0], rows[r].line, "thickness_mm"),
                                 parse_double(f[1], rows[r].line, "s21_freq_ghz"),
                                 parse_double(f[2], rows[r].line, "s21_depth_db"),
                                 parse_double(f[3], rows[r].line, "s11_freq_ghz"),
                                 parse_double(f[4], rows[r].line, "s11_depth_db"), f[5]});
        }
    }
    {
        const auto rows = parse_csv(slurp_file(join(dir, "table3_permittivity_sweep.csv")));
        if (rows.empty()) throw Error("table3 fixture is empty");
        require_header(rows[0], {"permittivity", "s21_freq_ghz", "source"});
        for (std::size_t r = 1; r < rows.size(); ++r) {
            const auto& f = rows[r].fields;
            if (f.size() != 3) throw ParseError(rows[r].line, "table3 row needs 3 columns");
            fx.table3.push_back({parse_double(f[0], rows[r].line, "permittivity"),
                                 parse_double(f[1], rows[r].line, "s21_freq_ghz"), f[2]});
        }
    }
    {
        const auto rows = parse_csv(slurp_file(join(dir, "table4_material_peaks.csv")));
        if (rows.empty()) throw Error("table4 fixture is empty");
        require_header(rows[0],
                       {"material", "permittivity", "s21_freq_ghz", "s11_freq_ghz", "source"});
        for (std::size_t r = 1; r < rows.size(); ++r) {
            const auto& f = rows[r].fields;
            if (f.size() != 5) throw ParseError(rows[r].line, "table4 row needs 5 columns");
            fx.table4.push_back({f[0], parse_double(f[1], rows[r].line, "permittivity"),
                                 parse_double(f[2], rows[r].line, "s21_freq_ghz"),
                                 parse_double(f[3], rows[r].line, "s11_freq_ghz"), f[4]});
        }
    }
    {
        const auto rows = parse_csv(slurp_file(join(dir, "table5_calibration.csv")));
        if (rows.empty()) throw Error("table5 fixture is empty");
        require_header(rows[0], {"material", "permittivity", "simulated_peak_ghz",
                                 "calculated_peak_ghz", "source"});
        for (std::size_t r = 1; r < rows.size(); ++r) {
            const auto& f = rows[r].fields;
            if (f.size() != 5) throw ParseError(rows[r].line, "table5 row needs 5 columns");
            fx.table5.push_back({f[0], parse_double(f[1], rows[r].line, "permittivity"),
                                 parse_double(f[2], rows[r].line, "simulated_peak_ghz"),
                                 parse_double(f[3], rows[r].line, "calculated_peak_ghz"), f[4]});
        }
    }
    {
        const auto rows = parse_csv(slurp_file(join(dir, "table6_relative_error.csv")));
        if (rows.empty()) throw Error("table6 fixture is empty");
        require_header(rows[0], {"permittivity", "relative_error_percent", "material", "source"});
        for (std::size_t r = 1; r < rows.size(); ++r) {
            const auto& f = rows[r].fields;
            if (f.size() != 4) throw ParseError(rows[r].line, "table6 row needs 4 columns");
            fx.table6.push_back({parse_double(f[0], rows[r].line, "permittivity"),
                                 parse_double(f[1], rows[r].line, "relative_error_percent"),
                                 f[2], f[3]});
        }
    }
    {
        const auto rows = parse_csv(slurp_file(join(dir, "reported_values.csv")));
        if (rows.empty()) throw Error("reported_values fixture is empty");
        require_header(rows[0], {"name", "value", "unit", "source"});
        for (std::size_t r = 1; r < rows.size(); ++r) {
            const auto& f = rows[r].fields;
            if (f.size() != 4)
                throw ParseError(rows[r].line, "reported_values row needs 4 columns");
            fx.reported.push_back({f[0], parse_double(f[1], rows[r].line, "value"), f[2], f[3]});
        }
    }
    return fx;
}

double reported_value(const FixtureSet& fx, const std::string& name) {
    for (const ReportedValue& v : fx.reported)
        if (v.name == name) return v.value;
    throw Error("no reported value named '" + name + "' in the fixture set");
}

}  // namespace mwsense
