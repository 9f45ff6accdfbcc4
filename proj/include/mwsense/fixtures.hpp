#pragma once

#include <string>
#include <vector>

#include "mwsense/errors.hpp"

namespace mwsense {

// Verbatim transcriptions of the bundled reference-sensor dataset. Every row
// keeps a source label; values are never modified here — anything derived
// from them is computed elsewhere and written to separate outputs.

struct Table2Row {  // MUT thickness sweep
    double thickness_mm = 0.0;
    double s21_freq_ghz = 0.0;
    double s21_depth_db = 0.0;
    double s11_freq_ghz = 0.0;
    double s11_depth_db = 0.0;
    std::string source;
};

struct Table3Row {  // modeled S21 vs permittivity
    double permittivity = 0.0;
    double s21_freq_ghz = 0.0;
    std::string source;
};

struct Table4Row {  // standard-material peaks
    std::string material;
    double permittivity = 0.0;
    double s21_freq_ghz = 0.0;
    double s11_freq_ghz = 0.0;
    std::string source;
};

struct Table5Row {  // simulated vs calculated peaks
    std::string material;
    double permittivity = 0.0;
    double simulated_peak_ghz = 0.0;
    double calculated_peak_ghz = 0.0;
    std::string source;
};

struct Table6Row {  // tabulated relative errors
    double permittivity = 0.0;
    double relative_error_percent = 0.0;
    std::string material;
    std::string source;
};

/// Headline numbers quoted by the dataset outside its tables (unloaded notch
/// positions, stated sensitivities). Stored verbatim and source-labeled;
/// where the narrative and the tables disagree, both rows are kept.
struct ReportedValue {
    std::string name;
    double value = 0.0;
    std::string unit;
    std::string source;
};

struct FixtureSet {
    std::vector<Table2Row> table2;
    std::vector<Table3Row> table3;
    std::vector<Table4Row> table4;
    std::vector<Table5Row> table5;
    std::vector<Table6Row> table6;
    std::vector<ReportedValue> reported;
};

/// Fixture directory resolution: the MWSENSE_FIXTURE_DIR environment
/// variable if set, otherwise the location compiled in at build time
/// (the source tree's fixtures/).
std::string default_fixture_dir();

/// Load all fixture files from dir. Throws Error/ParseError on missing files
/// or malformed rows.
FixtureSet load_fixtures(const std::string& dir);

/// Lookup into FixtureSet::reported; throws if absent.
double reported_value(const FixtureSet& fx, const std::string& name);

}  // namespace mwsense
