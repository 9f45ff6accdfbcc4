#pragma once

#include <string>

#include "mwsense/fixtures.hpp"

namespace mwsense {

/// Which reproduction tables to include in a report.
struct ReportSelection {
    bool table5 = true;
    bool table6 = true;
};

/// Reproduce the dataset's calculated-peak and relative-error columns from
/// the shipped calibration preset, plus a sensitivity summary over the
/// permittivity sweep. Output is fixed-format (4-decimal frequencies,
/// 2-decimal error percents, 3-decimal sensitivities) and byte-identical
/// across runs. The summary flags the dataset's stated headline sensitivity
/// against the value computed from its own sweep.
std::string render_report_csv(const FixtureSet& fx, const ReportSelection& sel);
std::string render_report_json(const FixtureSet& fx, const ReportSelection& sel);

}  // namespace mwsense
