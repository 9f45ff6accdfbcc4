#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mwsense/errors.hpp"

namespace mwsense {

enum class ControlKind { Permittivity, ThicknessMm };

/// One row of a parameter sweep: either a permittivity or an MUT-thickness
/// control value and the resonance it produced.
struct SweepPoint {
    ControlKind kind = ControlKind::Permittivity;
    double control = 0.0;
    double resonance_ghz = 0.0;
    std::optional<double> depth_db;
};

/// Normalized average sensitivity in percent:
///
///     S_av = |f_low - f_high| / (f_low * (eps_high - eps_low)) * 100
///
/// where f_low is the resonance at the lower permittivity (the normalizer).
/// Requires eps_high > eps_low >= 1 and positive frequencies.
double normalized_average_sensitivity(double f_low_eps_ghz, double f_high_eps_ghz,
                                      double eps_low, double eps_high);

struct SensitivityReport {
    struct PairEntry {
        double eps_low = 0.0;
        double eps_high = 0.0;
        double sensitivity_percent = 0.0;
    };
    std::vector<PairEntry> pairs;       ///< adjacent-pair values, ascending eps
    double endpoint_percent = 0.0;      ///< full-span value
};

/// Per-adjacent-pair and endpoint sensitivities over a permittivity sweep.
/// Points are sorted by permittivity; duplicates are an error, as are fewer
/// than 2 points or a thickness-tagged sweep.
SensitivityReport sensitivity_report(std::span<const SweepPoint> points);

/// Thickness at which the resonance stops moving: the smallest listed
/// thickness whose entering frequency step and every later step stay within
/// tol_ghz (the first thickness when all steps qualify, the maximum listed
/// thickness when none do). Points are sorted by thickness; duplicates are an
/// error. Step comparisons carry a 1e-9 GHz slack so decimal inputs behave.
double thickness_saturation(std::span<const SweepPoint> points, double tol_ghz);

/// Sweep file: CSV `control_kind,control_value,resonance_ghz,depth_db` with
/// control_kind one of permittivity|thickness_mm and depth_db optional
/// (empty field). A trailing `source` column is tolerated and ignored.
std::vector<SweepPoint> read_sweep_csv(const std::string& text);
std::string write_sweep_csv(std::span<const SweepPoint> points);

}  // namespace mwsense
