#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mwsense/touchstone.hpp"

namespace mwsense {

/// Which magnitude trace an operation looks at: S11 or S21.
enum class TraceMode { Reflection, Transmission };

/// A detected notch.
struct Resonance {
    double frequency_hz = 0.0;  ///< parabola-refined frequency
    double depth_db = 0.0;      ///< dB value at the refined minimum
    std::optional<double> q;    ///< filled in by q_factor, not by detection
    TraceMode mode = TraceMode::Transmission;
    std::size_t grid_index = 0;  ///< index of the discrete minimum
};

/// dB magnitude trace of the selected channel, floored at kDbFloor so exact
/// zeros stay finite.
std::vector<double> db_trace(const FrequencyResponse& resp, TraceMode mode);

/// Find all notches strictly below threshold_db.
///
/// Every interior local minimum of the dB trace (plateaus count once, at
/// their midpoint) is refined by 3-point parabolic interpolation in
/// (frequency, dB). Notches closer than min_separation_hz are merged keeping
/// the deeper one; the result is sorted by ascending frequency and is stable
/// under re-merging. Requires at least 3 points and threshold_db < 0.
std::vector<Resonance> find_notches(const FrequencyResponse& resp, TraceMode mode,
                                    double threshold_db = -10.0,
                                    double min_separation_hz = 50e6);

/// Vertex of the parabola through three samples bracketing a minimum
/// (d_min <= d_prev and d_min <= d_next). Returns (frequency, depth);
/// collinear samples fall back to (f_min, d_min). The vertex never leaves
/// [f_prev, f_next].
std::pair<double, double> refine_parabolic(double f_prev, double f_min, double f_next,
                                           double d_prev, double d_min, double d_next);

/// Half-power-style Q: f0 divided by the bandwidth between the linearly
/// interpolated crossings of level (depth + offset_db) nearest the notch on
/// each side. The level is relative to the notch floor, not the 0 dB
/// baseline, so shallow notches still give a deterministic answer. Throws
/// naming the side if a crossing is missing.
double q_factor(const FrequencyResponse& resp, const Resonance& r, double offset_db = 3.0);

}  // namespace mwsense
