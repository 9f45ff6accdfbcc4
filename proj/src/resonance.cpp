#include "mwsense/resonance.hpp"

#include <algorithm>
#include <cmath>

namespace mwsense {

std::vector<double> db_trace(const FrequencyResponse& resp, TraceMode mode) {
    resp.validate();
    std::vector<double> d(resp.size());
    for (std::size_t i = 0; i < resp.size(); ++i) {
        const Complex s = mode == TraceMode::Reflection ? resp.s[i].s11 : resp.s[i].s21;
        d[i] = std::max(magnitude_db(s), kDbFloor);
    }
    return d;
}

std::pair<double, double> refine_parabolic(double f_prev, double f_min, double f_next,
                                           double d_prev, double d_min, double d_next) {
    if (!(f_prev < f_min && f_min < f_next))
        throw Error("refine_parabolic: frequencies must be strictly ascending");
    if (!(d_min <= d_prev && d_min <= d_next))
        throw Error("refine_parabolic: middle sample must be the minimum");

    const double slope01 = (d_min - d_prev) / (f_min - f_prev);
    const double slope12 = (d_next - d_min) / (f_next - f_min);
    const double curvature = (slope12 - slope01) / (f_next - f_prev);
    if (curvature == 0.0) return {f_min, d_min};

    double f_star = 0.5 * (f_prev + f_min) - slope01 / (2.0 * curvature);
    f_star = std::clamp(f_star, f_prev, f_next);
    const double d_star =
        d_prev + slope01 * (f_star - f_prev) + curvature * (f_star - f_prev) * (f_star - f_min);
    return {f_star, d_star};
}

std::vector<Resonance> find_notches(const FrequencyResponse& resp, TraceMode mode,
                                    double threshold_db, double min_separation_hz) {
    if (resp.size() < 3) throw Error("notch detection needs at least 3 points");
    if (!(threshold_db < 0.0)) throw Error("detection threshold must be negative (dB)");
    if (min_separation_hz < 0.0) throw Error("min_separation_hz must be nonnegative");

    const std::vector<double> d = db_trace(resp, mode);
    const std::vector<double>& f = resp.freqs_hz;
    const std::size_t n = d.size();

    // interior local minima; a flat run counts once, at its midpoint
    std::vector<Resonance> found;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && d[j + 1] == d[i]) ++j;
        if (i > 0 && j + 1 < n && d[i - 1] > d[i] && d[j + 1] > d[i] && d[i] < threshold_db) {
            const std::size_t mid = i + (j - i) / 2;
            const auto [fr, dr] = refine_parabolic(f[mid - 1], f[mid], f[mid + 1],
                                                   d[mid - 1], d[mid], d[mid + 1]);
            found.push_back({fr, dr, std::nullopt, mode, mid});
        }
        i = j + 1;
    }

    // merge: deepest first, drop anything within min_separation of a keeper
    std::sort(found.begin(), found.end(), [](const Resonance& a, const Resonance& b) {
        if (a.depth_db != b.depth_db) return a.depth_db < b.depth_db;
        return a.frequency_hz < b.frequency_hz;
    });
    std::vector<Resonance> kept;
    for (const Resonance& c : found) {
        const bool clashes = std::any_of(kept.begin(), kept.end(), [&](const Resonance& k) {
            return std::fabs(c.frequency_hz - k.frequency_hz) < min_separation_hz;
        });
        if (!clashes) kept.push_back(c);
    }
    std::sort(kept.begin(), kept.end(), [](const Resonance& a, const Resonance& b) {
        return a.frequency_hz < b.frequency_hz;
    });
    return kept;
}

double q_factor(const FrequencyResponse& resp, const Resonance& r, double offset_db) {
    if (!(offset_db > 0.0)) throw Error("q_factor offset must be positive (dB)");
    const std::vector<double> d = db_trace(resp, r.mode);
    const std::vector<double>& f = resp.freqs_hz;
    const std::size_t n = d.size();
    if (r.grid_index >= n) throw Error("resonance grid index out of range");

    const double level = r.depth_db + offset_db;
    if (d[r.grid_index] >= level)
        throw Error("q_factor: trace at the notch minimum is above the crossing level");

    // walk outward to the first sample at or above the crossing level
    std::size_t k = r.grid_index;
    while (k > 0 && d[k] < level) --k;
    if (d[k] < level) throw Error("q_factor: no crossing found on the left side of the notch");
    const double f_left = f[k] + (level - d[k]) * (f[k + 1] - f[k]) / (d[k + 1] - d[k]);

    k = r.grid_index;
    while (k + 1 < n && d[k] < level) ++k;
    if (d[k] < level) throw Error("q_factor: no crossing found on the right side of the notch");
    const double f_right = f[k - 1] + (level - d[k - 1]) * (f[k] - f[k - 1]) / (d[k] - d[k - 1]);

    if (!(f_right > f_left)) throw Error("q_factor: degenerate bandwidth");
    return r.frequency_hz / (f_right - f_left);
}

}  // namespace mwsense
