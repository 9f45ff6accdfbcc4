#include "mwsense/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "csv_util.hpp"

namespace mwsense {

namespace {

// absorbs binary representation noise in decimal inputs like |3.61 - 3.59|
constexpr double kStepSlackGhz = 1e-9;

std::vector<SweepPoint> sorted_points(std::span<const SweepPoint> points, ControlKind expect,
                                      const char* what) {
    std::vector<SweepPoint> pts(points.begin(), points.end());
    for (const SweepPoint& p : pts) {
        if (p.kind != expect)
            throw Error(std::string("sweep must be ") + what + "-tagged");
        if (!(p.resonance_ghz > 0.0)) throw Error("sweep resonance must be positive");
    }
    std::sort(pts.begin(), pts.end(),
              [](const SweepPoint& a, const SweepPoint& b) { return a.control < b.control; });
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (pts[i].control == pts[i - 1].control)
            throw Error(std::string("duplicate ") + what + " value " +
                        std::to_string(pts[i].control));
    return pts;
}

void append_value(std::string& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    out += buf;
}

}  // namespace

double normalized_average_sensitivity(double f_low_eps_ghz, double f_high_eps_ghz,
                                      double eps_low, double eps_high) {
    if (!(eps_low >= 1.0)) throw Error("eps_low must be >= 1");
    if (!(eps_high > eps_low)) throw Error("eps_high must exceed eps_low");
    if (!(f_low_eps_ghz > 0.0) || !(f_high_eps_ghz > 0.0))
        throw Error("resonance frequencies must be positive");
    return std::fabs(f_low_eps_ghz - f_high_eps_ghz) /
           (f_low_eps_ghz * (eps_high - eps_low)) * 100.0;
}

SensitivityReport sensitivity_report(std::span<const SweepPoint> points) {
    if (points.size() < 2) throw Error("sensitivity report needs at least 2 sweep points");
    const auto pts = sorted_points(points, ControlKind::Permittivity, "permittivity");

    SensitivityReport rep;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        SensitivityReport::PairEntry e;
        e.eps_low = pts[i - 1].control;
        e.eps_high = pts[i].control;
        e.sensitivity_percent = normalized_average_sensitivity(
            pts[i - 1].resonance_ghz, pts[i].resonance_ghz, e.eps_low, e.eps_high);
        rep.pairs.push_back(e);
    }
    rep.endpoint_percent = normalized_average_sensitivity(
        pts.front().resonance_ghz, pts.back().resonance_ghz, pts.front().control,
        pts.back().control);
    return rep;
}

double thickness_saturation(std::span<const SweepPoint> points, double tol_ghz) {
    if (points.empty()) throw Error("thickness saturation needs a non-empty sweep");
    if (points.size() < 2) throw Error("thickness saturation needs at least 2 sweep points");
    if (!(tol_ghz > 0.0)) throw Error("saturation tolerance must be positive");
    const auto pts = sorted_points(points, ControlKind::ThicknessMm, "thickness");

    // step j is the frequency change entering point j; saturation starts at
    // the first point from which every step stays within tolerance
    const std::size_t n = pts.size();
    std::size_t last_bad = n;  // sentinel: none
    for (std::size_t j = 1; j < n; ++j) {
        const double step = std::fabs(pts[j].resonance_ghz - pts[j - 1].resonance_ghz);
        if (step > tol_ghz + kStepSlackGhz) last_bad = j;
    }
    if (last_bad == n) return pts.front().control;      // never moved more than tol
    if (last_bad == n - 1) return pts.back().control;   // still moving at the end
    return pts[last_bad + 1].control;
}

std::vector<SweepPoint> read_sweep_csv(const std::string& text) {
    const auto rows = detail::parse_csv(text);
    if (rows.empty()) throw ParseError(1, "missing CSV header");
    const bool has_source = detail::require_header(
        rows[0], {"control_kind", "control_value", "resonance_ghz", "depth_db"}, true);
    const std::size_t ncols = has_source ? 5 : 4;

    std::vector<SweepPoint> pts;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != ncols)
            throw ParseError(row.line, "expected " + std::to_string(ncols) + " columns, got " +
                                           std::to_string(row.fields.size()));
        SweepPoint p;
        const std::string kind = detail::to_lower(row.fields[0]);
        if (kind == "permittivity")
            p.kind = ControlKind::Permittivity;
        else if (kind == "thickness_mm")
            p.kind = ControlKind::ThicknessMm;
        else
            throw ParseError(row.line, "unknown control_kind '" + row.fields[0] +
                                           "' (expected permittivity|thickness_mm)");
        p.control = detail::parse_double(row.fields[1], row.line, "control_value");
        p.resonance_ghz = detail::parse_double(row.fields[2], row.line, "resonance_ghz");
        if (!row.fields[3].empty())
            p.depth_db = detail::parse_double(row.fields[3], row.line, "depth_db");
        pts.push_back(p);
    }
    return pts;
}

std::string write_sweep_csv(std::span<const SweepPoint> points) {
    std::string out = "control_kind,control_value,resonance_ghz,depth_db\n";
    for (const SweepPoint& p : points) {
        out += p.kind == ControlKind::Permittivity ? "permittivity" : "thickness_mm";
        out += ',';
        append_value(out, p.control);
        out += ',';
        append_value(out, p.resonance_ghz);
        out += ',';
        if (p.depth_db) append_value(out, *p.depth_db);
        out += '\n';
    }
    return out;
}

}  // namespace mwsense
