#include "mwsense/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <nlohmann/json.hpp>

#include "csv_util.hpp"

namespace mwsense {

namespace {

// Thin Householder QR least squares for design matrices with 2 or 3 columns.
// Returns the coefficient vector; throws on rank deficiency.
std::vector<double> solve_least_squares(std::vector<std::vector<double>> a,
                                        std::vector<double> y) {
    const std::size_t m = a.size();
    const std::size_t k = a.empty() ? 0 : a[0].size();
    if (m < k) throw Error("least squares: fewer rows than unknowns");

    double max_diag = 0.0;
    std::vector<double> diag(k, 0.0);
    for (std::size_t col = 0; col < k; ++col) {
        double norm2 = 0.0;
        for (std::size_t r = col; r < m; ++r) norm2 += a[r][col] * a[r][col];
        const double alpha = a[col][col] >= 0.0 ? -std::sqrt(norm2) : std::sqrt(norm2);
        diag[col] = alpha;
        max_diag = std::max(max_diag, std::fabs(alpha));

        // Householder vector v = x - alpha*e1 stored in place of the column
        a[col][col] -= alpha;
        double vnorm2 = 0.0;
        for (std::size_t r = col; r < m; ++r) vnorm2 += a[r][col] * a[r][col];
        if (vnorm2 == 0.0) continue;  // column already zero below the diagonal

        for (std::size_t c2 = col + 1; c2 < k; ++c2) {
            double dot = 0.0;
            for (std::size_t r = col; r < m; ++r) dot += a[r][col] * a[r][c2];
            const double beta = 2.0 * dot / vnorm2;
            for (std::size_t r = col; r < m; ++r) a[r][c2] -= beta * a[r][col];
        }
        double dot = 0.0;
        for (std::size_t r = col; r < m; ++r) dot += a[r][col] * y[r];
        const double beta = 2.0 * dot / vnorm2;
        for (std::size_t r = col; r < m; ++r) y[r] -= beta * a[r][col];
    }

    for (std::size_t col = 0; col < k; ++col)
        if (std::fabs(diag[col]) <= 1e-12 * std::max(max_diag, 1.0))
            throw Error("degenerate design matrix (rank-deficient fit)");

    // R is upper triangular with diag[] on the diagonal and the applied
    // reflections above it
    std::vector<double> x(k, 0.0);
    for (std::size_t col = k; col-- > 0;) {
        double acc = y[col];
        for (std::size_t c2 = col + 1; c2 < k; ++c2) acc -= a[col][c2] * x[c2];
        x[col] = acc / diag[col];
    }
    return x;
}

TraceMode parse_mode(const std::string& field, std::size_t line) {
    const std::string m = detail::to_lower(detail::trim(field));
    if (m == "transmission" || m == "s21") return TraceMode::Transmission;
    if (m == "reflection" || m == "s11") return TraceMode::Reflection;
    throw ParseError(line, "unknown mode '" + field + "' (expected transmission|reflection)");
}

nlohmann::json parse_json(const std::string& text, const char* what) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("invalid ") + what + " JSON: " + e.what());
    }
}

}  // namespace

double CalibrationModel::vertex_eps() const {
    if (x3_ghz_per_eps2 == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 + x2_ghz_per_eps / (2.0 * x3_ghz_per_eps2);
}

void CalibrationModel::validate() const {
    if (!(x1_ghz > 0.0) || !std::isfinite(x1_ghz)) throw Error("model x1 must be positive");
    if (!(x2_ghz_per_eps > 0.0) || !std::isfinite(x2_ghz_per_eps))
        throw Error("model x2 must be positive (decreasing resonance)");
    if (!(x3_ghz_per_eps2 >= 0.0) || !std::isfinite(x3_ghz_per_eps2))
        throw Error("model x3 must be nonnegative");
    if (!(eps_min >= 1.0) || !(eps_max >= eps_min))
        throw Error("model validity range must satisfy 1 <= eps_min <= eps_max");
    if (!(eps_max < vertex_eps()))
        throw Error("model validity range must end below the parabola vertex");
}

double evaluate(const CalibrationModel& m, double eps) {
    m.validate();
    if (!(eps >= m.eps_min) || !(eps <= m.eps_max))
        throw Error("permittivity " + std::to_string(eps) + " outside model range [" +
                    std::to_string(m.eps_min) + ", " + std::to_string(m.eps_max) + "]");
    const double d = eps - 1.0;
    return m.x1_ghz - m.x2_ghz_per_eps * d + m.x3_ghz_per_eps2 * d * d;
}

CalibrationModel fit(std::span<const MaterialSample> samples, bool anchor_air) {
    std::set<double> distinct;
    for (const MaterialSample& s : samples) {
        if (!(s.permittivity >= 1.0)) throw Error("sample permittivity must be >= 1");
        if (!(s.resonance_ghz > 0.0)) throw Error("sample resonance must be positive");
        distinct.insert(s.permittivity);
    }
    if (distinct.size() < 3)
        throw Error("fit needs at least 3 samples with distinct permittivities");

    CalibrationModel model;
    model.eps_min = *distinct.begin();
    model.eps_max = *distinct.rbegin();

    if (anchor_air) {
        const MaterialSample* air = nullptr;
        for (const MaterialSample& s : samples) {
            if (s.permittivity == 1.0) {
                if (air) throw Error("anchored fit requires exactly one air (eps = 1) sample");
                air = &s;
            }
        }
        if (!air) throw Error("anchored fit requires exactly one air (eps = 1) sample");
        model.x1_ghz = air->resonance_ghz;

        std::vector<std::vector<double>> a;
        std::vector<double> y;
        for (const MaterialSample& s : samples) {
            const double d = s.permittivity - 1.0;
            a.push_back({-d, d * d});
            y.push_back(s.resonance_ghz - model.x1_ghz);
        }
        const auto x = solve_least_squares(std::move(a), std::move(y));
        model.x2_ghz_per_eps = x[0];
        model.x3_ghz_per_eps2 = x[1];
    } else {
        std::vector<std::vector<double>> a;
        std::vector<double> y;
        for (const MaterialSample& s : samples) {
            const double d = s.permittivity - 1.0;
            a.push_back({1.0, -d, d * d});
            y.push_back(s.resonance_ghz);
        }
        const auto x = solve_least_squares(std::move(a), std::move(y));
        model.x1_ghz = x[0];
        model.x2_ghz_per_eps = x[1];
        model.x3_ghz_per_eps2 = x[2];
    }

    try {
        model.validate();
    } catch (const Error& e) {
        throw Error(std::string("fitted model is not usable: ") + e.what());
    }
    return model;
}

double invert(const CalibrationModel& m, double f_ghz) {
    m.validate();
    const double f_lo = evaluate(m, m.eps_max);
    if (!(f_ghz >= f_lo) || !(f_ghz <= m.x1_ghz))
        throw Error("frequency " + std::to_string(f_ghz) + " GHz outside invertible range [" +
                    std::to_string(f_lo) + ", " + std::to_string(m.x1_ghz) + "]");

    if (m.x3_ghz_per_eps2 == 0.0) return 1.0 + (m.x1_ghz - f_ghz) / m.x2_ghz_per_eps;

    const double disc =
        m.x2_ghz_per_eps * m.x2_ghz_per_eps - 4.0 * m.x3_ghz_per_eps2 * (m.x1_ghz - f_ghz);
    if (disc < 0.0) throw Error("negative discriminant inverting the calibration model");
    return 1.0 + (m.x2_ghz_per_eps - std::sqrt(disc)) / (2.0 * m.x3_ghz_per_eps2);
}

double relative_error_percent(double simulated_ghz, double calculated_ghz, double measured_ghz) {
    if (measured_ghz == 0.0) throw Error("relative error needs a nonzero measured value");
    return (simulated_ghz - calculated_ghz) / measured_ghz * 100.0;
}

double absolute_relative_error_percent(double simulated_ghz, double calculated_ghz,
                                       double measured_ghz) {
    return std::fabs(relative_error_percent(simulated_ghz, calculated_ghz, measured_ghz));
}

CalibrationModel reference_model() {
    return {3.99, 0.3512, 0.0230, 1.0, 4.3};
}

std::vector<MaterialSample> read_samples_csv(const std::string& text) {
    const auto rows = detail::parse_csv(text);
    if (rows.empty()) throw ParseError(1, "missing CSV header");
    detail::require_header(rows[0], {"name", "permittivity", "resonance_ghz", "mode"}, true);

    std::vector<MaterialSample> samples;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() < 4)
            throw ParseError(row.line,
                             "expected 4 columns, got " + std::to_string(row.fields.size()));
        MaterialSample s;
        s.name = row.fields[0];
        s.permittivity = detail::parse_double(row.fields[1], row.line, "permittivity");
        s.resonance_ghz = detail::parse_double(row.fields[2], row.line, "resonance_ghz");
        s.mode = parse_mode(row.fields[3], row.line);
        samples.push_back(std::move(s));
    }
    return samples;
}

std::string write_model_json(const CalibrationModel& m, const std::string& provenance) {
    m.validate();
    nlohmann::ordered_json j;
    j["x1_ghz"] = m.x1_ghz;
    j["x2_ghz_per_eps"] = m.x2_ghz_per_eps;
    j["x3_ghz_per_eps2"] = m.x3_ghz_per_eps2;
    j["eps_min"] = m.eps_min;
    j["eps_max"] = m.eps_max;
    j["provenance"] = provenance;
    return j.dump(2) + "\n";
}

CalibrationModel read_model_json(const std::string& text) {
    const nlohmann::json j = parse_json(text, "calibration model");
    if (!j.is_object()) throw Error("calibration model JSON must be an object");
    CalibrationModel m;
    try {
        m.x1_ghz = j.at("x1_ghz").get<double>();
        m.x2_ghz_per_eps = j.at("x2_ghz_per_eps").get<double>();
        m.x3_ghz_per_eps2 = j.at("x3_ghz_per_eps2").get<double>();
        m.eps_min = j.at("eps_min").get<double>();
        m.eps_max = j.at("eps_max").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("invalid calibration model JSON: ") + e.what());
    }
    m.validate();
    return m;
}

}  // namespace mwsense
