#include "mwsense/report.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

#include "mwsense/calibration.hpp"
#include "mwsense/sensitivity.hpp"

namespace mwsense {

namespace {

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string compact(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct Summary {
    double computed_s21 = 0.0;
    double stated_s21 = 0.0;
    double computed_s11 = 0.0;
    double stated_s11 = 0.0;
    std::string note;
};

Summary sensitivity_summary(const FixtureSet& fx) {
    Summary s;
    std::vector<SweepPoint> sweep;
    for (const Table3Row& row : fx.table3)
        sweep.push_back({ControlKind::Permittivity, row.permittivity, row.s21_freq_ghz, {}});
    s.computed_s21 = sensitivity_report(sweep).endpoint_percent;

    const Table4Row* lo = &fx.table4.front();
    const Table4Row* hi = &fx.table4.back();
    for (const Table4Row& row : fx.table4) {
        if (row.permittivity < lo->permittivity) lo = &row;
        if (row.permittivity > hi->permittivity) hi = &row;
    }
    s.computed_s11 = normalized_average_sensitivity(lo->s11_freq_ghz, hi->s11_freq_ghz,
                                                    lo->permittivity, hi->permittivity);
    s.stated_s21 = reported_value(fx, "s21_sensitivity_stated_percent");
    s.stated_s11 = reported_value(fx, "s11_sensitivity_stated_percent");
    s.note = "stated headline sensitivity " + fixed(s.stated_s21, 3) +
             "% does not follow from the bundled sweep endpoints (computed " +
             fixed(s.computed_s21, 3) + "%)";
    return s;
}

}  // namespace

std::string render_report_csv(const FixtureSet& fx, const ReportSelection& sel) {
    const CalibrationModel model = reference_model();
    std::string out;

    if (sel.table5) {
        out += "table,material,permittivity,simulated_peak_ghz,calculated_peak_ghz\n";
        for (const Table5Row& row : fx.table5) {
            out += "5," + row.material + "," + compact(row.permittivity) + "," +
                   fixed(row.simulated_peak_ghz, 4) + "," +
                   fixed(evaluate(model, row.permittivity), 4) + "\n";
        }
        out += "\n";
    }
    if (sel.table6) {
        out += "table,material,permittivity,abs_relative_error_percent\n";
        for (const Table5Row& row : fx.table5) {
            const double calc = evaluate(model, row.permittivity);
            const double re = absolute_relative_error_percent(row.simulated_peak_ghz, calc,
                                                              row.simulated_peak_ghz);
            out += "6," + row.material + "," + compact(row.permittivity) + "," + fixed(re, 2) +
                   "\n";
        }
        out += "\n";
    }

    const Summary s = sensitivity_summary(fx);
    out += "metric,value_percent\n";
    out += "s21_endpoint_sensitivity_computed," + fixed(s.computed_s21, 3) + "\n";
    out += "s21_sensitivity_stated," + fixed(s.stated_s21, 3) + "\n";
    out += "s11_endpoint_sensitivity_computed," + fixed(s.computed_s11, 3) + "\n";
    out += "s11_sensitivity_stated," + fixed(s.stated_s11, 3) + "\n";
    out += "note," + s.note + "\n";
    return out;
}

std::string render_report_json(const FixtureSet& fx, const ReportSelection& sel) {
    const CalibrationModel model = reference_model();
    nlohmann::ordered_json j;

    if (sel.table5) {
        auto& arr = j["table5"] = nlohmann::ordered_json::array();
        for (const Table5Row& row : fx.table5) {
            arr.push_back({{"material", row.material},
                           {"permittivity", row.permittivity},
                           {"simulated_peak_ghz", fixed(row.simulated_peak_ghz, 4)},
                           {"calculated_peak_ghz", fixed(evaluate(model, row.permittivity), 4)}});
        }
    }
    if (sel.table6) {
        auto& arr = j["table6"] = nlohmann::ordered_json::array();
        for (const Table5Row& row : fx.table5) {
            const double calc = evaluate(model, row.permittivity);
            const double re = absolute_relative_error_percent(row.simulated_peak_ghz, calc,
                                                              row.simulated_peak_ghz);
            arr.push_back({{"material", row.material},
                           {"permittivity", row.permittivity},
                           {"abs_relative_error_percent", fixed(re, 2)}});
        }
    }

    const Summary s = sensitivity_summary(fx);
    j["sensitivity_summary"] = {
        {"s21_endpoint_sensitivity_computed_percent", fixed(s.computed_s21, 3)},
        {"s21_sensitivity_stated_percent", fixed(s.stated_s21, 3)},
        {"s11_endpoint_sensitivity_computed_percent", fixed(s.computed_s11, 3)},
        {"s11_sensitivity_stated_percent", fixed(s.stated_s11, 3)},
        {"note", s.note}};
    return j.dump(2) + "\n";
}

}  // namespace mwsense
