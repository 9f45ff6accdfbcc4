// mwsense command-line front end: inspect / resonances / calibrate / extract /
// report / simulate / fit-circuit / sensitivity. Frequency flags are in GHz
// unless the flag name says otherwise; diagnostics go to stderr and the exit
// code is 0 only when the command succeeded.

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mwsense/calibration.hpp"
#include "mwsense/circuitfit.hpp"
#include "mwsense/fixtures.hpp"
#include "mwsense/netlist_io.hpp"
#include "mwsense/network.hpp"
#include "mwsense/report.hpp"
#include "mwsense/resonance.hpp"
#include "mwsense/sensitivity.hpp"
#include "mwsense/touchstone.hpp"
#include "mwsense/version.hpp"

namespace {

using namespace mwsense;
using nlohmann::ordered_json;

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + out_path);
    out << text;
}

TraceMode parse_mode_flag(const std::string& mode) {
    const std::string m = lower(mode);
    if (m == "s21" || m == "transmission") return TraceMode::Transmission;
    if (m == "s11" || m == "reflection") return TraceMode::Reflection;
    throw Error("unknown --mode '" + mode + "' (expected s11|s21|reflection|transmission)");
}

// ---------------------------------------------------------------- inspect

void cmd_inspect(const std::string& file, const std::string& format) {
    const FrequencyResponse resp = load_response_file(file);
    if (resp.size() == 0) throw Error("file contains no data points: " + file);

    double min_s11 = 1e300, min_s21 = 1e300;
    for (const SMatrix& m : resp.s) {
        min_s11 = std::min(min_s11, std::max(magnitude_db(m.s11), kDbFloor));
        min_s21 = std::min(min_s21, std::max(magnitude_db(m.s21), kDbFloor));
    }

    if (format == "json") {
        ordered_json j;
        j["points"] = resp.size();
        j["fmin_ghz"] = resp.freqs_hz.front() / 1e9;
        j["fmax_ghz"] = resp.freqs_hz.back() / 1e9;
        j["min_s11_db"] = min_s11;
        j["min_s21_db"] = min_s21;
        j["z0_ohm"] = resp.z0_ohm;
        emit(j.dump(2) + "\n", "");
    } else {
        std::string out = "points,fmin_ghz,fmax_ghz,min_s11_db,min_s21_db,z0_ohm\n";
        out += std::to_string(resp.size()) + "," + fmt("%.10g", resp.freqs_hz.front() / 1e9) +
               "," + fmt("%.10g", resp.freqs_hz.back() / 1e9) + "," + fmt("%.10g", min_s11) +
               "," + fmt("%.10g", min_s21) + "," + fmt("%.10g", resp.z0_ohm) + "\n";
        emit(out, "");
    }
}

// ------------------------------------------------------------- resonances

void cmd_resonances(const std::string& file, const std::string& mode, double threshold_db,
                    double min_sep_hz, double q_offset_db, const std::string& format) {
    const FrequencyResponse resp = load_response_file(file);
    const TraceMode tm = parse_mode_flag(mode);
    std::vector<Resonance> notches = find_notches(resp, tm, threshold_db, min_sep_hz);
    for (Resonance& r : notches) {
        try {
            r.q = q_factor(resp, r, q_offset_db);
        } catch (const Error&) {
            // one-sided or degenerate crossing: leave q empty
        }
    }

    const char* mode_name = tm == TraceMode::Transmission ? "transmission" : "reflection";
    if (format == "json") {
        ordered_json arr = ordered_json::array();
        for (const Resonance& r : notches) {
            ordered_json j;
            j["mode"] = mode_name;
            j["frequency_ghz"] = r.frequency_hz / 1e9;
            j["depth_db"] = r.depth_db;
            j["q"] = r.q ? ordered_json(*r.q) : ordered_json(nullptr);
            j["grid_index"] = r.grid_index;
            arr.push_back(j);
        }
        emit(arr.dump(2) + "\n", "");
    } else {
        std::string out = "mode,frequency_ghz,depth_db,q,grid_index\n";
        for (const Resonance& r : notches) {
            out += std::string(mode_name) + "," + fmt("%.10g", r.frequency_hz / 1e9) + "," +
                   fmt("%.10g", r.depth_db) + ",";
            if (r.q) out += fmt("%.10g", *r.q);
            out += "," + std::to_string(r.grid_index) + "\n";
        }
        emit(out, "");
    }
}

// -------------------------------------------------------------- calibrate

void cmd_calibrate(const std::string& samples_file, bool anchor_air, const std::string& out_path,
                   const std::string& format) {
    const auto samples = read_samples_csv(slurp(samples_file));
    const CalibrationModel model = fit(samples, anchor_air);
    const std::string provenance = std::string(anchor_air ? "anchored" : "unanchored") +
                                   " least-squares fit of " + samples_file;

    if (format == "csv") {
        std::string out = "x1_ghz,x2_ghz_per_eps,x3_ghz_per_eps2,eps_min,eps_max\n";
        out += fmt("%.12g", model.x1_ghz) + "," + fmt("%.12g", model.x2_ghz_per_eps) + "," +
               fmt("%.12g", model.x3_ghz_per_eps2) + "," + fmt("%.12g", model.eps_min) + "," +
               fmt("%.12g", model.eps_max) + "\n";
        emit(out, out_path);
    } else {
        emit(write_model_json(model, provenance), out_path);
    }
}

// ---------------------------------------------------------------- extract

CalibrationModel resolve_model(const std::string& model_file, const std::string& preset) {
    if (!model_file.empty()) return read_model_json(slurp(model_file));
    if (preset == "reference") return reference_model();
    throw Error("unknown preset '" + preset + "' (available: reference)");
}

void cmd_extract(const std::string& model_file, const std::string& preset,
                 std::vector<double> freqs_ghz, const std::string& freqs_file,
                 const std::string& format) {
    const CalibrationModel model = resolve_model(model_file, preset);
    if (!freqs_file.empty()) {
        std::istringstream in(slurp(freqs_file));
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            bool blank = true;
            for (char c : line)
                if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
            if (blank) continue;
            char* end = nullptr;
            const double v = std::strtod(line.c_str(), &end);
            while (end && *end && std::isspace(static_cast<unsigned char>(*end))) ++end;
            if (!end || *end) throw ParseError(line_no, "malformed frequency '" + line + "'");
            freqs_ghz.push_back(v);
        }
    }
    if (freqs_ghz.empty()) throw Error("no frequencies given (use --freq-ghz or --freqs-file)");

    if (format == "json") {
        ordered_json arr = ordered_json::array();
        for (double f : freqs_ghz)
            arr.push_back({{"freq_ghz", f}, {"permittivity", invert(model, f)}});
        emit(arr.dump(2) + "\n", "");
    } else {
        std::string out = "freq_ghz,permittivity\n";
        for (double f : freqs_ghz)
            out += fmt("%.10g", f) + "," + fmt("%.10g", invert(model, f)) + "\n";
        emit(out, "");
    }
}

// ----------------------------------------------------------------- report

void cmd_report(const std::string& tables, const std::string& fixtures_dir,
                const std::string& format) {
    ReportSelection sel{false, false};
    std::stringstream ss(tables);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok == "5")
            sel.table5 = true;
        else if (tok == "6")
            sel.table6 = true;
        else if (!tok.empty())
            throw Error("unknown table '" + tok + "' (available: 5, 6)");
    }
    const std::string dir = fixtures_dir.empty() ? default_fixture_dir() : fixtures_dir;
    const FixtureSet fx = load_fixtures(dir);
    emit(format == "json" ? render_report_json(fx, sel) : render_report_csv(fx, sel), "");
}

// --------------------------------------------------------------- simulate

void cmd_simulate(const std::string& netlist_file, double fmin_ghz, double fmax_ghz,
                  std::size_t points, const std::string& out_path, const std::string& format) {
    const Netlist n = parse_netlist(slurp(netlist_file));
    const auto freqs = linear_sweep(fmin_ghz * 1e9, fmax_ghz * 1e9, points);
    const FrequencyResponse resp = simulate(n, freqs);

    if (format == "csv") {
        emit(write_response_csv(resp), out_path);
    } else if (format == "json") {
        ordered_json arr = ordered_json::array();
        for (std::size_t i = 0; i < resp.size(); ++i) {
            arr.push_back({{"freq_hz", resp.freqs_hz[i]},
                           {"s11_re", resp.s[i].s11.real()},
                           {"s11_im", resp.s[i].s11.imag()},
                           {"s21_re", resp.s[i].s21.real()},
                           {"s21_im", resp.s[i].s21.imag()},
                           {"s12_re", resp.s[i].s12.real()},
                           {"s12_im", resp.s[i].s12.imag()},
                           {"s22_re", resp.s[i].s22.real()},
                           {"s22_im", resp.s[i].s22.imag()}});
        }
        emit(arr.dump(2) + "\n", out_path);
    } else {
        OptionLine opts;
        opts.format = SFormat::Ri;
        opts.resistance_ohm = n.z0_ohm;
        emit(write_touchstone(resp, opts), out_path);
    }
}

// ------------------------------------------------------------ fit-circuit

void cmd_fit_circuit(const std::string& template_file, const std::string& target_file,
                     std::uint64_t seed, int restarts, int max_iters, double tol,
                     const std::string& channels, const std::string& out_path,
                     const std::string& format) {
    FitProblem prob;
    prob.tmpl = parse_netlist_template(slurp(template_file));
    if (prob.tmpl.free_params.empty())
        throw Error("netlist template declares no free parameters ('?init:lower:upper')");
    prob.target = load_response_file(target_file);
    if (channels == "s11") {
        prob.use_s11 = true;
        prob.use_s21 = false;
    } else if (channels == "s21") {
        prob.use_s11 = false;
        prob.use_s21 = true;
    } else if (channels == "both") {
        prob.use_s11 = true;
        prob.use_s21 = true;
    } else {
        throw Error("unknown --channels '" + channels + "' (expected s11|s21|both)");
    }

    FitOptions opts;
    opts.seed = seed;
    opts.restarts = restarts;
    opts.max_iters = max_iters;
    opts.tol = tol;
    const FitResult result = fit_netlist(prob, opts);

    Netlist fitted = prob.tmpl.netlist;
    apply_params(fitted, prob.tmpl.free_params, result.values);

    const char* field_names[] = {"r_ohm", "l_h", "c_f"};
    if (format == "csv") {
        std::string out = "element_index,field,value\n";
        for (std::size_t i = 0; i < result.values.size(); ++i) {
            const FreeParam& fp = prob.tmpl.free_params[i];
            out += std::to_string(fp.element_index) + "," +
                   field_names[static_cast<int>(fp.field)] + "," +
                   fmt("%.12g", result.values[i]) + "\n";
        }
        out += "\nresidual_db_rms," + fmt("%.12g", result.residual_db_rms) + "\n";
        out += "iterations," + std::to_string(result.iterations) + "\n";
        out += std::string("converged,") + (result.converged ? "true" : "false") + "\n";
        emit(out, out_path);
    } else {
        ordered_json j;
        j["parameters"] = ordered_json::array();
        for (std::size_t i = 0; i < result.values.size(); ++i) {
            const FreeParam& fp = prob.tmpl.free_params[i];
            j["parameters"].push_back({{"element_index", fp.element_index},
                                       {"field", field_names[static_cast<int>(fp.field)]},
                                       {"value", result.values[i]}});
        }
        j["residual_db_rms"] = result.residual_db_rms;
        j["iterations"] = result.iterations;
        j["converged"] = result.converged;
        j["netlist"] = ordered_json::parse(write_netlist_json(fitted));
        emit(j.dump(2) + "\n", out_path);
    }
}

// ------------------------------------------------------------ sensitivity

void cmd_sensitivity(const std::string& sweep_file, std::optional<double> tol_ghz,
                     const std::string& format) {
    const auto points = read_sweep_csv(slurp(sweep_file));
    if (points.empty()) throw Error("sweep file has no data rows");

    if (points.front().kind == ControlKind::ThicknessMm) {
        if (!tol_ghz) throw Error("thickness sweeps need --tol-ghz for saturation detection");
        const double sat = thickness_saturation(points, *tol_ghz);
        if (format == "json") {
            ordered_json j;
            j["saturation_thickness_mm"] = sat;
            j["tol_ghz"] = *tol_ghz;
            emit(j.dump(2) + "\n", "");
        } else {
            emit("saturation_thickness_mm,tol_ghz\n" + fmt("%.10g", sat) + "," +
                     fmt("%.10g", *tol_ghz) + "\n",
                 "");
        }
        return;
    }

    const SensitivityReport rep = sensitivity_report(points);
    if (format == "json") {
        ordered_json j;
        j["pairs"] = ordered_json::array();
        for (const auto& p : rep.pairs)
            j["pairs"].push_back({{"eps_low", p.eps_low},
                                  {"eps_high", p.eps_high},
                                  {"sensitivity_percent", p.sensitivity_percent}});
        j["endpoint_percent"] = rep.endpoint_percent;
        emit(j.dump(2) + "\n", "");
    } else {
        std::string out = "kind,eps_low,eps_high,sensitivity_percent\n";
        for (const auto& p : rep.pairs)
            out += "pair," + fmt("%.10g", p.eps_low) + "," + fmt("%.10g", p.eps_high) + "," +
                   fmt("%.6g", p.sensitivity_percent) + "\n";
        out += "endpoint," + fmt("%.10g", rep.pairs.front().eps_low) + "," +
               fmt("%.10g", rep.pairs.back().eps_high) + "," +
               fmt("%.6g", rep.endpoint_percent) + "\n";
        emit(out, "");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"analysis toolkit for resonant microwave permittivity sensors"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(mwsense::kVersion));

    std::string file, format, out_path, mode = "s21";
    double threshold_db = -10.0, min_sep_hz = 50e6, q_offset_db = 3.0;
    bool anchor_air = true;
    std::string model_file, preset = "reference", freqs_file;
    std::vector<double> freqs_ghz;
    std::string tables = "5,6", fixtures_dir;
    double fmin_ghz = 1.0, fmax_ghz = 15.0;
    std::size_t points = 1001;
    std::string target_file, channels = "s21";
    std::uint64_t seed = 0;
    int restarts = 0, max_iters = 2000;
    double tol = 1e-12;
    double tol_ghz_val = 0.0;

    auto add_format = [&](CLI::App* cmd, const char* desc = "output format: csv|json") {
        cmd->add_option("--format", format, desc);
    };

    CLI::App* inspect = app.add_subcommand("inspect", "summarize an .s2p/.csv response file");
    inspect->add_option("file", file, "input file")->required();
    add_format(inspect);

    CLI::App* resonances = app.add_subcommand("resonances", "detect notches in a response file");
    resonances->add_option("file", file, "input file")->required();
    resonances->add_option("--mode", mode, "trace: s11|s21|reflection|transmission");
    resonances->add_option("--threshold-db", threshold_db, "detection threshold (dB, negative)");
    resonances->add_option("--min-sep-hz", min_sep_hz, "merge notches closer than this (Hz)");
    resonances->add_option("--q-offset-db", q_offset_db, "bandwidth level above the notch floor");
    add_format(resonances);

    CLI::App* calibrate =
        app.add_subcommand("calibrate", "fit a calibration model from a sample CSV");
    calibrate->add_option("samples", file, "CSV: name,permittivity,resonance_ghz,mode")
        ->required();
    calibrate->add_flag("--anchor-air,!--no-anchor-air", anchor_air,
                        "pin x1 to the eps=1 sample (default on)");
    calibrate->add_option("-o,--output", out_path, "write the model here instead of stdout");
    add_format(calibrate, "output format: json (default)|csv");

    CLI::App* extract = app.add_subcommand("extract", "invert a model: frequency -> permittivity");
    extract->add_option("--model", model_file, "calibration model JSON file");
    extract->add_option("--preset", preset, "named built-in model (default: reference)");
    extract->add_option("--freq-ghz", freqs_ghz, "notch frequency in GHz (repeatable)");
    extract->add_option("--freqs-file", freqs_file, "text file with one frequency (GHz) per line");
    add_format(extract);

    CLI::App* report = app.add_subcommand("report", "reproduce the bundled dataset's tables");
    report->add_option("--tables", tables, "comma list of tables to include (5,6)");
    report->add_option("--fixtures", fixtures_dir,
                       "fixture directory (default: MWSENSE_FIXTURE_DIR or the built-in path)");
    add_format(report);

    CLI::App* simulate = app.add_subcommand("simulate", "sweep a netlist and emit its response");
    simulate->add_option("netlist", file, "netlist JSON file")->required();
    simulate->add_option("--fmin-ghz", fmin_ghz, "sweep start (GHz)");
    simulate->add_option("--fmax-ghz", fmax_ghz, "sweep end (GHz)");
    simulate->add_option("--points", points, "sweep points (default 1001)");
    simulate->add_option("-o,--output", out_path, "write here instead of stdout");
    add_format(simulate, "output format: touchstone (default)|csv|json");

    CLI::App* fit_circuit =
        app.add_subcommand("fit-circuit", "fit a netlist template's free parameters to a target");
    fit_circuit->add_option("template", file, "netlist JSON with ?init:lower:upper parameters")
        ->required();
    fit_circuit->add_option("target", target_file, "target .s2p/.csv response")->required();
    fit_circuit->add_option("--seed", seed, "restart RNG seed");
    fit_circuit->add_option("--restarts", restarts, "extra log-uniform starts");
    fit_circuit->add_option("--max-iters", max_iters, "simplex iterations per start");
    fit_circuit->add_option("--tol", tol, "objective-spread convergence tolerance");
    fit_circuit->add_option("--channels", channels, "objective channels: s11|s21|both");
    fit_circuit->add_option("-o,--output", out_path, "write here instead of stdout");
    add_format(fit_circuit, "output format: json (default)|csv");

    CLI::App* sensitivity =
        app.add_subcommand("sensitivity", "sensitivity report / thickness saturation for a sweep");
    sensitivity
        ->add_option("sweep", file, "CSV: control_kind,control_value,resonance_ghz,depth_db")
        ->required();
    sensitivity->add_option("--tol-ghz", tol_ghz_val, "saturation tolerance for thickness sweeps");
    add_format(sensitivity);

    CLI11_PARSE(app, argc, argv);

    try {
        if (inspect->parsed()) {
            cmd_inspect(file, format.empty() ? "csv" : format);
        } else if (resonances->parsed()) {
            cmd_resonances(file, mode, threshold_db, min_sep_hz, q_offset_db,
                           format.empty() ? "csv" : format);
        } else if (calibrate->parsed()) {
            cmd_calibrate(file, anchor_air, out_path, format.empty() ? "json" : format);
        } else if (extract->parsed()) {
            cmd_extract(model_file, preset, freqs_ghz, freqs_file,
                        format.empty() ? "csv" : format);
        } else if (report->parsed()) {
            cmd_report(tables, fixtures_dir, format.empty() ? "csv" : format);
        } else if (simulate->parsed()) {
            cmd_simulate(file, fmin_ghz, fmax_ghz, points, out_path,
                         format.empty() ? "touchstone" : format);
        } else if (fit_circuit->parsed()) {
            cmd_fit_circuit(file, target_file, seed, restarts, max_iters, tol, channels,
                            out_path, format.empty() ? "json" : format);
        } else if (sensitivity->parsed()) {
            cmd_sensitivity(file,
                            sensitivity->count("--tol-ghz") > 0
                                ? std::optional<double>(tol_ghz_val)
                                : std::nullopt,
                            format.empty() ? "csv" : format);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
