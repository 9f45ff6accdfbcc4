#include "mwsense/touchstone.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>

#include "csv_util.hpp"

namespace mwsense {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

double parse_number(const std::string& tok, std::size_t line) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size())
        throw ParseError(line, "malformed number '" + tok + "'");
    return v;
}

Complex decode_pair(SFormat fmt, double a, double b) {
    switch (fmt) {
        case SFormat::Ri:
            return {a, b};
        case SFormat::Ma:
            return std::polar(a, b * kDegToRad);
        case SFormat::Db:
            return std::polar(std::pow(10.0, a / 20.0), b * kDegToRad);
    }
    return {};
}

void encode_pair(SFormat fmt, Complex s, double& a, double& b) {
    switch (fmt) {
        case SFormat::Ri:
            a = s.real();
            b = s.imag();
            return;
        case SFormat::Ma:
            a = std::abs(s);
            b = std::arg(s) * kRadToDeg;
            return;
        case SFormat::Db: {
            const double db = magnitude_db(s);
            a = std::isinf(db) ? kDbFloor : db;
            b = std::arg(s) * kRadToDeg;
            return;
        }
    }
}

struct OptionParse {
    OptionLine opts;
    bool unit_set = false, param_set = false, format_set = false, resistance_set = false;
};

OptionLine parse_option_line(const std::string& body, std::size_t line) {
    OptionParse st;
    const auto tokens = split_ws(body);
    std::size_t i = 0;
    auto set_once = [line](bool& flag, const char* what) {
        if (flag) throw ParseError(line, std::string("malformed option line: duplicate ") + what);
        flag = true;
    };
    while (i < tokens.size()) {
        const std::string tok = detail::to_lower(tokens[i]);
        if (tok == "hz" || tok == "khz" || tok == "mhz" || tok == "ghz") {
            set_once(st.unit_set, "frequency unit");
            st.opts.freq_unit = tok == "hz" ? 1.0 : tok == "khz" ? 1e3 : tok == "mhz" ? 1e6 : 1e9;
        } else if (tok == "ri" || tok == "ma" || tok == "db") {
            set_once(st.format_set, "format");
            st.opts.format = tok == "ri" ? SFormat::Ri : tok == "ma" ? SFormat::Ma : SFormat::Db;
        } else if (tok == "r") {
            set_once(st.resistance_set, "reference resistance");
            if (i + 1 >= tokens.size())
                throw ParseError(line, "malformed option line: 'R' without a resistance value");
            st.opts.resistance_ohm = parse_number(tokens[++i], line);
            if (!(st.opts.resistance_ohm > 0.0))
                throw ParseError(line, "malformed option line: resistance must be positive");
        } else if (tok.size() == 1 && (tok == "s" || tok == "y" || tok == "z" || tok == "g" ||
                                       tok == "h")) {
            set_once(st.param_set, "parameter");
            st.opts.parameter = static_cast<char>(std::toupper(tok[0]));
        } else {
            throw ParseError(line, "malformed option line: unexpected token '" + tokens[i] + "'");
        }
        ++i;
    }
    if (st.opts.parameter != 'S')
        throw ParseError(line, std::string("only S-parameter files are supported (got '") +
                                   st.opts.parameter + "')");
    return st.opts;
}

void append_value(std::string& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    out += buf;
}

}  // namespace

void FrequencyResponse::validate() const {
    if (s.size() != freqs_hz.size())
        throw Error("frequency grid and S-matrix counts differ (" +
                    std::to_string(freqs_hz.size()) + " vs " + std::to_string(s.size()) + ")");
    if (!(z0_ohm > 0.0) || !std::isfinite(z0_ohm))
        throw Error("reference impedance must be positive");
    double last = 0.0;
    for (std::size_t i = 0; i < freqs_hz.size(); ++i) {
        if (!(freqs_hz[i] > 0.0) || !std::isfinite(freqs_hz[i]))
            throw Error("frequencies must be positive and finite");
        if (i > 0 && !(freqs_hz[i] > last))
            throw Error("frequencies must be strictly ascending");
        last = freqs_hz[i];
    }
}

void OptionLine::validate() const {
    if (freq_unit != 1.0 && freq_unit != 1e3 && freq_unit != 1e6 && freq_unit != 1e9)
        throw Error("frequency unit must be one of Hz/kHz/MHz/GHz");
    if (parameter != 'S') throw Error("only S-parameters are supported");
    if (!(resistance_ohm > 0.0)) throw Error("reference resistance must be positive");
}

double magnitude_db(Complex s) {
    const double m = std::abs(s);
    if (m == 0.0) return -std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(m);
}

FrequencyResponse parse_touchstone(const std::string& text) {
    FrequencyResponse resp;
    OptionLine opts;  // v1.1 defaults until an option line shows up
    bool option_seen = false;
    bool data_seen = false;

    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (const auto bang = raw.find('!'); bang != std::string::npos) raw.erase(bang);
        const std::string line = detail::trim(raw);
        if (line.empty()) continue;

        if (line[0] == '[')
            throw ParseError(line_no, "Touchstone v2 keyword '" + line +
                                          "' not supported; this reader handles v1 two-port files");

        if (line[0] == '#') {
            if (option_seen) throw ParseError(line_no, "duplicate option line");
            if (data_seen) throw ParseError(line_no, "option line after data");
            opts = parse_option_line(line.substr(1), line_no);
            option_seen = true;
            continue;
        }

        const auto tokens = split_ws(line);
        if (tokens.size() != 9)
            throw ParseError(line_no, "expected 9 columns (freq + 4 complex pairs), got " +
                                          std::to_string(tokens.size()));
        double cols[9];
        for (std::size_t i = 0; i < 9; ++i) cols[i] = parse_number(tokens[i], line_no);

        const double f = cols[0] * opts.freq_unit;
        if (!(f > 0.0)) throw ParseError(line_no, "non-positive frequency");
        if (!resp.freqs_hz.empty() && !(f > resp.freqs_hz.back()))
            throw ParseError(line_no, "non-monotonic frequency");

        // two-port column order: S11 S21 S12 S22
        SMatrix m;
        m.s11 = decode_pair(opts.format, cols[1], cols[2]);
        m.s21 = decode_pair(opts.format, cols[3], cols[4]);
        m.s12 = decode_pair(opts.format, cols[5], cols[6]);
        m.s22 = decode_pair(opts.format, cols[7], cols[8]);
        resp.freqs_hz.push_back(f);
        resp.s.push_back(m);
        data_seen = true;
    }
    resp.z0_ohm = opts.resistance_ohm;
    resp.validate();
    return resp;
}

std::string write_touchstone(const FrequencyResponse& resp, const OptionLine& opts) {
    resp.validate();
    opts.validate();

    const char* unit = opts.freq_unit == 1.0    ? "Hz"
                       : opts.freq_unit == 1e3  ? "kHz"
                       : opts.freq_unit == 1e6  ? "MHz"
                                                : "GHz";
    const char* fmt = opts.format == SFormat::Ri ? "RI" : opts.format == SFormat::Ma ? "MA" : "DB";

    std::string out = "# ";
    out += unit;
    out += " S ";
    out += fmt;
    out += " R ";
    append_value(out, opts.resistance_ohm);
    out += '\n';

    for (std::size_t i = 0; i < resp.size(); ++i) {
        append_value(out, resp.freqs_hz[i] / opts.freq_unit);
        const Complex vals[4] = {resp.s[i].s11, resp.s[i].s21, resp.s[i].s12, resp.s[i].s22};
        for (Complex v : vals) {
            double a = 0.0, b = 0.0;
            encode_pair(opts.format, v, a, b);
            out += ' ';
            append_value(out, a);
            out += ' ';
            append_value(out, b);
        }
        out += '\n';
    }
    return out;
}

FrequencyResponse read_response_csv(const std::string& text) {
    static const std::vector<std::string> kHeader = {"freq_hz",  "s11_re", "s11_im",
                                                     "s21_re",   "s21_im", "s12_re",
                                                     "s12_im",   "s22_re", "s22_im"};
    const auto rows = detail::parse_csv(text);
    if (rows.empty()) throw ParseError(1, "missing CSV header");
    detail::require_header(rows[0], kHeader);

    FrequencyResponse resp;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != 9)
            throw ParseError(row.line,
                             "expected 9 columns, got " + std::to_string(row.fields.size()));
        double v[9];
        for (std::size_t i = 0; i < 9; ++i)
            v[i] = detail::parse_double(row.fields[i], row.line, "value");
        if (!(v[0] > 0.0)) throw ParseError(row.line, "non-positive frequency");
        if (!resp.freqs_hz.empty() && !(v[0] > resp.freqs_hz.back()))
            throw ParseError(row.line, "non-monotonic frequency");
        resp.freqs_hz.push_back(v[0]);
        resp.s.push_back(SMatrix{{v[1], v[2]}, {v[5], v[6]}, {v[3], v[4]}, {v[7], v[8]}});
    }
    resp.validate();
    return resp;
}

std::string write_response_csv(const FrequencyResponse& resp) {
    resp.validate();
    std::string out = "freq_hz,s11_re,s11_im,s21_re,s21_im,s12_re,s12_im,s22_re,s22_im\n";
    for (std::size_t i = 0; i < resp.size(); ++i) {
        append_value(out, resp.freqs_hz[i]);
        const Complex vals[4] = {resp.s[i].s11, resp.s[i].s21, resp.s[i].s12, resp.s[i].s22};
        for (Complex v : vals) {
            out += ',';
            append_value(out, v.real());
            out += ',';
            append_value(out, v.imag());
        }
        out += '\n';
    }
    return out;
}

FrequencyResponse load_response_file(const std::string& path) {
    const std::string text = detail::slurp_file(path);
    const auto dot = path.find_last_of('.');
    const std::string ext = dot == std::string::npos ? "" : detail::to_lower(path.substr(dot));
    if (ext == ".csv") return read_response_csv(text);
    return parse_touchstone(text);
}

}  // namespace mwsense
