#include "mwsense/perturbation.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "csv_util.hpp"

namespace mwsense {

namespace {

double re_hermitian_dot(const Vec3c& a, const Vec3c& b) {
    return (a.x * std::conj(b.x) + a.y * std::conj(b.y) + a.z * std::conj(b.z)).real();
}

double norm2(const Vec3c& v) {
    return std::norm(v.x) + std::norm(v.y) + std::norm(v.z);
}

const Vec3c kZeroVec{};

// per-cell access treating empty optional arrays as zero-filled
const Vec3c& cell(const std::vector<Vec3c>& v, std::size_t i) {
    return v.empty() ? kZeroVec : v[i];
}

double cell(const std::vector<double>& v, std::size_t i) {
    return v.empty() ? 0.0 : v[i];
}

void append_value(std::string& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    out += buf;
}

const char* const kGridColumns[] = {
    "e0x_re", "e0x_im", "e0y_re", "e0y_im", "e0z_re", "e0z_im",
    "e1x_re", "e1x_im", "e1y_re", "e1y_im", "e1z_re", "e1z_im",
    "h0x_re", "h0x_im", "h0y_re", "h0y_im", "h0z_re", "h0z_im",
    "h1x_re", "h1x_im", "h1y_re", "h1y_im", "h1z_re", "h1z_im",
    "delta_eps", "delta_mu"};
constexpr std::size_t kGridColumnCount = 26;

}  // namespace

void FieldGrid::validate() const {
    if (!(cell_volume_m3 > 0.0) || !std::isfinite(cell_volume_m3))
        throw Error("cell volume must be positive");
    if (!(eps0 > 0.0) || !(mu0 > 0.0)) throw Error("vacuum constants must be positive");
    const std::size_t n = e0.size();
    auto check = [n](std::size_t sz, const char* name) {
        if (sz != 0 && sz != n)
            throw Error(std::string("field grid array '") + name +
                        "' length differs from e0's");
    };
    if (e1.size() != n) throw Error("field grid array 'e1' length differs from e0's");
    if (delta_eps_f_m.size() != n)
        throw Error("field grid array 'delta_eps' length differs from e0's");
    check(h0.size(), "h0");
    check(h1.size(), "h1");
    check(delta_mu_h_m.size(), "delta_mu");
    if ((h0.empty() != h1.empty()))
        throw Error("field grid must provide both h0 and h1 or neither");
}

double frequency_shift_full(const FieldGrid& g) {
    g.validate();
    double num = 0.0;
    double den = 0.0;
    // plain left-to-right accumulation in cell order keeps results bit-stable
    for (std::size_t i = 0; i < g.cells(); ++i) {
        num += g.delta_eps_f_m[i] * re_hermitian_dot(cell(g.e1, i), cell(g.e0, i)) +
               cell(g.delta_mu_h_m, i) * re_hermitian_dot(cell(g.h1, i), cell(g.h0, i));
        den += g.eps0 * norm2(cell(g.e0, i)) + g.mu0 * norm2(cell(g.h0, i));
    }
    num *= g.cell_volume_m3;
    den *= g.cell_volume_m3;
    if (!(den > 0.0)) throw Error("perturbation denominator energy is zero");
    return -num / den;
}

double frequency_shift_electric(const FieldGrid& g) {
    g.validate();
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < g.cells(); ++i) {
        num += g.delta_eps_f_m[i] * re_hermitian_dot(cell(g.e1, i), cell(g.e0, i));
        den += g.eps0 * norm2(cell(g.e0, i));
    }
    num *= g.cell_volume_m3;
    den *= g.cell_volume_m3;
    if (!(den > 0.0)) throw Error("perturbation denominator energy is zero");
    return -num / den;
}

FieldGrid read_field_grid_csv(const std::string& text) {
    FieldGrid g;

    // metadata line first: # cell_volume_m3=<v> eps0=<v> mu0=<v>
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool meta_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string t = detail::trim(line);
        if (t.empty()) continue;
        if (t[0] != '#') break;
        std::istringstream meta(t.substr(1));
        std::string tok;
        while (meta >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos)
                throw ParseError(line_no, "metadata token '" + tok + "' is not key=value");
            const std::string key = detail::to_lower(tok.substr(0, eq));
            const double val = detail::parse_double(tok.substr(eq + 1), line_no, key);
            if (key == "cell_volume_m3")
                g.cell_volume_m3 = val;
            else if (key == "eps0")
                g.eps0 = val;
            else if (key == "mu0")
                g.mu0 = val;
            else
                throw ParseError(line_no, "unknown metadata key '" + key + "'");
        }
        meta_seen = true;
        break;
    }
    if (!meta_seen) throw ParseError(1, "missing metadata line (# cell_volume_m3=...)");

    const auto rows = detail::parse_csv(text);
    if (rows.empty()) throw ParseError(line_no, "missing field grid header");
    detail::require_header(rows[0], std::vector<std::string>(kGridColumns,
                                                             kGridColumns + kGridColumnCount));

    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != kGridColumnCount)
            throw ParseError(row.line, "expected " + std::to_string(kGridColumnCount) +
                                           " columns, got " + std::to_string(row.fields.size()));
        double v[kGridColumnCount];
        for (std::size_t i = 0; i < kGridColumnCount; ++i)
            v[i] = detail::parse_double(row.fields[i], row.line, kGridColumns[i]);
        g.e0.push_back({{v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}});
        g.e1.push_back({{v[6], v[7]}, {v[8], v[9]}, {v[10], v[11]}});
        g.h0.push_back({{v[12], v[13]}, {v[14], v[15]}, {v[16], v[17]}});
        g.h1.push_back({{v[18], v[19]}, {v[20], v[21]}, {v[22], v[23]}});
        g.delta_eps_f_m.push_back(v[24]);
        g.delta_mu_h_m.push_back(v[25]);
    }
    g.validate();
    return g;
}

std::string write_field_grid_csv(const FieldGrid& g) {
    g.validate();
    std::string out = "# cell_volume_m3=";
    append_value(out, g.cell_volume_m3);
    out += " eps0=";
    append_value(out, g.eps0);
    out += " mu0=";
    append_value(out, g.mu0);
    out += '\n';
    for (std::size_t i = 0; i < kGridColumnCount; ++i) {
        if (i) out += ',';
        out += kGridColumns[i];
    }
    out += '\n';
    for (std::size_t i = 0; i < g.cells(); ++i) {
        const Vec3c vecs[4] = {cell(g.e0, i), cell(g.e1, i), cell(g.h0, i), cell(g.h1, i)};
        bool first = true;
        for (const Vec3c& v : vecs) {
            for (Complex c : {v.x, v.y, v.z}) {
                if (!first) out += ',';
                first = false;
                append_value(out, c.real());
                out += ',';
                append_value(out, c.imag());
            }
        }
        out += ',';
        append_value(out, g.delta_eps_f_m[i]);
        out += ',';
        append_value(out, cell(g.delta_mu_h_m, i));
        out += '\n';
    }
    return out;
}

}  // namespace mwsense
