#include "mwsense/network.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace mwsense {

namespace {

void check_positive(const std::optional<double>& v, const char* name) {
    if (v && (!(*v > 0.0) || !std::isfinite(*v)))
        throw Error(std::string(name) + " must be positive and finite");
}

// resistances may be zero (ideal through / short); reactances may not
void check_nonnegative(const std::optional<double>& v, const char* name) {
    if (v && (!(*v >= 0.0) || !std::isfinite(*v)))
        throw Error(std::string(name) + " must be nonnegative and finite");
}

void require(const std::optional<double>& v, const char* kind, const char* name) {
    if (!v) throw Error(std::string("element of kind ") + kind + " requires " + name);
}

void forbid(const std::optional<double>& v, const char* kind, const char* name) {
    if (v) throw Error(std::string("element of kind ") + kind + " takes no " + name);
}

AbcdMatrix multiply(const AbcdMatrix& m, const AbcdMatrix& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
            m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
}

std::string freq_string(double f_hz) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", f_hz);
    return buf;
}

// Admittance of a parallel RLC; absent legs contribute nothing.
Complex parallel_admittance(const Element& e, double omega) {
    const Complex j{0.0, 1.0};
    Complex y{0.0};
    if (e.r_ohm) y += 1.0 / *e.r_ohm;
    if (e.l_h) y += 1.0 / (j * omega * *e.l_h);
    if (e.c_f) y += j * omega * *e.c_f;
    return y;
}

}  // namespace

void Element::validate() const {
    check_nonnegative(r_ohm, "r_ohm");
    check_positive(l_h, "l_h");
    check_positive(c_f, "c_f");
    switch (kind) {
        case ElementKind::Resistor:
            require(r_ohm, "R", "r_ohm");
            forbid(l_h, "R", "l_h");
            forbid(c_f, "R", "c_f");
            break;
        case ElementKind::Inductor:
            require(l_h, "L", "l_h");
            forbid(r_ohm, "L", "r_ohm");
            forbid(c_f, "L", "c_f");
            break;
        case ElementKind::Capacitor:
            require(c_f, "C", "c_f");
            forbid(r_ohm, "C", "r_ohm");
            forbid(l_h, "C", "l_h");
            break;
        case ElementKind::SeriesRlc:
        case ElementKind::ParallelRlc:
            if (!r_ohm && !l_h && !c_f)
                throw Error("RLC element requires at least one of r_ohm, l_h, c_f");
            break;
    }
}

void Netlist::validate() const {
    if (elements.empty()) throw Error("netlist has no elements");
    if (!(z0_ohm > 0.0) || !std::isfinite(z0_ohm))
        throw Error("netlist z0_ohm must be positive");
    for (const Element& e : elements) e.validate();
}

Complex element_impedance(const Element& e, double omega) {
    if (!(omega > 0.0)) throw Error("angular frequency must be positive");
    e.validate();
    const Complex j{0.0, 1.0};
    switch (e.kind) {
        case ElementKind::Resistor:
            return {*e.r_ohm, 0.0};
        case ElementKind::Inductor:
            return j * omega * *e.l_h;
        case ElementKind::Capacitor:
            return 1.0 / (j * omega * *e.c_f);
        case ElementKind::SeriesRlc: {
            Complex z{0.0};
            if (e.r_ohm) z += *e.r_ohm;
            if (e.l_h) z += j * omega * *e.l_h;
            if (e.c_f) z += 1.0 / (j * omega * *e.c_f);
            return z;
        }
        case ElementKind::ParallelRlc: {
            if (e.r_ohm && *e.r_ohm == 0.0) return Complex{0.0};  // shorted group
            const Complex y = parallel_admittance(e, omega);
            if (y == Complex{0.0})
                throw Error("parallel RLC has zero admittance at this frequency");
            return 1.0 / y;
        }
    }
    throw Error("unknown element kind");
}

AbcdMatrix element_abcd(const Element& e, double omega) {
    if (e.topology == Topology::Series) {
        Complex z;
        if (e.kind == ElementKind::ParallelRlc) {
            // antiresonant parallel RLC in the line is an open circuit
            if (!(omega > 0.0)) throw Error("angular frequency must be positive");
            e.validate();
            if (e.r_ohm && *e.r_ohm == 0.0) {
                z = Complex{0.0};  // shorted group, transparent in the line
            } else {
                const Complex y = parallel_admittance(e, omega);
                if (y == Complex{0.0})
                    throw Error(
                        "singular element: series parallel-RLC is open at this frequency");
                z = 1.0 / y;
            }
        } else {
            z = element_impedance(e, omega);
        }
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw Error("singular element: series impedance is not finite");
        return {Complex{1.0}, z, Complex{0.0}, Complex{1.0}};
    }

    // shunt leg: the chain matrix wants an admittance
    Complex y;
    if (e.kind == ElementKind::ParallelRlc) {
        if (!(omega > 0.0)) throw Error("angular frequency must be positive");
        e.validate();
        y = parallel_admittance(e, omega);
    } else {
        const Complex z = element_impedance(e, omega);
        if (z == Complex{0.0})
            throw Error("singular element: shunt element has zero impedance");
        y = 1.0 / z;
    }
    if (!std::isfinite(y.real()) || !std::isfinite(y.imag()))
        throw Error("singular element: shunt admittance is not finite");
    return {Complex{1.0}, Complex{0.0}, y, Complex{1.0}};
}

AbcdMatrix cascade(std::span<const AbcdMatrix> ms) {
    if (ms.empty()) throw Error("cannot cascade an empty matrix list");
    AbcdMatrix acc = ms[0];
    for (std::size_t i = 1; i < ms.size(); ++i) acc = multiply(acc, ms[i]);
    return acc;
}

SMatrix abcd_to_s(const AbcdMatrix& m, double z0) {
    if (!(z0 > 0.0) || !std::isfinite(z0)) throw Error("reference impedance must be positive");
    const Complex delta = m.a + m.b / z0 + m.c * z0 + m.d;
    if (delta == Complex{0.0}) throw Error("degenerate network: a + b/z0 + c*z0 + d = 0");
    SMatrix s;
    s.s11 = (m.a + m.b / z0 - m.c * z0 - m.d) / delta;
    s.s21 = 2.0 / delta;
    s.s12 = 2.0 * (m.a * m.d - m.b * m.c) / delta;
    s.s22 = (-m.a + m.b / z0 - m.c * z0 + m.d) / delta;
    return s;
}

FrequencyResponse simulate(const Netlist& n, std::span<const double> freqs_hz) {
    n.validate();
    for (std::size_t i = 0; i < freqs_hz.size(); ++i) {
        if (!(freqs_hz[i] > 0.0) || !std::isfinite(freqs_hz[i]))
            throw Error("sweep frequencies must be positive");
        if (i > 0 && !(freqs_hz[i] > freqs_hz[i - 1]))
            throw Error("sweep frequencies must be strictly ascending");
    }

    FrequencyResponse resp;
    resp.z0_ohm = n.z0_ohm;
    resp.freqs_hz.assign(freqs_hz.begin(), freqs_hz.end());
    resp.s.reserve(freqs_hz.size());

    std::vector<AbcdMatrix> chain(n.elements.size());
    for (double f : freqs_hz) {
        const double omega = 2.0 * std::numbers::pi * f;
        try {
            for (std::size_t k = 0; k < n.elements.size(); ++k)
                chain[k] = element_abcd(n.elements[k], omega);
            resp.s.push_back(abcd_to_s(cascade(chain), n.z0_ohm));
        } catch (const Error& e) {
            throw Error("at " + freq_string(f) + " Hz: " + e.what());
        }
    }
    return resp;
}

std::vector<double> linear_sweep(double fmin_hz, double fmax_hz, std::size_t points) {
    if (points < 2) throw Error("sweep needs at least 2 points");
    if (!(fmin_hz > 0.0) || !(fmax_hz > fmin_hz))
        throw Error("sweep requires 0 < fmin < fmax");
    std::vector<double> freqs(points);
    const double step = (fmax_hz - fmin_hz) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i)
        freqs[i] = fmin_hz + step * static_cast<double>(i);
    freqs.back() = fmax_hz;
    return freqs;
}

}  // namespace mwsense
