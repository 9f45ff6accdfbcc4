#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mwsense/touchstone.hpp"

namespace mwsense {

enum class Topology { Series, Shunt };
enum class ElementKind { Resistor, Inductor, Capacitor, SeriesRlc, ParallelRlc };

/// One lumped ladder element. Values are optional: a missing leg of an RLC
/// trio takes its no-op limit (no series drop, no shunt leakage), a missing
/// value on a single-component kind is invalid. Inductances and capacitances
/// must be positive; resistances may also be zero (ideal through / short),
/// though a shunt branch whose impedance works out to exactly zero is
/// rejected as singular.
struct Element {
    Topology topology = Topology::Series;
    ElementKind kind = ElementKind::Resistor;
    std::optional<double> r_ohm;
    std::optional<double> l_h;
    std::optional<double> c_f;

    void validate() const;
};

/// Ordered two-port ladder, first element nearest port 1.
struct Netlist {
    std::vector<Element> elements;
    double z0_ohm = 50.0;

    void validate() const;
};

/// 2x2 transmission (chain) matrix; b carries ohms, c siemens.
struct AbcdMatrix {
    Complex a{1.0};
    Complex b{0.0};
    Complex c{0.0};
    Complex d{1.0};
};

/// Element impedance at angular frequency omega (rad/s).
/// Series RLC: Z = R + jwL + 1/(jwC). Parallel RLC: Z = 1/(1/R + 1/(jwL) + jwC).
Complex element_impedance(const Element& e, double omega_rad_s);

/// Chain matrix of one element: series Z -> [[1, Z], [0, 1]], shunt with
/// Y = 1/Z -> [[1, 0], [Y, 1]]. A shunt element with exactly zero impedance
/// (or a series element with non-finite impedance) is singular and rejected.
AbcdMatrix element_abcd(const Element& e, double omega_rad_s);

/// Ordered product, first matrix nearest port 1. Throws on an empty list.
AbcdMatrix cascade(std::span<const AbcdMatrix> ms);

/// Chain-to-scattering conversion at reference impedance z0.
SMatrix abcd_to_s(const AbcdMatrix& m, double z0_ohm);

/// Sweep the ladder over the given ascending frequency grid (Hz). The output
/// reference impedance is the netlist's z0. Element or conversion failures
/// are rethrown annotated with the frequency at which they occurred.
FrequencyResponse simulate(const Netlist& n, std::span<const double> freqs_hz);

/// Dense inclusive linear grid, the default sweep granularity.
std::vector<double> linear_sweep(double fmin_hz, double fmax_hz, std::size_t points = 1001);

}  // namespace mwsense
