#pragma once

#include <string>
#include <vector>

#include "mwsense/touchstone.hpp"

namespace mwsense {

struct Vec3c {
    Complex x{0.0};
    Complex y{0.0};
    Complex z{0.0};
};

inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
inline constexpr double kVacuumPermeability = 1.25663706212e-6;  // H/m

/// Voxelized field samples for the perturbation integrals. All per-cell
/// arrays must have the same length; h0/h1/delta_mu may be left empty, which
/// reads as zero-filled. Cell volume is uniform.
struct FieldGrid {
    double cell_volume_m3 = 0.0;
    std::vector<Vec3c> e0;              ///< unperturbed E field, V/m
    std::vector<Vec3c> e1;              ///< perturbed E field, V/m
    std::vector<Vec3c> h0;              ///< unperturbed H field, A/m (optional)
    std::vector<Vec3c> h1;              ///< perturbed H field, A/m (optional)
    std::vector<double> delta_eps_f_m;  ///< absolute permittivity change, F/m
    std::vector<double> delta_mu_h_m;   ///< absolute permeability change, H/m (optional)
    double eps0 = kVacuumPermittivity;
    double mu0 = kVacuumPermeability;

    std::size_t cells() const noexcept { return e0.size(); }
    void validate() const;
};

/// Fractional resonance shift from the full (electric + magnetic)
/// perturbation integral:
///
///   df/f = - sum((d_eps*Re(E1.conj(E0)) + d_mu*Re(H1.conj(H0))) * dv)
///          / sum((eps0*|E0|^2 + mu0*|H0|^2) * dv)
///
/// The leading minus makes a positive permittivity change with aligned
/// fields lower the frequency. Cells are summed left to right in storage
/// order, so results are bit-stable for a given grid. Throws on a zero
/// denominator.
double frequency_shift_full(const FieldGrid& g);

/// Electric-only simplification: same numerator restricted to the d_eps
/// term, denominator restricted to the electric energy.
double frequency_shift_electric(const FieldGrid& g);

/// Field-grid file: a metadata line `# cell_volume_m3=<v> eps0=<v> mu0=<v>`,
/// then a CSV header naming the 26 per-cell columns (e0x_re ... h1z_im,
/// delta_eps, delta_mu) and one row per cell.
FieldGrid read_field_grid_csv(const std::string& text);
std::string write_field_grid_csv(const FieldGrid& g);

}  // namespace mwsense
