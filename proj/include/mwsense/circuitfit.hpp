#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mwsense/netlist_io.hpp"

namespace mwsense {

/// dB magnitudes are clamped here before differencing so a dead channel
/// cannot blow up the objective.
inline constexpr double kObjectiveDbFloor = -200.0;

/// Least-squares problem: fit the template's free parameters so its simulated
/// dB magnitudes match the target's over the selected channels.
struct FitProblem {
    NetlistTemplate tmpl;
    FrequencyResponse target;
    std::vector<double> weights;  ///< per-frequency, nonnegative; empty = all 1
    bool use_s11 = false;
    bool use_s21 = true;

    void validate() const;
};

struct FitOptions {
    int max_iters = 2000;     ///< simplex iterations per start
    double tol = 1e-12;       ///< convergence: objective spread across the simplex
    int restarts = 0;         ///< extra starts drawn log-uniform over the bounds
    std::uint64_t seed = 0;   ///< RNG seed for the restart draws
};

struct FitResult {
    std::vector<double> values;     ///< fitted parameters, physical units
    double residual_db_rms = 0.0;   ///< weighted RMS dB error at the solution
    int iterations = 0;             ///< simplex iterations summed over starts
    bool converged = false;         ///< spread < tol on the winning start
};

/// Weighted sum of squared dB differences over the selected channels at the
/// target's frequencies. params must lie within the declared bounds.
double objective(const FitProblem& p, std::span<const double> params);

/// Derivative-free simplex minimization of objective() in log-parameter
/// space, bounds enforced by reflection at the boundary. Runs 1 + restarts
/// starts (start 0 from the declared inits, the rest from seeded log-uniform
/// draws) and returns the best, ties broken by lowest start index; identical
/// inputs and seed give a bit-identical result. The returned objective never
/// exceeds the objective at the declared inits.
FitResult fit_netlist(const FitProblem& p, const FitOptions& opts = {});

}  // namespace mwsense
