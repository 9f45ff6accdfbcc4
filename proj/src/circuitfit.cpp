#include "mwsense/circuitfit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "mwsense/resonance.hpp"

namespace mwsense {

namespace {

double clamped_db(Complex s) { return std::max(magnitude_db(s), kObjectiveDbFloor); }

// fold a log-space coordinate back into [lo, hi] by reflecting at the walls
double fold(double y, double lo, double hi) {
    const double width = hi - lo;
    if (width == 0.0) return lo;
    double t = std::fmod(y - lo, 2.0 * width);
    if (t < 0.0) t += 2.0 * width;
    return lo + (t <= width ? t : 2.0 * width - t);
}

// uniform in [0, 1) from the full 64-bit state; bit-reproducible everywhere,
// unlike std::uniform_real_distribution
double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct SimplexOutcome {
    std::vector<double> y;
    double value = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
};

}  // namespace

void FitProblem::validate() const {
    tmpl.netlist.validate();
    target.validate();
    if (target.size() == 0) throw Error("fit target has no frequency points");
    if (tmpl.free_params.empty()) throw Error("netlist template declares no free parameters");
    for (const FreeParam& fp : tmpl.free_params) {
        if (!(fp.lower > 0.0) || !(fp.lower < fp.upper))
            throw Error("free parameter bounds need 0 < lower < upper");
        if (!(fp.init >= fp.lower) || !(fp.init <= fp.upper))
            throw Error("free parameter init outside its bounds");
    }
    if (!weights.empty()) {
        if (weights.size() != target.size())
            throw Error("weight count differs from target point count");
        double total = 0.0;
        for (double w : weights) {
            if (!(w >= 0.0) || !std::isfinite(w)) throw Error("weights must be nonnegative");
            total += w;
        }
        if (!(total > 0.0)) throw Error("weights must not all be zero");
    }
    if (!use_s11 && !use_s21) throw Error("select at least one objective channel");
}

double objective(const FitProblem& p, std::span<const double> params) {
    p.validate();
    if (params.size() != p.tmpl.free_params.size())
        throw Error("objective called with wrong parameter count");
    for (std::size_t i = 0; i < params.size(); ++i) {
        const FreeParam& fp = p.tmpl.free_params[i];
        if (!(params[i] >= fp.lower) || !(params[i] <= fp.upper))
            throw Error("parameter " + std::to_string(i) + " out of bounds");
    }

    Netlist n = p.tmpl.netlist;
    apply_params(n, p.tmpl.free_params, params);
    const FrequencyResponse model = simulate(n, p.target.freqs_hz);

    double sum = 0.0;
    for (std::size_t i = 0; i < p.target.size(); ++i) {
        const double w = p.weights.empty() ? 1.0 : p.weights[i];
        if (w == 0.0) continue;
        if (p.use_s11) {
            const double d = clamped_db(model.s[i].s11) - clamped_db(p.target.s[i].s11);
            sum += w * d * d;
        }
        if (p.use_s21) {
            const double d = clamped_db(model.s[i].s21) - clamped_db(p.target.s[i].s21);
            sum += w * d * d;
        }
    }
    return sum;
}

FitResult fit_netlist(const FitProblem& p, const FitOptions& opts) {
    p.validate();
    if (opts.max_iters < 1) throw Error("max_iters must be >= 1");
    if (opts.restarts < 0) throw Error("restarts must be >= 0");
    if (!(opts.tol > 0.0)) throw Error("tol must be positive");

    const std::size_t k = p.tmpl.free_params.size();
    std::vector<double> lo(k), hi(k), y_init(k);
    for (std::size_t i = 0; i < k; ++i) {
        lo[i] = std::log(p.tmpl.free_params[i].lower);
        hi[i] = std::log(p.tmpl.free_params[i].upper);
        y_init[i] = std::log(p.tmpl.free_params[i].init);
    }

    std::vector<double> scratch(k);
    auto to_params = [&](const std::vector<double>& y) -> const std::vector<double>& {
        for (std::size_t i = 0; i < k; ++i) {
            scratch[i] = std::exp(y[i]);
            // folding keeps y in range; exp rounding may still graze a wall
            scratch[i] = std::clamp(scratch[i], p.tmpl.free_params[i].lower,
                                    p.tmpl.free_params[i].upper);
        }
        return scratch;
    };

    // objective failures away from the start (singular proposals) count as
    // infinitely bad rather than aborting the fit
    auto eval_soft = [&](const std::vector<double>& y) {
        try {
            const double v = objective(p, to_params(y));
            return std::isfinite(v) ? v : std::numeric_limits<double>::max();
        } catch (const Error&) {
            return std::numeric_limits<double>::max();
        }
    };

    const double f_init = objective(p, to_params(y_init));
    if (!std::isfinite(f_init)) throw Error("objective is not finite at the initial parameters");

    auto run_simplex = [&](const std::vector<double>& start, bool strict_start) {
        SimplexOutcome out;
        const std::size_t nv = k + 1;
        std::vector<std::vector<double>> v(nv, start);
        std::vector<double> f(nv);
        constexpr double kStep = 0.15;  // initial spread, log units
        for (std::size_t i = 1; i < nv; ++i) {
            double y = fold(start[i - 1] + kStep, lo[i - 1], hi[i - 1]);
            if (y == start[i - 1]) y = fold(start[i - 1] - kStep, lo[i - 1], hi[i - 1]);
            v[i][i - 1] = y;
        }
        f[0] = strict_start ? f_init : eval_soft(v[0]);
        for (std::size_t i = 1; i < nv; ++i) f[i] = eval_soft(v[i]);

        constexpr double kAlpha = 1.0, kGamma = 2.0, kRho = 0.5, kSigma = 0.5;
        std::vector<std::size_t> order(nv);
        std::vector<double> centroid(k), cand(k);
        for (int iter = 0; iter < opts.max_iters; ++iter) {
            for (std::size_t i = 0; i < nv; ++i) order[i] = i;
            std::sort(order.begin(), order.end(),
                      [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
            const std::size_t best = order[0], worst = order[nv - 1],
                              second_worst = order[nv - 2];
            if (f[worst] - f[best] < opts.tol) {
                out.converged = true;
                out.iterations = iter;
                break;
            }
            out.iterations = iter + 1;

            std::fill(centroid.begin(), centroid.end(), 0.0);
            for (std::size_t i = 0; i < nv; ++i) {
                if (i == worst) continue;
                for (std::size_t d = 0; d < k; ++d) centroid[d] += v[i][d];
            }
            for (std::size_t d = 0; d < k; ++d) centroid[d] /= static_cast<double>(k);

            auto propose = [&](double coef, const std::vector<double>& from) {
                for (std::size_t d = 0; d < k; ++d)
                    cand[d] = fold(centroid[d] + coef * (from[d] - centroid[d]), lo[d], hi[d]);
            };

            propose(-kAlpha, v[worst]);  // reflect through the centroid
            const std::vector<double> refl = cand;
            const double f_refl = eval_soft(refl);

            if (f_refl < f[best]) {
                propose(-kAlpha * kGamma, v[worst]);  // expand
                const double f_exp = eval_soft(cand);
                if (f_exp < f_refl) {
                    v[worst] = cand;
                    f[worst] = f_exp;
                } else {
                    v[worst] = refl;
                    f[worst] = f_refl;
                }
            } else if (f_refl < f[second_worst]) {
                v[worst] = refl;
                f[worst] = f_refl;
            } else if (f_refl < f[worst]) {
                propose(-kAlpha * kRho, v[worst]);  // outside contraction
                const double f_c = eval_soft(cand);
                if (f_c <= f_refl) {
                    v[worst] = cand;
                    f[worst] = f_c;
                } else {
                    v[worst] = refl;
                    f[worst] = f_refl;
                }
            } else {
                propose(kRho, v[worst]);  // inside contraction
                const double f_c = eval_soft(cand);
                if (f_c < f[worst]) {
                    v[worst] = cand;
                    f[worst] = f_c;
                } else {
                    for (std::size_t i = 0; i < nv; ++i) {  // shrink toward best
                        if (i == best) continue;
                        for (std::size_t d = 0; d < k; ++d)
                            v[i][d] = fold(v[best][d] + kSigma * (v[i][d] - v[best][d]),
                                           lo[d], hi[d]);
                        f[i] = eval_soft(v[i]);
                    }
                }
            }
        }

        std::size_t best = 0;
        for (std::size_t i = 1; i < nv; ++i)
            if (f[i] < f[best]) best = i;
        out.y = v[best];
        out.value = f[best];
        return out;
    };

    std::mt19937_64 rng(opts.seed);
    SimplexOutcome winner;
    int total_iterations = 0;
    for (int start = 0; start <= opts.restarts; ++start) {
        std::vector<double> y0(k);
        if (start == 0) {
            y0 = y_init;
        } else {
            for (std::size_t i = 0; i < k; ++i) y0[i] = lo[i] + u01(rng) * (hi[i] - lo[i]);
        }
        SimplexOutcome out = run_simplex(y0, start == 0);
        total_iterations += out.iterations;
        if (out.value < winner.value) winner = std::move(out);  // ties keep the earlier start
    }

    FitResult result;
    result.values = to_params(winner.y);
    result.residual_db_rms = 0.0;
    double total_weight = 0.0;
    const std::size_t channels = (p.use_s11 ? 1u : 0u) + (p.use_s21 ? 1u : 0u);
    for (std::size_t i = 0; i < p.target.size(); ++i)
        total_weight += (p.weights.empty() ? 1.0 : p.weights[i]) * static_cast<double>(channels);
    result.residual_db_rms = std::sqrt(winner.value / total_weight);
    result.iterations = total_iterations;
    result.converged = winner.converged;
    return result;
}

}  // namespace mwsense
