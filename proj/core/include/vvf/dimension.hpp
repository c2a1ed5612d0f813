#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vvf/vvar.hpp"

namespace vvf {

/// V x V nonnegative matrix attached to one transition: entry (v,w) collects
/// r^alpha for every map slot of output buffer v that was fed from input
/// buffer w, where r is the similitude ratio of the slot's map.
struct AlphaMatrix {
    int size = 0;
    double alpha = 0.0;
    std::vector<double> entries;  // row-major

    AlphaMatrix() = default;
    AlphaMatrix(int n, double a) : size(n), alpha(a), entries(std::size_t(n) * n, 0.0) {}

    double& at(int v, int w) { return entries[std::size_t(v) * size + w]; }
    double at(int v, int w) const { return entries[std::size_t(v) * size + w]; }
};

/// Accumulated log-scaled matrix-product statistics for one alpha.
struct PressureEstimate {
    double alpha = 0.0;
    int k_steps = 0;
    int chains = 0;
    double gamma_hat = 0.0;                  // nats per step
    std::optional<double> ci95_halfwidth;    // absent when chains == 1
    std::vector<double> log_norm_trace;      // cumulative log scale per step, chain 0
};

/// Per-map similitude ratios, indexed [ifs][map]. Throws ValidationError
/// ("dimension machinery requires similitudes") if any map is not a
/// similitude within 1e-9.
std::vector<std::vector<double>> similitude_ratios(const SuperIfs& s);

AlphaMatrix build_matrix(const TransitionRecord& rec, const SuperIfs& s, double alpha);

/// Sum of the absolute values of all entries.
double matrix_norm(const AlphaMatrix& m);

/// (1/k) log(norm(M^1...M^k) / V) for a fixed record sequence. The product is
/// renormalized by its norm after every multiply with the logs accumulated,
/// so entries never underflow even for k in the thousands. Optionally records
/// the cumulative log-scale trace.
double gamma_from_records(const std::vector<TransitionRecord>& records, const SuperIfs& s,
                          double alpha, std::vector<double>* log_norm_trace = nullptr);

/// Monte Carlo estimate of the pressure at alpha: `chains` independent record
/// sequences of length k_steps (chain c seeded by Rng::derived(seed, c)),
/// gamma averaged across chains, CI from the chain sample variance.
PressureEstimate pressure_estimate(const SuperIfs& s, double alpha, int k_steps, int chains,
                                   std::uint64_t seed);

/// Closed-form V=1 pressure for a two-IFS family with uniform per-IFS ratios:
/// log(map_count) + alpha * (p_first log r_first + (1-p_first) log r_second).
double gamma1_analytic(double alpha, double p_first, double r_first, double r_second,
                       int map_count);

/// Root of the estimated pressure: bisection on [0,2] with common random
/// numbers (the same seed, hence the same record sequences, at every alpha),
/// run until the bracket is narrower than tol. Throws ValidationError if the
/// pressure does not change sign over the bracket.
double solve_dimension(const SuperIfs& s, double tol, int k_steps, int chains,
                       std::uint64_t seed);

/// Solution d of  sum_n P^n sum_m (r^n_m)^d = 1  (the V -> infinity
/// standard-random-fractal dimension), by bisection to tolerance tol.
double moran_dimension(const SuperIfs& s, double tol);

/// (1/k) log of the row-v sum of the scaled product over the given records,
/// with the accumulated scales re-added.
double row_sum_pressure(const std::vector<TransitionRecord>& records, const SuperIfs& s,
                        double alpha, int v);

}  // namespace vvf
