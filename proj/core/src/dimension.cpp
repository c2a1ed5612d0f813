#include "vvf/dimension.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "vvf/errors.hpp"

namespace vvf {

namespace {

constexpr double kSimilitudeTol = 1e-9;

AlphaMatrix matrix_for(const TransitionRecord& rec,
                       const std::vector<std::vector<double>>& ratios, int v_count,
                       double alpha) {
    AlphaMatrix m(v_count, alpha);
    for (int v = 0; v < v_count; ++v) {
        const BufferChoice& choice = rec.choices[v];
        for (std::size_t i = 0; i < choice.inputs.size(); ++i)
            m.at(v, choice.inputs[i]) += std::pow(ratios[choice.ifs_index][i], alpha);
    }
    return m;
}

}  // namespace

std::vector<std::vector<double>> similitude_ratios(const SuperIfs& s) {
    std::vector<std::vector<double>> ratios(s.ifss.size());
    for (std::size_t n = 0; n < s.ifss.size(); ++n) {
        const Ifs& ifs = s.ifss[n];
        ratios[n].reserve(ifs.maps.size());
        for (std::size_t m = 0; m < ifs.maps.size(); ++m) {
            const auto r = similitude_ratio(ifs.maps[m], kSimilitudeTol);
            if (!r)
                throw ValidationError("dimension machinery requires similitudes; ifs '" +
                                      ifs.name + "' map " + std::to_string(m + 1) +
                                      " has distinct singular values");
            ratios[n].push_back(*r);
        }
    }
    return ratios;
}

AlphaMatrix build_matrix(const TransitionRecord& rec, const SuperIfs& s, double alpha) {
    if (alpha < 0.0) throw std::invalid_argument("build_matrix: alpha must be >= 0");
    validate_record(rec, s);
    return matrix_for(rec, similitude_ratios(s), s.variability, alpha);
}

double matrix_norm(const AlphaMatrix& m) {
    double sum = 0.0;
    for (double e : m.entries) sum += std::abs(e);
    return sum;
}

namespace {

// Product state with per-step renormalization. Entries of the raw product
// decay like r^(alpha k); dividing by the running norm and accumulating its
// log keeps every intermediate inside [1e-300, 1e300].
struct ScaledProduct {
    explicit ScaledProduct(int n) : size(n), entries(std::size_t(n) * n, 0.0) {
        for (int v = 0; v < n; ++v) entries[std::size_t(v) * n + v] = 1.0;
    }

    void multiply(const AlphaMatrix& m) {
        std::vector<double> next(entries.size(), 0.0);
        for (int u = 0; u < size; ++u) {
            for (int v = 0; v < size; ++v) {
                const double q = entries[std::size_t(u) * size + v];
                if (q == 0.0) continue;
                for (int w = 0; w < size; ++w) {
                    const double e = m.at(v, w);
                    if (e != 0.0) next[std::size_t(u) * size + w] += q * e;
                }
            }
        }
        entries = std::move(next);
        double norm = 0.0;
        for (double e : entries) norm += e;
        for (double& e : entries) e /= norm;
        log_scale += std::log(norm);
    }

    double row_sum(int v) const {
        double sum = 0.0;
        for (int w = 0; w < size; ++w) sum += entries[std::size_t(v) * size + w];
        return sum;
    }

    int size;
    std::vector<double> entries;  // normalized so the entry sum is 1
    double log_scale = 0.0;       // log of the true norm
};

ScaledProduct product_over_records(const std::vector<TransitionRecord>& records,
                                   const SuperIfs& s, double alpha,
                                   std::vector<double>* log_norm_trace) {
    const auto ratios = similitude_ratios(s);
    ScaledProduct product(s.variability);
    if (log_norm_trace) {
        log_norm_trace->clear();
        log_norm_trace->reserve(records.size());
    }
    for (const TransitionRecord& rec : records) {
        product.multiply(matrix_for(rec, ratios, s.variability, alpha));
        if (log_norm_trace) log_norm_trace->push_back(product.log_scale);
    }
    return product;
}

std::vector<TransitionRecord> sample_records(const SuperIfs& s, int k_steps, Rng& rng) {
    std::vector<TransitionRecord> records;
    records.reserve(k_steps);
    for (int k = 0; k < k_steps; ++k) records.push_back(sample_transition(s, rng));
    return records;
}

}  // namespace

double gamma_from_records(const std::vector<TransitionRecord>& records, const SuperIfs& s,
                          double alpha, std::vector<double>* log_norm_trace) {
    if (records.empty()) throw std::invalid_argument("gamma_from_records: no records");
    const ScaledProduct product = product_over_records(records, s, alpha, log_norm_trace);
    const double k = static_cast<double>(records.size());
    return (product.log_scale - std::log(static_cast<double>(s.variability))) / k;
}

PressureEstimate pressure_estimate(const SuperIfs& s, double alpha, int k_steps, int chains,
                                   std::uint64_t seed) {
    if (k_steps < 1) throw std::invalid_argument("pressure_estimate: k_steps must be >= 1");
    if (chains < 1) throw std::invalid_argument("pressure_estimate: chains must be >= 1");

    PressureEstimate est;
    est.alpha = alpha;
    est.k_steps = k_steps;
    est.chains = chains;

    std::vector<double> gammas(chains);
    for (int c = 0; c < chains; ++c) {
        Rng rng = Rng::derived(seed, static_cast<std::uint64_t>(c));
        const auto records = sample_records(s, k_steps, rng);
        gammas[c] = gamma_from_records(records, s, alpha, c == 0 ? &est.log_norm_trace : nullptr);
    }

    est.gamma_hat = std::accumulate(gammas.begin(), gammas.end(), 0.0) / chains;
    if (chains >= 2) {
        double ss = 0.0;
        for (double g : gammas) ss += (g - est.gamma_hat) * (g - est.gamma_hat);
        const double sd = std::sqrt(ss / (chains - 1));
        est.ci95_halfwidth = 1.96 * sd / std::sqrt(static_cast<double>(chains));
    }
    return est;
}

double gamma1_analytic(double alpha, double p_first, double r_first, double r_second,
                       int map_count) {
    return std::log(static_cast<double>(map_count)) +
           alpha * (p_first * std::log(r_first) + (1.0 - p_first) * std::log(r_second));
}

double solve_dimension(const SuperIfs& s, double tol, int k_steps, int chains,
                       std::uint64_t seed) {
    if (tol <= 0.0) throw std::invalid_argument("solve_dimension: tol must be > 0");

    // Common random numbers: one record sequence per chain, reused at every
    // alpha, so the estimated pressure is a deterministic decreasing function
    // of alpha and bisection is well defined.
    std::vector<std::vector<TransitionRecord>> chain_records;
    chain_records.reserve(chains);
    for (int c = 0; c < chains; ++c) {
        Rng rng = Rng::derived(seed, static_cast<std::uint64_t>(c));
        chain_records.push_back(sample_records(s, k_steps, rng));
    }

    const auto gamma_at = [&](double alpha) {
        double sum = 0.0;
        for (const auto& records : chain_records) sum += gamma_from_records(records, s, alpha);
        return sum / chains;
    };

    double lo = 0.0, hi = 2.0;
    const double g_lo = gamma_at(lo);
    const double g_hi = gamma_at(hi);
    if (!(g_lo > 0.0) || !(g_hi < 0.0))
        throw ValidationError("solve_dimension: pressure does not change sign on [0,2] (gamma(0)=" +
                              format_double(g_lo) + ", gamma(2)=" + format_double(g_hi) + ")");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (gamma_at(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double moran_dimension(const SuperIfs& s, double tol) {
    if (tol <= 0.0) throw std::invalid_argument("moran_dimension: tol must be > 0");
    const auto ratios = similitude_ratios(s);

    const auto excess = [&](double d) {
        double sum = 0.0;
        for (std::size_t n = 0; n < ratios.size(); ++n) {
            double inner = 0.0;
            for (double r : ratios[n]) inner += std::pow(r, d);
            sum += s.probabilities[n] * inner;
        }
        return sum - 1.0;
    };

    if (excess(0.0) <= 0.0) return 0.0;  // every IFS is a single map
    double lo = 0.0, hi = 2.0;
    while (excess(hi) > 0.0) {
        hi *= 2.0;
        if (hi > 1024.0) throw ValidationError("moran_dimension: no root below 1024");
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (excess(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double row_sum_pressure(const std::vector<TransitionRecord>& records, const SuperIfs& s,
                        double alpha, int v) {
    if (records.empty()) throw std::invalid_argument("row_sum_pressure: no records");
    if (v < 0 || v >= s.variability)
        throw std::invalid_argument("row_sum_pressure: buffer index out of range");
    const ScaledProduct product = product_over_records(records, s, alpha, nullptr);
    const double k = static_cast<double>(records.size());
    return (std::log(product.row_sum(v)) + product.log_scale) / k;
}

}  // namespace vvf
