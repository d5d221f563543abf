#include "fermi/causality.hpp"

#include "fermi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace fermi {

namespace {

void check_sites(const ModeBasis& basis, std::size_t a, std::size_t b) {
    if (a >= basis.n_sites() || b >= basis.n_sites()) {
        throw std::out_of_range("causality: site index out of range (" + std::to_string(a) + ", " +
                                std::to_string(b) + ") for " + std::to_string(basis.n_sites()) + " sites");
    }
}

// sum_k lambda_Ak conj(lambda_Bk) e^{i omega_k tau}, summed in mode order
cplx vacuum_correlation(const ModeBasis& basis, std::size_t a, std::size_t b, double tau) {
    cplx sum{0.0, 0.0};
    const auto freqs = basis.frequencies();
    for (std::size_t k = 0; k < freqs.size(); ++k) {
        const cplx weight = basis.coupling(a, k) * std::conj(basis.coupling(b, k));
        const double phase = freqs[k] * tau;
        sum += weight * cplx(std::cos(phase), std::sin(phase));
    }
    return sum;
}

}  // namespace

double anticommutator(const ModeBasis& basis, std::size_t a, std::size_t b, double tau) {
    check_sites(basis, a, b);
    return 2.0 * vacuum_correlation(basis, a, b, tau).real();
}

double commutator(const ModeBasis& basis, std::size_t a, std::size_t b, double tau) {
    check_sites(basis, a, b);
    return 2.0 * vacuum_correlation(basis, a, b, tau).imag();
}

CausalityTrace causality_trace(const ModeBasis& basis, std::size_t a, std::size_t b, std::span<const double> taus) {
    check_sites(basis, a, b);
    for (std::size_t i = 1; i < taus.size(); ++i) {
        if (!(taus[i] > taus[i - 1])) throw InvalidParameters("causality trace: tau grid must be strictly increasing");
    }
    CausalityTrace trace;
    trace.site_a = a;
    trace.site_b = b;
    trace.kind = basis.kind();
    trace.taus.assign(taus.begin(), taus.end());
    trace.f_a.reserve(taus.size());
    trace.f_c.reserve(taus.size());
    for (double tau : taus) {
        const cplx g = vacuum_correlation(basis, a, b, tau);
        trace.f_a.push_back(2.0 * g.real());
        trace.f_c.push_back(2.0 * g.imag());
    }
    return trace;
}

std::size_t chain_separation(const ModeBasis& basis, std::size_t a, std::size_t b) {
    const std::size_t n = basis.n_sites();
    const std::size_t d = a > b ? a - b : b - a;
    return std::min(d, n - d);
}

double nominal_causal_time(const ModeBasis& basis, std::size_t a, std::size_t b) {
    check_sites(basis, a, b);
    if (const auto& chain = basis.chain()) {
        const double r = static_cast<double>(chain_separation(basis, a, b));
        return chain->length * r / (chain->speed * static_cast<double>(chain->n_sites));
    }
    const auto freqs = basis.frequencies();
    return 1.0 / *std::min_element(freqs.begin(), freqs.end());
}

LightconeEstimate lightcone_estimate(const ModeBasis& basis, std::size_t a, std::size_t b, double tau_max,
                                     std::size_t n_samples, double tau_min) {
    check_sites(basis, a, b);
    if (!(tau_max > tau_min) || tau_min < 0.0) throw InvalidParameters("lightcone: need 0 <= tau_min < tau_max");
    if (n_samples < 100) throw InvalidParameters("lightcone: n_samples must be >= 100");

    // >= 20 samples per period of the fastest mode
    const double period = 2.0 * std::numbers::pi / basis.max_frequency();
    const auto needed = static_cast<std::size_t>(std::ceil(20.0 * (tau_max - tau_min) / period)) + 1;
    const std::size_t samples = std::max(n_samples, needed);

    std::vector<double> taus(samples);
    const double step = (tau_max - tau_min) / static_cast<double>(samples - 1);
    for (std::size_t i = 0; i < samples; ++i) taus[i] = tau_min + step * static_cast<double>(i);
    taus.back() = tau_max;

    std::vector<double> fc(samples);
    double peak = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        fc[i] = commutator(basis, a, b, taus[i]);
        peak = std::max(peak, std::abs(fc[i]));
    }

    double best_slope = 0.0;
    std::size_t best = 0;
    for (std::size_t i = 0; i + 1 < samples; ++i) {
        const double slope = (fc[i + 1] - fc[i]) / (taus[i + 1] - taus[i]);
        if (slope > best_slope) {
            best_slope = slope;
            best = i;
        }
    }
    double scale = 0.0;
    for (std::size_t k = 0; k < basis.n_modes(); ++k) scale += 2.0 * std::abs(basis.coupling(a, k) * basis.coupling(b, k));
    if (!(peak > 1e-13 * scale) || !(best_slope > 0.0)) {
        throw NoRiseDetected("lightcone: commutator between sites " + std::to_string(a) + " and " +
                             std::to_string(b) + " shows no rise on the scanned window");
    }

    LightconeEstimate est;
    est.rise_time = taus[best];
    est.nominal_time = nominal_causal_time(basis, a, b);
    est.sharpness = best_slope / peak;
    est.samples = samples;
    return est;
}

}  // namespace fermi
