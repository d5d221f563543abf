#include "fermi/nonperturbative_ion.hpp"

#include "fermi/errors.hpp"

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <limits>

namespace fermi {

ThermalGroundState symplectic_temperature(double omega0, double omega1, double tail_tolerance) {
    if (!(omega0 > 0.0) || !(omega1 > 0.0)) throw InvalidParameters("symplectic temperature: frequencies must be > 0");
    if (!(tail_tolerance > 0.0 && tail_tolerance < 1.0)) throw InvalidParameters("symplectic temperature: tail tolerance must lie in (0, 1)");

    ThermalGroundState g;
    const double r = std::sqrt(omega0 / omega1);
    g.lambda = 0.25 * (r + 1.0 / r);
    // lambda - 1/2 = (sqrt(r) - 1/sqrt(r))^2 / 4, free of cancellation near r = 1
    const double s = std::sqrt(r);
    const double lm = 0.25 * (s - 1.0 / s) * (s - 1.0 / s);
    g.e_minus_beta = std::sqrt(lm / (g.lambda + 0.5));
    g.beta = g.e_minus_beta > 0.0 ? -std::log(g.e_minus_beta) : std::numeric_limits<double>::infinity();

    const double q = g.e_minus_beta * g.e_minus_beta;
    const double z = std::sqrt(1.0 - q);
    double c = z;
    double tail = 1.0;  // mass of the terms not yet emitted, e^{-2 beta n}
    while (true) {
        g.schmidt.push_back(c);
        tail *= q;
        if (tail < tail_tolerance) break;
        c *= g.e_minus_beta;
    }
    return g;
}

PulseSpec pulse_from_profile(double epsilon, double omega0, const OpeningFunction& f_a, const OpeningFunction& f_b,
                             double duration) {
    if (!(omega0 > 0.0)) throw InvalidParameters("pulse area: omega0 must be > 0");
    if (!(duration >= 0.0) || !std::isfinite(duration)) throw InvalidParameters("pulse area: duration must be finite and >= 0");
    const double scale = -epsilon / std::sqrt(2.0 * omega0);
    return {scale * f_a.integral(duration), scale * f_b.integral(duration)};
}

SwapResult swap_probability(const PulseSpec& pulse, const ThermalGroundState& thermal) {
    const double a = pulse.alpha_a;
    const double b = pulse.alpha_b;
    const double amp = -2.0 * std::exp(-0.5 * (a * a + b * b)) * a * b * thermal.e_minus_beta;
    return {amp, amp * amp};
}

double sine_matrix_element(std::size_t n, std::size_t m, double alpha) {
    if (n < m) std::swap(n, m);
    const std::size_t d = n - m;
    if (d % 2 == 0) return 0.0;
    const double x = alpha * alpha;
    // sqrt(m!/n!) via lgamma to stay finite for large indices
    const double log_ratio = 0.5 * (std::lgamma(static_cast<double>(m) + 1.0) - std::lgamma(static_cast<double>(n) + 1.0));
    const double sign = ((d - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    const double laguerre = std::assoc_laguerre(static_cast<unsigned>(m), static_cast<unsigned>(d), x);
    return sign * std::exp(log_ratio - 0.5 * x) * std::pow(alpha, static_cast<double>(d)) * laguerre;
}

SwapResult swap_probability_full(const PulseSpec& pulse, const ThermalGroundState& thermal, std::size_t cutoff,
                                 bool normalize) {
    if (cutoff < 2) throw InvalidParameters("swap probability: Schmidt cutoff must be >= 2");
    const double q = thermal.e_minus_beta;
    const double z = normalize ? std::sqrt(1.0 - q * q) : 1.0;
    std::vector<double> c(cutoff);
    c[0] = z;
    for (std::size_t n = 1; n < cutoff; ++n) c[n] = c[n - 1] * q;

    double amp = 0.0;
    for (std::size_t n = 0; n < cutoff; ++n) {
        for (std::size_t m = 0; m < cutoff; ++m) {
            if ((n + m) % 2 == 0 || c[n] == 0.0 || c[m] == 0.0) continue;
            amp += c[n] * c[m] * sine_matrix_element(n, m, pulse.alpha_a) * sine_matrix_element(n, m, pulse.alpha_b);
        }
    }
    amp = -amp;
    return {amp, amp * amp};
}

double optimal_equal_pulse(const ThermalGroundState& thermal, double lo, double hi, std::size_t grid) {
    if (!(hi > lo) || grid < 3) throw InvalidParameters("optimal pulse: need hi > lo and at least 3 grid points");
    auto p = [&](double a) { return swap_probability({a, a}, thermal).probability; };
    const double h = (hi - lo) / static_cast<double>(grid - 1);
    std::size_t best = 0;
    double best_p = -1.0;
    for (std::size_t i = 0; i < grid; ++i) {
        const double v = p(lo + h * static_cast<double>(i));
        if (v > best_p) {
            best_p = v;
            best = i;
        }
    }
    const double a = std::max(lo, lo + h * (static_cast<double>(best) - 1.0));
    const double b = std::min(hi, lo + h * (static_cast<double>(best) + 1.0));
    const auto res = boost::math::tools::brent_find_minima([&](double x) { return -p(x); }, a, b,
                                                           std::numeric_limits<double>::digits / 2);
    return res.first;
}

}  // namespace fermi
