#include "fermi/amplitude.hpp"

#include "fermi/causality.hpp"
#include "fermi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fermi {

std::vector<double> uniform_grid(double start, double stop, std::size_t count) {
    if (count == 0) return {};
    if (count == 1) return {start};
    std::vector<double> grid(count);
    const double step = (stop - start) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) grid[i] = start + step * static_cast<double>(i);
    grid.back() = stop;
    return grid;
}

double AmplitudeTrace::commutator_ratio() const {
    double max_a0 = 0.0;
    double max_ac = 0.0;
    for (const auto& v : a0) max_a0 = std::max(max_a0, std::abs(v));
    for (const auto& v : ac) max_ac = std::max(max_ac, std::abs(v));
    return max_a0 > 0.0 ? max_ac / max_a0 : 0.0;
}

namespace {

void check_times(std::span<const double> times) {
    for (double t : times) {
        if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidParameters("amplitude: sample times must be finite and >= 0");
    }
}

}  // namespace

AmplitudeTrace bare_amplitude(const ModeBasis& basis, const Scenario& scenario, std::span<const double> times,
                              const AmplitudeOptions& options) {
    scenario.validate(basis.n_sites());
    check_times(times);

    const std::size_t modes = basis.n_modes();
    const auto& fa = scenario.opening_a;
    const auto& fb = scenario.opening_b;
    const double eps2 = scenario.epsilon * scenario.epsilon;
    const auto& q = options.quadrature;

    AmplitudeTrace trace;
    trace.times.assign(times.begin(), times.end());
    trace.a0.resize(times.size());
    trace.ac.resize(times.size());
    trace.total.resize(times.size());
    trace.probability.resize(times.size());
    if (options.keep_per_mode) trace.per_mode = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(times.size()),
                                                                       static_cast<Eigen::Index>(modes));

    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        cplx sum0{0.0, 0.0};
        cplx sumc{0.0, 0.0};
        for (std::size_t k = 0; k < modes; ++k) {
            const double w = basis.frequency(k);
            const cplx c = basis.coupling(scenario.site_a, k) * std::conj(basis.coupling(scenario.site_b, k));

            // e^{+i omega tau} branch of the correlation, weight c
            const double pa_plus = -(scenario.omega_a + w);
            const double pb_plus = scenario.omega_b + w;
            const cplx jk_plus = window_integral(fa, pa_plus, t, q) * window_integral(fb, pb_plus, t, q);
            const cplx n_plus = nested_window_integral(fa, pa_plus, fb, pb_plus, t, q);

            // e^{-i omega tau} branch, weight conj(c)
            const double pa_minus = -(scenario.omega_a - w);
            const double pb_minus = scenario.omega_b - w;
            const cplx jk_minus = window_integral(fa, pa_minus, t, q) * window_integral(fb, pb_minus, t, q);
            const cplx n_minus = nested_window_integral(fa, pa_minus, fb, pb_minus, t, q);

            const cplx mode_a0 = -0.5 * eps2 * (c * jk_plus + std::conj(c) * jk_minus);
            const cplx mode_ac = -0.5 * eps2 * (c * (2.0 * n_plus - jk_plus) - std::conj(c) * (2.0 * n_minus - jk_minus));
            sum0 += mode_a0;
            sumc += mode_ac;
            if (options.keep_per_mode) {
                trace.per_mode(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = mode_a0 + mode_ac;
            }
        }
        trace.a0[i] = sum0;
        trace.ac[i] = sumc;
        trace.total[i] = sum0 + sumc;
        trace.probability[i] = std::norm(trace.total[i]);
    }
    return trace;
}

AmplitudeTrace windowed_amplitude(const ModeBasis& basis, const Scenario& scenario, std::size_t n_points,
                                  const AmplitudeOptions& options) {
    scenario.validate(basis.n_sites());
    const double window = scenario.duration;
    const std::vector<double> times = window > 0.0 ? uniform_grid(0.0, window, std::max<std::size_t>(n_points, 2))
                                                   : std::vector<double>{0.0};
    AmplitudeTrace trace = bare_amplitude(basis, scenario, times, options);
    const double causal = nominal_causal_time(basis, scenario.site_a, scenario.site_b);
    if (window >= causal) {
        std::ostringstream os;
        os << "interaction window T = " << window << " is not shorter than the nominal causal time " << causal;
        trace.warnings.push_back(os.str());
    }
    return trace;
}

cplx time_ordered_amplitude(const ModeBasis& basis, const Scenario& scenario, double t,
                            const QuadratureOptions& options) {
    scenario.validate(basis.n_sites());
    if (!(t >= 0.0)) throw InvalidParameters("amplitude: t must be >= 0");
    const auto& fa = scenario.opening_a;
    const auto& fb = scenario.opening_b;
    cplx sum{0.0, 0.0};
    for (std::size_t k = 0; k < basis.n_modes(); ++k) {
        const double w = basis.frequency(k);
        const cplx la = basis.coupling(scenario.site_a, k);
        const cplx lb = basis.coupling(scenario.site_b, k);
        // A lowers first, B raises later: phonon emitted at A, absorbed at B
        const cplx a_first = nested_window_integral(fb, scenario.omega_b - w, fa, -(scenario.omega_a - w), t, options);
        // B raises first (emitting), A lowers later (absorbing)
        const cplx b_first = nested_window_integral(fa, -(scenario.omega_a + w), fb, scenario.omega_b + w, t, options);
        sum += lb * std::conj(la) * a_first + la * std::conj(lb) * b_first;
    }
    return -scenario.epsilon * scenario.epsilon * sum;
}

}  // namespace fermi
