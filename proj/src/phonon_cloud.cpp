#include "fermi/phonon_cloud.hpp"

#include "fermi/errors.hpp"

#include <cmath>

namespace fermi {

CloudCoefficients cloud_coefficients(const ModeBasis& basis, const Scenario& scenario, DressingScheme scheme,
                                     double t, const QuadratureOptions& options) {
    scenario.validate(basis.n_sites());
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidParameters("phonon cloud: t must be finite and >= 0");
    const auto [d1, d2] = factors(scheme);
    const cplx i_unit{0.0, 1.0};
    CloudCoefficients c;
    c.c_a.resize(basis.n_modes());
    c.c_b.resize(basis.n_modes());
    for (std::size_t k = 0; k < basis.n_modes(); ++k) {
        const double w = basis.frequency(k);
        const double pa = scenario.omega_a + w;
        const double pb = scenario.omega_b + w;
        if (!(pa > 0.0) || !(pb > 0.0)) throw UnsupportedConfiguration("phonon cloud: Omega + omega_k must be positive");
        const cplx ia = window_integral(scenario.opening_a, -(scenario.omega_a - w), t, options);
        const cplx ib = window_integral(scenario.opening_b, pb, t, options);
        c.c_a[k] = std::conj(basis.coupling(scenario.site_a, k)) * (d1 / pa + i_unit * ia);
        c.c_b[k] = std::conj(basis.coupling(scenario.site_b, k)) * ((d1 + d2) / pb + i_unit * ib);
    }
    return c;
}

namespace {

std::vector<double> cloud_from(const ModeBasis& basis, const std::vector<cplx>& coeff, double t, double eps2) {
    const std::size_t modes = basis.n_modes();
    std::vector<cplx> phased(modes);
    for (std::size_t l = 0; l < modes; ++l) {
        const double ph = -basis.frequency(l) * t;
        phased[l] = coeff[l] * cplx(std::cos(ph), std::sin(ph));
    }
    std::vector<double> d(basis.n_sites());
    for (std::size_t n = 0; n < basis.n_sites(); ++n) {
        cplx u{0.0, 0.0};
        for (std::size_t l = 0; l < modes; ++l) u += basis.coupling(n, l) * phased[l];
        d[n] = eps2 * std::norm(u);
    }
    return d;
}

}  // namespace

std::pair<CloudSnapshot, CloudSnapshot> single_site_distributions(const ModeBasis& basis, const Scenario& scenario,
                                                                  DressingScheme scheme, double t,
                                                                  const QuadratureOptions& options) {
    const CloudCoefficients c = cloud_coefficients(basis, scenario, scheme, t, options);
    const double eps2 = scenario.epsilon * scenario.epsilon;
    CloudSnapshot up{t, cloud_from(basis, c.c_a, t, eps2), scheme};
    CloudSnapshot down{t, cloud_from(basis, c.c_b, t, eps2), scheme};
    return {std::move(up), std::move(down)};
}

CloudSnapshot excitation_distribution(const ModeBasis& basis, const Scenario& scenario, DressingScheme scheme,
                                      double t, const QuadratureOptions& options) {
    auto [up, down] = single_site_distributions(basis, scenario, scheme, t, options);
    for (std::size_t n = 0; n < up.d.size(); ++n) up.d[n] += down.d[n];
    return up;
}

}  // namespace fermi
