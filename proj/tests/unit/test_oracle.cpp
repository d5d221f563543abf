#include "fermi/amplitude.hpp"
#include "fermi/dressing.hpp"
#include "fermi/errors.hpp"
#include "fermi/mode_core.hpp"
#include "fermi/oracle.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <vector>

using namespace fermi;
using C = std::complex<double>;

namespace {

Scenario scenario(std::size_t a, std::size_t b, double eps, const OpeningFunction& f = OpeningFunction::constant()) {
    Scenario s;
    s.site_a = a;
    s.site_b = b;
    s.omega_a = s.omega_b = 2.0;
    s.epsilon = eps;
    s.opening_a = s.opening_b = f;
    s.duration = 1.0;
    return s;
}

Eigen::VectorXcd basis_vector(const FockSpace& fock, SpinPattern s, Phonons p = Phonons::vacuum()) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(fock.dimension()));
    v(static_cast<Eigen::Index>(fock.index(s, p))) = 1.0;
    return v;
}

}  // namespace

TEST_CASE("Fock space layout") {
    const FockSpace f(2, 1);
    CHECK(f.n_occupations() == 3);
    CHECK(f.dimension() == 12);
    CHECK(FockSpace::count_dimension(2, 1) == 12.0);
    CHECK(FockSpace::count_dimension(3, 4) == 4.0 * 35.0);
    CHECK(f.occupation(0) == std::vector<unsigned>{0, 0});
    CHECK(f.index(SpinPattern::UpDown, Phonons::vacuum()) == 3);
    CHECK(f.spins_of(7) == SpinPattern::DownUp);
    CHECK(f.total_of(f.index(SpinPattern::UpUp, Phonons::one(1))) == 1);
    CHECK_FALSE(f.contains(Phonons::two(0)));
    CHECK_THROWS_AS(f.index(SpinPattern::UpUp, Phonons::two(0)), std::out_of_range);
    CHECK_THROWS_AS(FockSpace(1000, 8), InvalidParameters);
}

TEST_CASE("free spectrum and hermiticity") {
    const ModeBasis b = build_harmonic_chain({3, 1.0, 1.0, 1.0});
    const OracleHamiltonian h0 = build_hamiltonian(b, scenario(0, 1, 0.0), 2);
    for (std::size_t i = 0; i < h0.fock.dimension(); ++i) {
        const SpinPattern s = h0.fock.spins_of(i);
        double e = (spin_a_up(s) ? 1.0 : -1.0) + (spin_b_up(s) ? 1.0 : -1.0);
        const auto& occ = h0.fock.occupation_of(i);
        for (std::size_t k = 0; k < 3; ++k) e += b.frequency(k) * occ[k];
        CHECK(h0.energies[i] == doctest::Approx(e).epsilon(1e-14));
    }
    const OracleHamiltonian h = build_hamiltonian(b, scenario(0, 1, 0.3), 2);
    const Eigen::MatrixXcd m = h.dense(0.2);
    CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(h.v_a.nonZeros() > 0);
}

TEST_CASE("no coupling, no swap") {
    const ModeBasis b = build_harmonic_chain({3, 1.0, 1.0, 1.0});
    CHECK(std::abs(exact_swap_amplitude(b, scenario(0, 1, 0.0), 0.5, 2)) == 0.0);
}

TEST_CASE("RK4 agrees with exact exponentiation") {
    const ModeBasis b = build_harmonic_chain({2, 1.0, 1.0, 1.0});
    const Scenario s = scenario(0, 1, 0.4);
    const OracleHamiltonian h = build_hamiltonian(b, s, 3);
    const double t = 0.8;
    const Eigen::VectorXcd c0 = basis_vector(h.fock, SpinPattern::UpDown);
    const std::vector<std::size_t> tracked{h.fock.index(SpinPattern::DownUp, Phonons::vacuum())};
    const EvolutionResult r = evolve(h, c0, 0.0, t, 0.0, tracked, 8);

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.dense(0.0));
    const Eigen::VectorXcd phases = (es.eigenvalues().cast<C>() * C(0.0, -t)).array().exp();
    Eigen::VectorXcd psi = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint() * c0;
    for (Eigen::Index i = 0; i < psi.size(); ++i) psi(i) *= std::polar(1.0, h.energies[static_cast<std::size_t>(i)] * t);
    CHECK((r.state - psi).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(r.norm_drift <= 1e-8);
    CHECK(r.energy_drift <= 1e-8);
    CHECK(sector_leakage(h.fock, r.state) <= 1e-12);
    REQUIRE(r.times.size() >= 9);
    CHECK(r.times.front() == 0.0);
    CHECK(r.times.back() == t);
    CHECK(r.projections.rows() == static_cast<Eigen::Index>(r.times.size()));
    CHECK(r.projections(r.projections.rows() - 1, 0) == r.state(static_cast<Eigen::Index>(tracked[0])));
}

TEST_CASE("time step bound is enforced") {
    const ModeBasis b = build_harmonic_chain({2, 1.0, 1.0, 1.0});
    const OracleHamiltonian h = build_hamiltonian(b, scenario(0, 1, 0.1), 2);
    const Eigen::VectorXcd c0 = basis_vector(h.fock, SpinPattern::UpDown);
    CHECK_THROWS_AS(evolve(h, c0, 0.0, 1.0, 2.0 * max_time_step(h)), InvalidParameters);
    CHECK_THROWS_AS(evolve(h, Eigen::VectorXcd::Zero(3), 0.0, 1.0), InvalidParameters);
    CHECK(max_time_step(h) == doctest::Approx(1.0 / (50.0 * h.frequency_scale())));
}

TEST_CASE("cutoff convergence") {
    const ModeBasis b = build_harmonic_chain({3, 1.0, 1.0, 1.0});
    const Scenario s = scenario(0, 1, 1e-2);
    const ConvergedAmplitude c = converged_swap_amplitude(b, s, 0.5);
    CHECK(c.last_change <= 1e-14);
    CHECK(std::abs(exact_swap_amplitude(b, s, 0.5, c.cutoff + 1) - c.amplitude) < 1e-8);
}

TEST_CASE("perturbative remainder falls as epsilon^4") {
    const ModeBasis b = build_harmonic_chain({3, 1.0, 1.0, 1.0});
    const std::vector<double> eps{1e-2, 5e-3};
    const ResidualSweep sweep = residual_sweep(b, scenario(0, 1, 1.0), 1.0, eps);
    REQUIRE(sweep.points.size() == 2);
    const double factor = sweep.points[0].residual / sweep.points[1].residual;
    CHECK(factor >= 14.0);
    CHECK(factor <= 18.0);
    CHECK(sweep.slope >= 3.7);
    CHECK(sweep.slope <= 4.3);
    // the second-order amplitude itself carries the exact result
    CHECK(sweep.points[0].residual < 1e-3 * std::abs(sweep.points[0].exact));
}

TEST_CASE("slope fit") {
    const std::vector<double> x{1.0, 2.0, 4.0};
    const std::vector<double> y{3.0, 24.0, 192.0};
    CHECK(fitted_log_slope(x, y) == doctest::Approx(3.0));
}

TEST_CASE("dressed amplitude follows exact evolution of the dressed state") {
    const ModeBasis b = build_harmonic_chain({3, 1.0, 1.0, 1.0});
    const double eps = 1e-3;
    const Scenario s = scenario(0, 1, eps);
    const OracleHamiltonian h = build_hamiltonian(b, s, 3);
    const StateExpansion init = initial_dressed_state(dressed_ground_state(b, s), DressingScheme::SigmaX, true);
    const Eigen::VectorXcd c0 = to_fock_vector(h.fock, init);
    const double t = 0.6;
    const EvolutionResult r = evolve(h, c0, 0.0, t);
    const std::vector<double> times{t};
    const C pert = dressed_amplitude(b, s, DressingScheme::SigmaX, times).total[0];
    const C exact = r.state(static_cast<Eigen::Index>(h.fock.index(SpinPattern::DownUp, Phonons::vacuum())));
    CHECK(std::abs(exact - pert) <= 1e-4 * std::abs(pert));
}

TEST_CASE("slow switching lands on the dressed ground state") {
    const ModeBasis b = build_harmonic_chain({2, 1.0, 1.0, 1.0});
    const Scenario s = scenario(0, 1, 1e-2);
    const AdiabaticReport fast = adiabatic_dressing_check(b, s, 0.25);
    const AdiabaticReport mid = adiabatic_dressing_check(b, s, 0.5);
    const AdiabaticReport slow = adiabatic_dressing_check(b, s, 25.0);
    CHECK(fast.overlap < mid.overlap);
    CHECK(mid.overlap < slow.overlap);
    CHECK(slow.overlap >= 0.999);
    CHECK(slow.norm_drift <= 1e-8);
    CHECK(adiabatic_dressing_check(b, scenario(0, 1, 0.0), 1.0).overlap == doctest::Approx(1.0).epsilon(1e-12));
}
