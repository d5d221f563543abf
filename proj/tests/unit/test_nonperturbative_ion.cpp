#include "fermi/causality.hpp"
#include "fermi/errors.hpp"
#include "fermi/mode_core.hpp"
#include "fermi/nonperturbative_ion.hpp"

#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>

using namespace fermi;

namespace {

// Symplectic eigenvalue of one ion of the two-ion ground state from its 2x2 covariance matrix.
double williamson_lambda(double w0, double w1) {
    const ModeBasis b = build_ion_trap({2, w0});
    const Eigen::MatrixXd& d = *b.eigenmodes();
    double xx = 0.0;
    double pp = 0.0;
    for (int k = 0; k < 2; ++k) {
        const double w = k == 0 ? w0 : w1;
        xx += d(0, k) * d(0, k) / (2.0 * w);
        pp += d(0, k) * d(0, k) * w / 2.0;
    }
    Eigen::Matrix2d sigma;
    sigma << xx, 0.0, 0.0, pp;
    Eigen::Matrix2d j;
    j << 0.0, 1.0, -1.0, 0.0;
    const Eigen::Matrix2cd m = std::complex<double>(0.0, 1.0) * (j * sigma).cast<std::complex<double>>();
    return std::abs(Eigen::ComplexEigenSolver<Eigen::Matrix2cd>(m).eigenvalues()(0));
}

// Entries of sin(alpha (a + a^dag)) in a large truncated Fock space.
Eigen::MatrixXd sine_matrix(double alpha, int dim) {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(dim, dim);
    for (int n = 0; n + 1 < dim; ++n) x(n, n + 1) = x(n + 1, n) = std::sqrt(static_cast<double>(n + 1));
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x);
    const Eigen::VectorXd s = (alpha * es.eigenvalues()).array().sin();
    return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

TEST_CASE("two-ion constants") {
    const ThermalGroundState g = symplectic_temperature(1.0, std::sqrt(3.0));
    CHECK(g.lambda == doctest::Approx(0.5190).epsilon(0.0002 / 0.519));
    CHECK(g.e_minus_beta == doctest::Approx(0.1364).epsilon(0.0002 / 0.1364));
    CHECK(std::exp(-g.beta) == doctest::Approx(g.e_minus_beta).epsilon(1e-14));
    const SwapResult r = swap_probability({1.0, 1.0}, g);
    CHECK(r.probability == doctest::Approx(0.0100819).epsilon(1e-5));
    CHECK(r.amplitude < 0.0);
}

TEST_CASE("symplectic eigenvalue against the covariance matrix") {
    for (double ratio : {1.1, std::sqrt(3.0), 5.0, 10.0}) {
        const ThermalGroundState g = symplectic_temperature(1.0, ratio);
        CHECK(g.lambda == doctest::Approx(williamson_lambda(1.0, ratio)).epsilon(1e-10));
        // a thermal mode with Boltzmann ratio q has symplectic eigenvalue q/(1-q) + 1/2; here q = e^{-2 beta}
        const double q = g.e_minus_beta * g.e_minus_beta;
        CHECK(g.lambda - 0.5 == doctest::Approx(q / (1.0 - q)).epsilon(1e-10));
        for (std::size_t n = 0; n + 1 < g.schmidt.size(); ++n)
            CHECK(g.schmidt[n + 1] / g.schmidt[n] == doctest::Approx(g.e_minus_beta).epsilon(1e-12));
    }
    // the trap's own breathing mode sits at sqrt(3)
    CHECK(williamson_lambda(1.0, std::sqrt(3.0)) == doctest::Approx(symplectic_temperature(1.0, std::sqrt(3.0)).lambda));
}

TEST_CASE("degenerate modes give a product state") {
    const ThermalGroundState g = symplectic_temperature(2.0, 2.0);
    CHECK(g.lambda == doctest::Approx(0.5));
    CHECK(g.e_minus_beta == 0.0);
    CHECK(std::isinf(g.beta));
    CHECK(swap_probability({1.0, 1.0}, g).probability == 0.0);
    CHECK_THROWS_AS(symplectic_temperature(-1.0, 2.0), InvalidParameters);
}

TEST_CASE("sine matrix elements") {
    for (double alpha : {0.3, 1.0, 2.0}) {
        const Eigen::MatrixXd ref = sine_matrix(alpha, 160);
        for (std::size_t n = 0; n < 10; ++n) {
            for (std::size_t m = 0; m < 10; ++m) {
                CHECK(sine_matrix_element(n, m, alpha) ==
                      doctest::Approx(ref(static_cast<int>(n), static_cast<int>(m))).scale(1.0).epsilon(1e-10));
            }
        }
    }
    CHECK(sine_matrix_element(0, 1, 0.0) == 0.0);
    CHECK(sine_matrix_element(3, 3, 1.0) == 0.0);
}

TEST_CASE("full Schmidt sum") {
    const ThermalGroundState g = symplectic_temperature(1.0, std::sqrt(3.0));
    for (const PulseSpec p : {PulseSpec{1.0, 1.0}, PulseSpec{0.4, 1.7}}) {
        const SwapResult two = swap_probability(p, g);
        const SwapResult cut2 = swap_probability_full(p, g, 2);
        CHECK(cut2.amplitude == doctest::Approx(two.amplitude).epsilon(1e-12));
        const SwapResult cut10 = swap_probability_full(p, g, 10);
        CHECK(std::abs(cut10.probability - two.probability) <= 5e-2 * two.probability);
        const SwapResult cut30 = swap_probability_full(p, g, 30);
        CHECK(cut30.probability == doctest::Approx(cut10.probability).epsilon(1e-6));
    }
    CHECK(swap_probability_full({0.4, 1.7}, g, 12).probability ==
          doctest::Approx(swap_probability_full({1.7, 0.4}, g, 12).probability).epsilon(1e-13));
    CHECK(swap_probability_full({0.0, 1.0}, g, 12).probability == 0.0);
    CHECK_THROWS_AS(swap_probability_full({1.0, 1.0}, g, 1), InvalidParameters);

    double z2 = 0.0;
    for (int n = 0; n < 200; ++n) z2 += std::pow(g.e_minus_beta, 2 * n);
    const SwapResult norm = swap_probability_full({1.0, 1.0}, g, 10, true);
    CHECK(norm.amplitude == doctest::Approx(swap_probability_full({1.0, 1.0}, g, 10).amplitude / z2).epsilon(1e-12));
}

TEST_CASE("equal pulses peak at unit area") {
    const ThermalGroundState g = symplectic_temperature(1.0, std::sqrt(3.0));
    CHECK(optimal_equal_pulse(g) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(swap_probability({0.0, 0.0}, g).probability == 0.0);
}

TEST_CASE("pulse areas from opening profiles") {
    const auto one = OpeningFunction::constant();
    const PulseSpec p = pulse_from_profile(0.5, 2.0, one, OpeningFunction::sin_sq_window(0.2), 0.2);
    CHECK(p.alpha_a == doctest::Approx(-0.5 * 0.2 / 2.0));
    CHECK(p.alpha_b == doctest::Approx(-0.5 * 0.1 / 2.0));
}

TEST_CASE("short pulses see a negligible commutator") {
    const ModeBasis b = build_ion_trap({2, 1.0});
    for (double tau : {0.01, 0.05, 0.1}) CHECK(std::abs(commutator(b, 0, 1, tau) / anticommutator(b, 0, 1, tau)) < 0.1);
}
