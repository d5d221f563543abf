#include "fermi/errors.hpp"
#include "fermi/mode_core.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

using namespace fermi;
using std::numbers::pi;

TEST_CASE("chain alpha and zero mode") {
    const ChainParams p{100, 1.0, 1.0, 1.0};
    CHECK(p.alpha() == doctest::Approx(1.0 - 1.0 / (2.0 * 100 * 100)).epsilon(1e-15));
    for (const ChainParams q : {ChainParams{100, 1.0, 1.0, 1.0}, ChainParams{7, 2.0, 0.5, 3.0}, ChainParams{1000, 1.0, 3.0, 1.0}}) {
        const ModeBasis b = build_harmonic_chain(q);
        CHECK(b.frequency(0) == doctest::Approx(q.pinning).epsilon(1e-15));
    }
}

TEST_CASE("chain dispersion") {
    const ChainParams p{100, 1.0, 1.0, 1.0};
    const ModeBasis b = build_harmonic_chain(p);
    // omega_k = E0 sqrt(1 - alpha cos theta_k), written out directly
    const double e0 = 1.0 / std::sqrt(1.0 - p.alpha());
    for (std::size_t k = 0; k < 100; ++k) {
        const double expected = e0 * std::sqrt(1.0 - p.alpha() * std::cos(2.0 * pi * k / 100.0));
        CHECK(b.frequency(k) == doctest::Approx(expected).epsilon(1e-12));
    }
    // first mode approaches the continuum value 2 pi c / L
    CHECK(std::abs(b.frequency(1) - 2.0 * pi) / b.frequency(1) <= 0.015);
}

TEST_CASE("invalid chain parameters name the inequality") {
    // 1 - alpha = L^2 nu^2 / (2 N^2 c^2) >= 1 here
    const ChainParams p{1, 2.0, 1.0, 1.0};
    try {
        build_harmonic_chain(p);
        FAIL("expected InvalidParameters");
    } catch (const InvalidParameters& e) {
        CHECK(std::string(e.what()).find("alpha") != std::string::npos);
    }
    CHECK_THROWS_AS(build_harmonic_chain({10, -1.0, 1.0, 1.0}), InvalidParameters);
    CHECK_THROWS_AS(build_harmonic_chain({0, 1.0, 1.0, 1.0}), InvalidParameters);
}

TEST_CASE("chain conjugate-pair symmetry is exact") {
    for (std::size_t n : {4u, 9u, 100u}) {
        const ModeBasis b = build_harmonic_chain({n, 1.0, 1.0, 1.0});
        for (std::size_t k = 1; k < n; ++k) {
            CHECK(b.frequency(k) == b.frequency(n - k));
            for (std::size_t site = 0; site < n; site += 3) {
                CHECK(b.coupling(site, n - k) == std::conj(b.coupling(site, k)));
            }
        }
    }
}

TEST_CASE("site coupling rows") {
    const ModeBasis b = build_harmonic_chain({4, 1.0, 1.0, 1.0});
    const auto row0 = site_coupling_row(b, 0);
    REQUIRE(row0.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(row0[k].real() == doctest::Approx(1.0 / std::sqrt(8.0 * b.frequency(k))));
        CHECK(row0[k].imag() == 0.0);
    }
    for (std::size_t n = 1; n < 4; ++n) {
        const auto row = site_coupling_row(b, n);
        for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(row[k]) == doctest::Approx(std::abs(row0[k])).epsilon(1e-14));
    }
    CHECK_THROWS_AS(site_coupling_row(b, 4), std::out_of_range);

    const ModeBasis t = build_ion_trap({2, 1.0});
    const auto trow = site_coupling_row(t, 0);
    CHECK(std::abs(trow[0]) == doctest::Approx(1.0 / std::sqrt(2.0 * 1.0 * 2.0)));
    CHECK(std::abs(trow[1]) == doctest::Approx(1.0 / std::sqrt(2.0 * std::sqrt(3.0) * 2.0)));
}

TEST_CASE("canonical normalization") {
    for (std::size_t n : {4u, 100u, 1000u}) CHECK(build_harmonic_chain({n, 1.0, 1.0, 1.0}).normalization_defect() <= 1e-10);
    for (std::size_t n : {2u, 3u, 5u, 10u}) CHECK(build_ion_trap({n, 1.0}).normalization_defect() <= 1e-10);
}

TEST_CASE("mode basis rejects non-canonical input") {
    Eigen::MatrixXcd c(1, 1);
    c(0, 0) = 1.0;
    CHECK_THROWS_AS(ModeBasis(BasisKind::Custom, {1.0}, c), InvalidParameters);
    c(0, 0) = 1.0 / std::sqrt(2.0);
    CHECK_NOTHROW(ModeBasis(BasisKind::Custom, {1.0}, c));
    CHECK_THROWS_AS(ModeBasis(BasisKind::Custom, {-1.0}, c), InvalidParameters);
}

TEST_CASE("two ions") {
    const ModeBasis b = build_ion_trap({2, 1.0});
    CHECK(b.frequency(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.frequency(1) / b.frequency(0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    const Eigen::MatrixXd& d = *b.eigenmodes();
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(d(0, 0)) == doctest::Approx(r));
    CHECK(std::abs(d(1, 0)) == doctest::Approx(r));
    CHECK(d(0, 0) * d(1, 0) > 0.0);   // centre of mass: in phase
    CHECK(d(0, 1) * d(1, 1) < 0.0);   // breathing: out of phase
    CHECK(d(0, 0) > 0.0);
    CHECK(d(0, 1) > 0.0);
}

TEST_CASE("three ions against the analytic Hessian") {
    // equilibrium u = (-d, 0, d) with d^3 = 5/4
    const double d = std::cbrt(1.25);
    const double near = 2.0 / (d * d * d);
    const double far = 2.0 / (8.0 * d * d * d);
    Eigen::Matrix3d h;
    h << 1.0 + near + far, -near, -far,
         -near, 1.0 + 2.0 * near, -near,
         -far, -near, 1.0 + near + far;
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(h);
    const Eigen::Vector3d expected{1.0, std::sqrt(3.0), std::sqrt(29.0 / 5.0)};

    const ModeBasis b = build_ion_trap({3, 1.0});
    for (int k = 0; k < 3; ++k) {
        CHECK(b.frequency(static_cast<std::size_t>(k)) == doctest::Approx(expected(k)).epsilon(1e-12));
        CHECK(b.frequency(static_cast<std::size_t>(k)) == doctest::Approx(std::sqrt(es.eigenvalues()(k))).epsilon(1e-12));
    }

    const TrapEquilibrium eq = solve_trap_equilibrium(3);
    CHECK(eq.residual <= 1e-12);
    CHECK(eq.positions[0] == doctest::Approx(-d).epsilon(1e-12));
    CHECK(std::abs(eq.positions[1]) < 1e-12);
    CHECK((eq.hessian - h).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("trap eigenbasis is orthonormal and sorted") {
    for (std::size_t n : {2u, 3u, 5u, 8u, 10u}) {
        const ModeBasis b = build_ion_trap({n, 2.0});
        const Eigen::MatrixXd& d = *b.eigenmodes();
        const Eigen::MatrixXd gram = d.transpose() * d - Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        CHECK(gram.cwiseAbs().maxCoeff() <= 1e-10);
        for (std::size_t k = 1; k < n; ++k) CHECK(b.frequency(k) > b.frequency(k - 1));
        CHECK(b.frequency(0) == doctest::Approx(2.0).epsilon(1e-10));   // centre of mass sits at omega_0
        if (n >= 2) CHECK(b.frequency(1) == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-9));  // breathing
    }
}

TEST_CASE("Jacobi agrees with a library eigensolver") {
    Eigen::MatrixXd a(5, 5);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) a(i, j) = std::sin(1.0 + i * 7 + j * 7) + std::sin(1.0 + j * 7 + i * 7) + (i == j ? 3.0 : 0.0);
    const SymmetricEigen mine = jacobi_eigen(a);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(a);
    for (int k = 0; k < 5; ++k) CHECK(mine.values(k) == doctest::Approx(ref.eigenvalues()(k)).epsilon(1e-12));
    const Eigen::MatrixXd recon = mine.vectors * mine.values.asDiagonal() * mine.vectors.transpose();
    CHECK((recon - a).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS(jacobi_eigen(Eigen::MatrixXd(2, 3)), InvalidParameters);
}

TEST_CASE("construction is deterministic") {
    const ModeBasis a = build_ion_trap({6, 1.0});
    const ModeBasis b = build_ion_trap({6, 1.0});
    CHECK((a.couplings().array() == b.couplings().array()).all());
    const ModeBasis c = build_harmonic_chain({37, 1.0, 1.0, 1.0});
    const ModeBasis e = build_harmonic_chain({37, 1.0, 1.0, 1.0});
    CHECK((c.couplings().array() == e.couplings().array()).all());
}

TEST_CASE("scenario validation") {
    Scenario s;
    s.site_a = 0;
    s.site_b = 3;
    CHECK_NOTHROW(s.validate(4));
    CHECK_THROWS_AS(s.validate(3), std::out_of_range);
    s.site_b = 0;
    CHECK_THROWS_AS(s.validate(4), InvalidParameters);
    CHECK_THROWS_AS(build_ion_trap({1, 1.0}), InvalidParameters);
}
