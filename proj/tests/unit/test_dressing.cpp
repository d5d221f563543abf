#include "fermi/amplitude.hpp"
#include "fermi/dressing.hpp"
#include "fermi/errors.hpp"
#include "fermi/mode_core.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <vector>

using namespace fermi;
using C = std::complex<double>;

namespace {

// Product space: spin A, spin B (0 = down), then one slot per mode holding 0..2 phonons.
struct ProductSpace {
    std::size_t modes;
    static constexpr int kLocal = 3;

    Eigen::Index dim() const { return 4 * static_cast<Eigen::Index>(std::pow(kLocal, modes)); }
    Eigen::Index index(int sa, int sb, const std::vector<int>& n) const {
        Eigen::Index i = sa * 2 + sb;
        for (int x : n) i = i * kLocal + x;
        return i;
    }
    void decode(Eigen::Index i, int& sa, int& sb, std::vector<int>& n) const {
        n.assign(modes, 0);
        for (std::size_t k = modes; k-- > 0;) {
            n[k] = static_cast<int>(i % kLocal);
            i /= kLocal;
        }
        sb = static_cast<int>(i % 2);
        sa = static_cast<int>(i / 2);
    }
};

struct Perturbed {
    ProductSpace space;
    Eigen::VectorXcd psi1;
    Eigen::VectorXcd psi2;
};

// Rayleigh-Schroedinger in intermediate normalization around |down down 0>
Perturbed rayleigh_schroedinger(const ModeBasis& b, std::size_t a, std::size_t bb, double omega) {
    ProductSpace ps{b.n_modes()};
    const Eigen::Index dim = ps.dim();
    Eigen::VectorXd e0(dim);
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(dim, dim);
    std::vector<int> n;
    int sa = 0;
    int sb = 0;
    for (Eigen::Index col = 0; col < dim; ++col) {
        ps.decode(col, sa, sb, n);
        double e = 0.5 * omega * (2 * sa - 1) + 0.5 * omega * (2 * sb - 1);
        for (std::size_t k = 0; k < ps.modes; ++k) e += b.frequency(k) * n[k];
        e0(col) = e;
        for (int site = 0; site < 2; ++site) {
            const std::size_t s = site == 0 ? a : bb;
            const int fa = site == 0 ? 1 - sa : sa;
            const int fb = site == 0 ? sb : 1 - sb;
            for (std::size_t k = 0; k < ps.modes; ++k) {
                const C lam = b.coupling(s, k);
                std::vector<int> m = n;
                if (n[k] > 0) {  // a_k
                    m[k] = n[k] - 1;
                    v(ps.index(fa, fb, m), col) += lam * std::sqrt(static_cast<double>(n[k]));
                }
                if (n[k] + 1 < ProductSpace::kLocal) {  // a_k^dag
                    m[k] = n[k] + 1;
                    v(ps.index(fa, fb, m), col) += std::conj(lam) * std::sqrt(static_cast<double>(n[k] + 1));
                }
            }
        }
    }
    const Eigen::Index g = 0;
    Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(dim);
    psi0(g) = 1.0;
    auto resolve = [&](Eigen::VectorXcd x) {
        for (Eigen::Index i = 0; i < dim; ++i) x(i) = i == g ? C{0.0} : x(i) / (e0(g) - e0(i));
        return x;
    };
    Perturbed out{ps, resolve(v * psi0), {}};
    out.psi2 = resolve(v * out.psi1);
    return out;
}

Eigen::VectorXcd embed(const ProductSpace& ps, const StateExpansion& s, int order) {
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(ps.dim());
    for (const auto& t : s.terms) {
        if (t.order != order) continue;
        std::vector<int> n(ps.modes, 0);
        for (const auto& [k, c] : t.phonons.modes) n[k] = static_cast<int>(c);
        x(ps.index(spin_a_up(t.spins), spin_b_up(t.spins), n)) += t.coeff;
    }
    return x;
}

Scenario scenario(std::size_t a, std::size_t b, double omega, double eps = 1.0) {
    Scenario s;
    s.site_a = a;
    s.site_b = b;
    s.omega_a = s.omega_b = omega;
    s.epsilon = eps;
    return s;
}

}  // namespace

TEST_CASE("dressed ground state matches Rayleigh-Schroedinger on a small Fock space") {
    const ModeBasis chain = build_harmonic_chain({3, 1.0, 1.0, 1.0});
    const ModeBasis trap = build_ion_trap({3, 1.0});
    for (const ModeBasis* b : {&chain, &trap}) {
        for (double omega : {2.0, 0.7}) {
            const Perturbed ref = rayleigh_schroedinger(*b, 0, 2, omega);
            const StateExpansion g = dressed_ground_state(*b, scenario(0, 2, omega));
            CHECK((embed(ref.space, g, 1) - ref.psi1).cwiseAbs().maxCoeff() <= 1e-8);
            CHECK((embed(ref.space, g, 2) - ref.psi2).cwiseAbs().maxCoeff() <= 1e-8);
            CHECK(g.coefficient(0, SpinPattern::DownDown, Phonons::vacuum()) == C{1.0});
            CHECK(g.parity_consistent());
        }
    }
}

TEST_CASE("first-order coefficients") {
    const ModeBasis b = build_harmonic_chain({6, 1.0, 1.0, 1.0});
    const StateExpansion g = dressed_ground_state(b, scenario(1, 4, 2.0));
    for (std::size_t k = 0; k < 6; ++k) {
        const C expected = -std::conj(b.coupling(1, k)) / (2.0 + b.frequency(k));
        CHECK(std::abs(g.coefficient(1, SpinPattern::UpDown, Phonons::one(k)) - expected) < 1e-15);
    }
}

TEST_CASE("selection schemes") {
    const ModeBasis b = build_harmonic_chain({5, 1.0, 1.0, 1.0});
    const StateExpansion g = dressed_ground_state(b, scenario(0, 2, 2.0, 0.1));
    const StateExpansion x = initial_dressed_state(g, DressingScheme::SigmaX);
    const StateExpansion p = initial_dressed_state(g, DressingScheme::SigmaPlus);
    const StateExpansion bare = initial_dressed_state(g, DressingScheme::Bare);

    REQUIRE(bare.terms.size() == 1);
    CHECK(bare.amplitude(SpinPattern::UpDown, Phonons::vacuum()) == C{1.0});

    // sigma_x^A flips A in every component
    CHECK(x.terms.size() == g.terms.size());
    CHECK(x.coefficient(1, SpinPattern::DownDown, Phonons::one(3)) == g.coefficient(1, SpinPattern::UpDown, Phonons::one(3)));
    CHECK(x.coefficient(2, SpinPattern::DownUp, Phonons::vacuum()) == g.coefficient(2, SpinPattern::UpUp, Phonons::vacuum()));
    // sigma_+^A only keeps components where A was down
    CHECK(p.coefficient(1, SpinPattern::DownDown, Phonons::one(3)) == C{0.0});
    CHECK(p.coefficient(2, SpinPattern::DownUp, Phonons::vacuum()) == C{0.0});
    CHECK(p.coefficient(1, SpinPattern::UpUp, Phonons::one(3)) == g.coefficient(1, SpinPattern::DownUp, Phonons::one(3)));
    CHECK(p.parity_consistent());

    const StateExpansion xn = initial_dressed_state(g, DressingScheme::SigmaX, true);
    double norm1 = 0.0;
    for (const auto& t : x.terms)
        if (t.order == 1) norm1 += std::norm(t.coeff);
    CHECK(xn.coefficient(2, SpinPattern::UpDown, Phonons::vacuum()).real() == doctest::Approx(-0.5 * norm1));

    CHECK(factors(DressingScheme::SigmaX).d1 == 1.0);
    CHECK(factors(DressingScheme::SigmaPlus).d2 == 1.0);
    CHECK(factors(DressingScheme::Bare).d1 == 0.0);
}

TEST_CASE("bare scheme reproduces the bare amplitude") {
    const ModeBasis b = build_harmonic_chain({100, 1.0, 1.0, 1.0});
    Scenario s = scenario(0, 31, 2.0);
    s.opening_a = s.opening_b = OpeningFunction::sin_sq_window(0.1);
    const auto times = uniform_grid(0.0, 0.1, 41);
    const AmplitudeTrace d = dressed_amplitude(b, s, DressingScheme::Bare, times);
    const AmplitudeTrace r = bare_amplitude(b, s, times);
    for (std::size_t i = 0; i < times.size(); ++i) CHECK(std::abs(d.total[i] - r.total[i]) <= 1e-10 * std::abs(r.total[i]));
}

TEST_CASE("dressed amplitude at t = 0 is the static overlap") {
    const ModeBasis b = build_harmonic_chain({40, 1.0, 1.0, 1.0});
    Scenario s = scenario(3, 10, 2.0, 0.2);
    s.opening_a = s.opening_b = OpeningFunction::cos_sq_window(0.1);
    const std::vector<double> t0{0.0};
    const C x = dressed_amplitude(b, s, DressingScheme::SigmaX, t0).total[0];
    const C p = dressed_amplitude(b, s, DressingScheme::SigmaPlus, t0).total[0];
    const double g = 0.04 * static_dressing_amplitude(b, 2.0, 7);
    CHECK(x.real() == doctest::Approx(g).epsilon(1e-12));
    CHECK(std::abs(x.imag()) < 1e-15);
    CHECK(std::abs(p) < 1e-15);
    // and the initial state carries the same overlap with |down up 0>
    const StateExpansion init = initial_dressed_state(dressed_ground_state(b, s), DressingScheme::SigmaX);
    CHECK(init.amplitude(SpinPattern::DownUp, Phonons::vacuum()).real() == doctest::Approx(g).epsilon(1e-12));
}

TEST_CASE("static dressing amplitude") {
    const ModeBasis b = build_harmonic_chain({1000, 1.0, 1.0, 1.0});
    double prev = static_dressing_amplitude(b, 2.0, 1);
    for (std::size_t r = 2; r <= 500; ++r) {
        const double g = static_dressing_amplitude(b, 2.0, r);
        CHECK(g < prev);
        prev = g;
    }
    CHECK(static_dressing_amplitude(b, 2.0, 7) == static_dressing_amplitude(b, 2.0, 993));

    // N = 2 by hand: w_0 = 1, w_1 = sqrt(15)
    const double w1 = std::sqrt(15.0);
    const double expected = 1.0 / 24.0 - 1.0 / (8.0 * w1 * (2.0 + w1));
    const std::vector<std::size_t> two{2};
    CHECK(g_min(two, 2.0)[0] == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("G_min falls with the chain length") {
    std::vector<std::size_t> sizes;
    for (std::size_t n = 10; n <= 200; n += 2) sizes.push_back(n);
    const auto g = g_min(sizes, 2.0);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] < g[i - 1]);
    const std::vector<std::size_t> odd{11};
    CHECK_THROWS_AS(g_min(odd, 2.0), InvalidParameters);
    const std::vector<std::size_t> zero{0};
    CHECK_THROWS_AS(g_min(zero, 2.0), InvalidParameters);
}

TEST_CASE("unsupported configurations") {
    const ModeBasis b = build_harmonic_chain({10, 1.0, 1.0, 1.0});
    Scenario s = scenario(0, 3, 2.0);
    s.omega_b = 2.5;
    CHECK_THROWS_AS(dressed_ground_state(b, s), UnsupportedConfiguration);
    const std::vector<double> t{0.1};
    CHECK_THROWS_AS(dressed_amplitude(b, s, DressingScheme::SigmaX, t), UnsupportedConfiguration);
    CHECK_THROWS_AS(static_dressing_amplitude(build_ion_trap({3, 1.0}), 2.0, 1), UnsupportedConfiguration);
    CHECK_THROWS_AS(Phonons::pair(2, 2), InvalidParameters);
}
